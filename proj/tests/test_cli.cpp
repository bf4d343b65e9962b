// End-to-end checks of the swarmnav binary: flags, outputs, exit codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "helpers.hpp"
#include "swarmnav/sim.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string output;
};

std::string cli_path() {
  const char* p = std::getenv("SWARMNAV_CLI");
  REQUIRE(p != nullptr);
  return p;
}

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "swarmnav_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  fs::path out = work_dir() / "stdout.txt";
  std::string cmd = cli_path() + " " + args + " > " + out.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = testutil::read_file(out.string());
  return r;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

}  // namespace

TEST_CASE("terrain-gen with threshold one reports an empty terrain") {
  auto r = run_cli("terrain-gen --seed 3 --threshold 1.0 --out " + path_of("open.terrain"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("impassable_cells=0") != std::string::npos);
  CHECK(r.output.find("path_exists=true") != std::string::npos);
  CHECK(r.output.find("config:") != std::string::npos);
  CHECK(r.output.find("seed=3") != std::string::npos);
}

TEST_CASE("terrain-gen is reproducible flag-for-flag") {
  auto r1 = run_cli("terrain-gen --seed 11 --random-threshold --out " + path_of("a.terrain"));
  auto r2 = run_cli("terrain-gen --seed 11 --random-threshold --out " + path_of("b.terrain"));
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(testutil::read_file(path_of("a.terrain")) == testutil::read_file(path_of("b.terrain")));
}

TEST_CASE("terrain-gen golden file for seed 7 threshold 0") {
  auto r = run_cli("terrain-gen --seed 7 --threshold 0 --out " + path_of("seed7.terrain"));
  CHECK(r.exit_code == 0);
  CHECK(testutil::read_file(path_of("seed7.terrain")) ==
        testutil::read_file(testutil::data_path("terrain_seed7.terrain")));
}

TEST_CASE("terrain-width reads back a saved terrain") {
  run_cli("terrain-gen --seed 3 --threshold 1.0 --out " + path_of("open.terrain"));
  auto r = run_cli("terrain-width --terrain " + path_of("open.terrain"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("path_exists=true") != std::string::npos);
  CHECK(r.output.find("min_path_width=31") != std::string::npos);
}

TEST_CASE("sim-run crosses an open terrain with exit zero") {
  run_cli("terrain-gen --seed 3 --threshold 1.0 --out " + path_of("open.terrain"));
  auto r = run_cli("sim-run --terrain " + path_of("open.terrain") + " --epsilon 1 --seed 5" +
                   " --trace-out " + path_of("open.trace"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("result: Reached") != std::string::npos);
  CHECK(r.output.find("robots_deployed=1") != std::string::npos);

  auto trace = swarmnav::sim::load_trace_file(path_of("open.trace"));
  CHECK(trace.header.kind == "sim");
  CHECK_FALSE(trace.ticks.empty());
}

TEST_CASE("sim-run traces are byte identical across invocations") {
  run_cli("terrain-gen --seed 8 --threshold 0.1 --out " + path_of("t8.terrain"));
  auto r1 = run_cli("sim-run --terrain " + path_of("t8.terrain") +
                    " --epsilon 1.5 --seed 9 --noise --trace-out " + path_of("t8a.trace"));
  auto r2 = run_cli("sim-run --terrain " + path_of("t8.terrain") +
                    " --epsilon 1.5 --seed 9 --noise --trace-out " + path_of("t8b.trace"));
  CHECK(r1.exit_code == r2.exit_code);
  CHECK(testutil::read_file(path_of("t8a.trace")) == testutil::read_file(path_of("t8b.trace")));
}

TEST_CASE("sim-run returns one when the swarm fails") {
  // A start zone sealed by a ring of walls exhausts the robots.
  auto t = testutil::open_terrain(60, 60, {15.5, 15.5}, {44.5, 44.5});
  testutil::fill_rect(t, 7, 7, 23, 8);
  testutil::fill_rect(t, 7, 22, 23, 23);
  testutil::fill_rect(t, 7, 7, 8, 23);
  testutil::fill_rect(t, 22, 7, 23, 23);
  swarmnav::terrain::save_terrain_file(t, path_of("sealed.terrain"));
  auto r = run_cli("sim-run --terrain " + path_of("sealed.terrain") +
                   " --epsilon 1 --max-robots 5");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("result: RobotsExhausted") != std::string::npos);
}

TEST_CASE("sim-run writes frame sequences") {
  run_cli("terrain-gen --seed 3 --threshold 1.0 --out " + path_of("open.terrain"));
  auto r = run_cli("sim-run --terrain " + path_of("open.terrain") +
                   " --frames-out " + path_of("frames") + " --frame-every 200");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(work_dir() / "frames" / "frame_00000.svg"));
  CHECK(fs::exists(work_dir() / "frames" / "frame_00001.svg"));
}

TEST_CASE("unknown flags are a usage error") {
  auto r = run_cli("sim-run --no-such-flag 1");
  CHECK(r.exit_code == 2);
  auto r2 = run_cli("definitely-not-a-subcommand");
  CHECK(r2.exit_code == 2);
  auto r3 = run_cli("sim-run");  // missing required --terrain
  CHECK(r3.exit_code == 2);
}

TEST_CASE("missing files are an io error") {
  auto r = run_cli("sim-run --terrain " + path_of("nope.terrain"));
  CHECK(r.exit_code == 3);
  auto r2 = run_cli("render --trace " + path_of("nope.trace") + " --out " + path_of("x.svg"));
  CHECK(r2.exit_code == 3);
}

TEST_CASE("sweep writes csv svg and manifest") {
  auto r = run_cli("sweep --epsilons 1,2 --widths 2,3 --trials 2 --master-seed 5"
                   " --time-budget 2000 --threads 2 --out-csv " + path_of("sweep.csv") +
                   " --out-svg " + path_of("sweep.svg") + " --out-manifest " +
                   path_of("sweep.json"));
  CHECK(r.exit_code == 0);
  std::string csv = testutil::read_file(path_of("sweep.csv"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 cells
  CHECK(csv.rfind("epsilon,width,trials,successes,rate", 0) == 0);
  std::string svg = testutil::read_file(path_of("sweep.svg"));
  CHECK(svg.rfind("<svg", 0) == 0);
  std::string manifest = testutil::read_file(path_of("sweep.json"));
  CHECK(manifest.find("\"master_seed\":5") != std::string::npos);
}

TEST_CASE("noise-compare writes both arms") {
  auto r = run_cli("noise-compare --epsilons 1 --widths 2 --trials 2 --master-seed 6"
                   " --time-budget 2000 --threads 2 --out-csv-clean " + path_of("clean.csv") +
                   " --out-csv-noise " + path_of("noise.csv"));
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(path_of("clean.csv")));
  CHECK(fs::exists(path_of("noise.csv")));
  std::string clean = testutil::read_file(path_of("clean.csv"));
  CHECK(std::count(clean.begin(), clean.end(), '\n') == 2);
}

TEST_CASE("acoustic-run reaches the goal and renders") {
  auto r = run_cli("acoustic-run --mode mic --trace-out " + path_of("acoustic.trace"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("result: Reached") != std::string::npos);
  auto rr = run_cli("render --trace " + path_of("acoustic.trace") + " --out " +
                    path_of("acoustic.svg"));
  CHECK(rr.exit_code == 0);
  CHECK(testutil::read_file(path_of("acoustic.svg")).rfind("<svg", 0) == 0);
}

TEST_CASE("render draws a sim trace and honors time cutoffs") {
  run_cli("terrain-gen --seed 8 --threshold 0.1 --out " + path_of("t8.terrain"));
  run_cli("sim-run --terrain " + path_of("t8.terrain") + " --epsilon 1.5 --seed 9" +
          " --trace-out " + path_of("t8.trace"));
  auto r = run_cli("render --trace " + path_of("t8.trace") + " --out " + path_of("t8.svg"));
  CHECK(r.exit_code == 0);
  auto r2 = run_cli("render --trace " + path_of("t8.trace") + " --at-time 5 --out " +
                    path_of("t8_early.svg"));
  CHECK(r2.exit_code == 0);
  // The truncated drawing is a strict prefix of the run, hence smaller.
  CHECK(fs::file_size(path_of("t8_early.svg")) < fs::file_size(path_of("t8.svg")));
}

TEST_CASE("render of a header-only trace shows terrain only") {
  auto t = testutil::open_terrain(60, 60, {15.5, 15.5}, {44.5, 44.5});
  swarmnav::sim::SimTrace tr;
  tr.header.kind = "sim";
  tr.header.terrain = t;
  swarmnav::sim::save_trace_file(tr, path_of("empty.trace"));
  auto r = run_cli("render --trace " + path_of("empty.trace") + " --out " + path_of("empty.svg"));
  CHECK(r.exit_code == 0);
  std::string svg = testutil::read_file(path_of("empty.svg"));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") == std::string::npos);
}
