// swarmnav: deterministic swarm-navigation simulator and experiment harness.
//
// Exit codes: 0 success, 1 navigation failure, 2 usage error, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swarmnav/acoustic.hpp"
#include "swarmnav/experiments.hpp"
#include "swarmnav/format.hpp"
#include "swarmnav/render.hpp"
#include "swarmnav/sim.hpp"

namespace {

using namespace swarmnav;

std::string noise_desc(const agent::NoiseConfig& n) {
  if (!n.enabled) return "off";
  return "on[" + g9(n.strength_factor_lo) + "," + g9(n.strength_factor_hi) + ";" +
         g9(n.grad_angle_lo) + "," + g9(n.grad_angle_hi) + "]";
}

void print_sim_result(const sim::SimResult& res) {
  std::cout << "result: " << sim::reason_name(res.reason)
            << " robots_deployed=" << res.robots_deployed
            << " robots_stuck=" << res.robots_stuck << " elapsed=" << g9(res.elapsed) << "\n";
}

int run_terrain_gen(std::uint64_t seed, int size, double lattice,
                    std::optional<double> threshold, std::optional<double> sx,
                    std::optional<double> sy, std::optional<double> gx,
                    std::optional<double> gy, const std::string& out) {
  Vec2 start{sx.value_or(15.5), sy.value_or(15.5)};
  Vec2 goal{gx.value_or(size - 15.5), gy.value_or(size - 15.5)};
  std::cout << "config: terrain-gen seed=" << seed << " size=" << size
            << " lattice=" << g9(lattice)
            << " threshold=" << (threshold ? g9(*threshold) : std::string("random"))
            << " start=" << g9(start.x) << "," << g9(start.y) << " goal=" << g9(goal.x) << ","
            << g9(goal.y) << " out=" << out << "\n";

  Rng rng(seed);
  terrain::PerlinConfig pc;
  pc.seed = seed;
  pc.lattice_cell_size = lattice;
  pc.threshold_a = threshold;
  terrain::GridTerrain t = terrain::generate_terrain(pc, size, size, start, goal, rng);
  terrain::save_terrain_file(t, out);
  terrain::TerrainSummary s = terrain::summarize(t);
  int impassable = 0;
  for (auto c : t.cells) impassable += c;
  std::cout << "terrain: impassable_cells=" << impassable
            << " path_exists=" << (s.path_exists ? "true" : "false")
            << " min_path_width=" << g9(s.min_path_width) << "\n";
  return 0;
}

int run_terrain_width(const std::string& file) {
  std::cout << "config: terrain-width terrain=" << file << "\n";
  terrain::GridTerrain t = terrain::load_terrain_file(file);
  terrain::TerrainSummary s = terrain::summarize(t);
  std::cout << "terrain: path_exists=" << (s.path_exists ? "true" : "false")
            << " min_path_width=" << g9(s.min_path_width) << "\n";
  return 0;
}

void write_frames(const sim::SimTrace& trace, const std::string& dir, int every) {
  std::filesystem::create_directories(dir);
  auto frame_path = [&](int frame) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05d.svg", frame);
    return (std::filesystem::path(dir) / name).string();
  };
  int frame = 0;
  for (std::size_t i = 0; i < trace.ticks.size(); i += every, ++frame)
    experiments::write_text_file(render::trace_svg(trace, trace.ticks[i].t),
                                 frame_path(frame));
  // Final frame always shows the whole run.
  experiments::write_text_file(render::trace_svg(trace), frame_path(frame));
}

int run_sim(const std::string& terrain_file, sim::SimConfig cfg, bool noise_on,
            const std::string& trace_out, const std::string& frames_out, int frame_every) {
  cfg.noise.enabled = noise_on;
  std::cout << "config: sim-run terrain=" << terrain_file << " epsilon=" << g9(cfg.epsilon)
            << " g_th=" << g9(cfg.g_th()) << " c=" << g9(cfg.c) << " dt=" << g9(cfg.dt)
            << " time_budget=" << g9(cfg.time_budget)
            << " goal_tolerance=" << g9(cfg.goal_tolerance) << " max_robots=" << cfg.max_robots
            << " noise=" << noise_desc(cfg.noise) << " seed=" << cfg.seed << "\n";

  terrain::GridTerrain t = terrain::load_terrain_file(terrain_file);
  auto [res, trace] = sim::run_trial(t, cfg);
  if (!trace_out.empty()) sim::save_trace_file(trace, trace_out);
  if (!frames_out.empty()) write_frames(trace, frames_out, frame_every);
  print_sim_result(res);
  return res.success ? 0 : 1;
}

experiments::SweepSpec make_spec(const std::vector<double>& epsilons,
                                 const std::vector<double>& widths, int trials,
                                 std::uint64_t master_seed, bool noise_on, int threads,
                                 const sim::SimConfig& sim_base) {
  experiments::SweepSpec spec;
  if (!epsilons.empty()) spec.epsilons = epsilons;
  if (!widths.empty()) spec.width_bins = widths;
  spec.trials_per_cell = trials;
  spec.master_seed = master_seed;
  spec.noise.enabled = noise_on;
  spec.threads = threads;
  spec.sim = sim_base;
  return spec;
}

void print_spec(const char* name, const experiments::SweepSpec& spec) {
  std::cout << "config: " << name << " epsilons=";
  for (std::size_t i = 0; i < spec.epsilons.size(); ++i)
    std::cout << (i ? "," : "") << g9(spec.epsilons[i]);
  std::cout << " widths=";
  for (std::size_t i = 0; i < spec.width_bins.size(); ++i)
    std::cout << (i ? "," : "") << g9(spec.width_bins[i]);
  std::cout << " trials_per_cell=" << spec.trials_per_cell
            << " noise=" << noise_desc(spec.noise) << " threads=" << spec.threads
            << " master_seed=" << spec.master_seed << "\n";
}

void print_matrix(const experiments::SweepResult& r) {
  for (std::size_t b = r.width_bins.size(); b-- > 0;) {
    std::cout << "width " << g9(r.width_bins[b]) << ":";
    for (std::size_t e = 0; e < r.epsilons.size(); ++e) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), " %.2f", r.cell(b, e).rate);
      std::cout << buf;
    }
    std::cout << "\n";
  }
}

int run_sweep_cmd(const experiments::SweepSpec& spec, const std::string& out_csv,
                  const std::string& out_svg, const std::string& out_manifest) {
  print_spec("sweep", spec);
  experiments::SweepResult result = experiments::run_sweep(spec);
  print_matrix(result);
  if (!out_csv.empty()) experiments::write_text_file(experiments::sweep_csv(result), out_csv);
  if (!out_svg.empty()) experiments::write_text_file(experiments::heatmap_svg(result), out_svg);
  if (!out_manifest.empty())
    experiments::write_text_file(experiments::sweep_manifest(spec), out_manifest);
  return 0;
}

int run_noise_compare_cmd(const experiments::SweepSpec& spec, const std::string& out_clean,
                          const std::string& out_noise, const std::string& out_manifest) {
  print_spec("noise-compare", spec);
  auto [clean, noisy] = experiments::run_noise_comparison(spec);
  std::cout << "clean:\n";
  print_matrix(clean);
  std::cout << "noise:\n";
  print_matrix(noisy);
  if (!out_clean.empty()) experiments::write_text_file(experiments::sweep_csv(clean), out_clean);
  if (!out_noise.empty()) experiments::write_text_file(experiments::sweep_csv(noisy), out_noise);
  if (!out_manifest.empty())
    experiments::write_text_file(experiments::sweep_manifest(spec), out_manifest);
  return 0;
}

int run_acoustic_cmd(acoustic::AcousticRunConfig rc,
                     const std::vector<std::vector<double>>& emitters, double default_radius,
                     const std::string& trace_out) {
  for (const auto& e : emitters) {
    if (e.size() != 3) throw CLI::ValidationError("--emitter needs x,y,gain");
    rc.emitters.push_back({e[0], e[1], e[2]});
  }
  if (rc.emitters.empty()) {
    // One emitter just off the start-goal line, sized to circulate at
    // default_radius.
    Vec2 mid = (rc.start + rc.goal) * 0.5;
    rc.emitters.push_back(
        {mid.x, mid.y + 0.2 * default_radius,
         acoustic::gain_for_radius(default_radius, rc.params.v_target)});
  }
  std::cout << "config: acoustic-run sensing="
            << (rc.sensing == acoustic::Sensing::Mic ? "mic" : "exact")
            << " start=" << g9(rc.start.x) << "," << g9(rc.start.y) << " goal=" << g9(rc.goal.x)
            << "," << g9(rc.goal.y) << " emitters=" << rc.emitters.size()
            << " v_target=" << g9(rc.params.v_target) << " v_min=" << g9(rc.params.v_min)
            << " k_p=" << g9(rc.params.k_p) << " alpha=" << g9(rc.params.alpha)
            << " dt=" << g9(rc.params.dt) << " noise=" << noise_desc(rc.noise)
            << " seed=" << rc.seed << "\n";
  auto [res, trace] = acoustic::run_acoustic_trial(rc);
  if (!trace_out.empty()) sim::save_trace_file(trace, trace_out);
  print_sim_result(res);
  return res.success ? 0 : 1;
}

int run_render(const std::string& trace_file, const std::string& out,
               std::optional<double> at_time) {
  std::cout << "config: render trace=" << trace_file << " out=" << out
            << " at_time=" << (at_time ? g9(*at_time) : std::string("end")) << "\n";
  sim::SimTrace trace = sim::load_trace_file(trace_file);
  experiments::write_text_file(render::trace_svg(trace, at_time), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmnav: potential-field swarm navigation simulator"};
  app.require_subcommand(1);

  // terrain-gen
  auto* gen = app.add_subcommand("terrain-gen", "generate a Perlin-noise terrain file");
  std::uint64_t gen_seed = 0;
  int gen_size = 60;
  double gen_lattice = 10.0;
  std::optional<double> gen_threshold;
  bool gen_random_threshold = false;
  std::optional<double> gen_sx, gen_sy, gen_gx, gen_gy;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "noise seed");
  gen->add_option("--size", gen_size, "grid side length in cells")->check(CLI::Range(20, 4096));
  gen->add_option("--lattice", gen_lattice, "noise lattice cell size");
  auto* thr = gen->add_option("--threshold", gen_threshold, "classification threshold in [-1,1]");
  gen->add_flag("--random-threshold", gen_random_threshold, "draw the threshold from the seed")
      ->excludes(thr);
  gen->add_option("--start-x", gen_sx, "start x (default 15.5)");
  gen->add_option("--start-y", gen_sy, "start y (default 15.5)");
  gen->add_option("--goal-x", gen_gx, "goal x (default size-15.5)");
  gen->add_option("--goal-y", gen_gy, "goal y (default size-15.5)");
  gen->add_option("--out", gen_out, "terrain file to write")->required();

  // terrain-width
  auto* tw = app.add_subcommand("terrain-width", "report path existence and bottleneck width");
  std::string tw_file;
  tw->add_option("--terrain", tw_file, "terrain file")->required();

  // sim-run
  auto* sr = app.add_subcommand("sim-run", "run one sequential-deployment trial");
  std::string sr_terrain, sr_trace_out, sr_frames_out;
  sim::SimConfig sr_cfg;
  bool sr_noise = false;
  int sr_frame_every = 100;
  sr->add_option("--terrain", sr_terrain, "terrain file")->required();
  sr->add_option("--epsilon", sr_cfg.epsilon, "circumferential radius");
  sr->add_option("--seed", sr_cfg.seed, "trial seed");
  sr->add_flag("--noise", sr_noise, "enable sensing noise");
  sr->add_option("--dt", sr_cfg.dt, "tick length in seconds");
  sr->add_option("--time-budget", sr_cfg.time_budget, "simulated-time budget");
  sr->add_option("--goal-tolerance", sr_cfg.goal_tolerance, "goal arrival tolerance");
  sr->add_option("--max-robots", sr_cfg.max_robots, "deployment cap");
  sr->add_option("--c", sr_cfg.c, "field strength constant");
  sr->add_option("--trace-out", sr_trace_out, "trace file to write");
  sr->add_option("--frames-out", sr_frames_out, "directory for SVG frames");
  sr->add_option("--frame-every", sr_frame_every, "ticks between frames")
      ->check(CLI::PositiveNumber);

  // sweep
  auto* sw = app.add_subcommand("sweep", "epsilon x width success-rate sweep");
  std::vector<double> sw_eps, sw_widths;
  int sw_trials = 100;
  std::uint64_t sw_seed = 0;
  bool sw_noise = false;
  int sw_threads = 0;
  std::string sw_csv, sw_svg, sw_manifest;
  sim::SimConfig sw_sim;
  sw->add_option("--epsilons", sw_eps, "epsilon values")->delimiter(',');
  sw->add_option("--widths", sw_widths, "width bins")->delimiter(',');
  sw->add_option("--trials", sw_trials, "trials per cell")->check(CLI::PositiveNumber);
  sw->add_option("--master-seed", sw_seed, "master seed");
  sw->add_flag("--noise", sw_noise, "enable sensing noise");
  sw->add_option("--threads", sw_threads, "worker threads (0 = auto)");
  sw->add_option("--time-budget", sw_sim.time_budget, "per-trial simulated-time budget");
  sw->add_option("--max-robots", sw_sim.max_robots, "per-trial deployment cap");
  sw->add_option("--out-csv", sw_csv, "success-rate CSV path");
  sw->add_option("--out-svg", sw_svg, "heatmap SVG path");
  sw->add_option("--out-manifest", sw_manifest, "run manifest path");

  // noise-compare
  auto* nc = app.add_subcommand("noise-compare", "paired sweep with and without noise");
  std::vector<double> nc_eps, nc_widths;
  int nc_trials = 100;
  std::uint64_t nc_seed = 0;
  int nc_threads = 0;
  std::string nc_clean, nc_noise, nc_manifest;
  sim::SimConfig nc_sim;
  nc->add_option("--epsilons", nc_eps, "epsilon values")->delimiter(',');
  nc->add_option("--widths", nc_widths, "width bins")->delimiter(',');
  nc->add_option("--trials", nc_trials, "trials per cell")->check(CLI::PositiveNumber);
  nc->add_option("--master-seed", nc_seed, "master seed");
  nc->add_option("--threads", nc_threads, "worker threads (0 = auto)");
  nc->add_option("--time-budget", nc_sim.time_budget, "per-trial simulated-time budget");
  nc->add_option("--max-robots", nc_sim.max_robots, "per-trial deployment cap");
  nc->add_option("--out-csv-clean", nc_clean, "noiseless CSV path");
  nc->add_option("--out-csv-noise", nc_noise, "noisy CSV path");
  nc->add_option("--out-manifest", nc_manifest, "run manifest path");

  // acoustic-run
  auto* ac = app.add_subcommand("acoustic-run", "closed-loop mic-array navigation run");
  acoustic::AcousticRunConfig ac_rc;
  std::string ac_mode = "mic", ac_trace_out;
  std::vector<std::vector<double>> ac_emitters;
  double ac_radius = 0.5;
  bool ac_noise = false;
  ac->add_option("--mode", ac_mode, "sensing: mic or exact")
      ->check(CLI::IsMember({"mic", "exact"}));
  ac->add_option("--start-x", ac_rc.start.x, "start x (m)");
  ac->add_option("--start-y", ac_rc.start.y, "start y (m)");
  ac->add_option("--goal-x", ac_rc.goal.x, "goal x (m)");
  ac->add_option("--goal-y", ac_rc.goal.y, "goal y (m)");
  ac->add_option("--emitter", ac_emitters, "emitter as x,y,gain (repeatable)")->delimiter(',');
  ac->add_option("--radius", ac_radius, "default emitter bypass radius (m)");
  ac->add_option("--v-target", ac_rc.params.v_target, "contour setpoint");
  ac->add_option("--v-min", ac_rc.params.v_min, "lost-signal threshold");
  ac->add_option("--k-p", ac_rc.params.k_p, "P gain");
  ac->add_option("--alpha", ac_rc.params.alpha, "V_e weighting");
  ac->add_option("--dt", ac_rc.params.dt, "tick length (s)");
  ac->add_option("--time-budget", ac_rc.time_budget, "run budget (s)");
  ac->add_option("--goal-tolerance", ac_rc.goal_tolerance, "goal tolerance (m)");
  ac->add_option("--seed", ac_rc.seed, "noise seed");
  ac->add_flag("--noise", ac_noise, "enable per-mic noise");
  ac->add_option("--trace-out", ac_trace_out, "trace file to write");

  // render
  auto* rd = app.add_subcommand("render", "draw a trace as SVG");
  std::string rd_trace, rd_out;
  std::optional<double> rd_time;
  rd->add_option("--trace", rd_trace, "trace file")->required();
  rd->add_option("--out", rd_out, "SVG path")->required();
  rd->add_option("--at-time", rd_time, "truncate at simulated time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen)
      return run_terrain_gen(gen_seed, gen_size, gen_lattice,
                             gen_random_threshold ? std::optional<double>{} : gen_threshold,
                             gen_sx, gen_sy, gen_gx, gen_gy, gen_out);
    if (*tw) return run_terrain_width(tw_file);
    if (*sr)
      return run_sim(sr_terrain, sr_cfg, sr_noise, sr_trace_out, sr_frames_out, sr_frame_every);
    if (*sw)
      return run_sweep_cmd(make_spec(sw_eps, sw_widths, sw_trials, sw_seed, sw_noise,
                                     sw_threads, sw_sim),
                           sw_csv, sw_svg, sw_manifest);
    if (*nc)
      return run_noise_compare_cmd(
          make_spec(nc_eps, nc_widths, nc_trials, nc_seed, true, nc_threads, nc_sim), nc_clean,
          nc_noise, nc_manifest);
    if (*ac) {
      ac_rc.sensing = ac_mode == "mic" ? acoustic::Sensing::Mic : acoustic::Sensing::Exact;
      ac_rc.noise.enabled = ac_noise;
      return run_acoustic_cmd(ac_rc, ac_emitters, ac_radius, ac_trace_out);
    }
    if (*rd) return run_render(rd_trace, rd_out, rd_time);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
