#include "swarmnav/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "swarmnav/format.hpp"

namespace swarmnav::experiments {

namespace {

constexpr std::uint64_t kTerrainTag = 0x7465727261696e00ull;
constexpr std::uint64_t kTrialTag = 0x747269616c000000ull;

std::uint64_t bin_key(double width_bin) {
  return static_cast<std::uint64_t>(std::llround(width_bin * 2.0));
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t eps_idx, std::size_t bin_idx,
                         int trial_idx) {
  return mix64({master_seed, kTrialTag, static_cast<std::uint64_t>(eps_idx),
                static_cast<std::uint64_t>(bin_idx), static_cast<std::uint64_t>(trial_idx)});
}

std::vector<CollectedTerrain> collect_terrains(double width_bin, int count,
                                               std::uint64_t master_seed,
                                               const TerrainGenParams& gen) {
  if (count < 1) throw std::invalid_argument("count must be at least 1");
  std::vector<CollectedTerrain> out;
  out.reserve(count);
  std::int64_t attempt = 0;
  std::int64_t attempts_since_accept = 0;
  while (static_cast<int>(out.size()) < count) {
    if (attempts_since_accept >= kRejectionBudget)
      throw std::runtime_error("width bin " + g9(width_bin) + " unreachable within " +
                               std::to_string(kRejectionBudget) + " rejections");
    std::uint64_t attempt_seed =
        mix64({master_seed, kTerrainTag, bin_key(width_bin), static_cast<std::uint64_t>(attempt)});
    ++attempt;
    ++attempts_since_accept;

    Rng rng(attempt_seed);
    terrain::PerlinConfig pc;
    pc.seed = rng();
    pc.lattice_cell_size = gen.lattice_cell_size;
    pc.threshold_a = uniform(rng, -1.0, 1.0);
    terrain::GridTerrain t = terrain::generate_terrain(pc, gen.width_cells, gen.height_cells,
                                                       gen.start, gen.goal, rng);
    if (!terrain::path_exists(t)) continue;
    double w = terrain::min_path_width(t);
    if (std::fabs(w - width_bin) > 0.25) continue;

    CollectedTerrain ct;
    ct.grid = std::move(t);
    ct.perlin_seed = pc.seed;
    ct.threshold_a = *pc.threshold_a;
    ct.measured_width = w;
    ct.attempts = attempts_since_accept;
    out.push_back(std::move(ct));
    attempts_since_accept = 0;
  }
  return out;
}

SweepResult run_sweep_with_corpus(const SweepSpec& spec,
                                  const std::vector<std::vector<CollectedTerrain>>& corpora) {
  if (spec.epsilons.empty() || spec.width_bins.empty())
    throw std::invalid_argument("epsilons and width_bins must be nonempty");
  if (spec.trials_per_cell < 1) throw std::invalid_argument("trials_per_cell must be >= 1");
  if (corpora.size() != spec.width_bins.size())
    throw std::invalid_argument("one corpus per width bin required");
  for (const auto& corpus : corpora)
    if (static_cast<int>(corpus.size()) < spec.trials_per_cell)
      throw std::invalid_argument("corpus smaller than trials_per_cell");

  const std::size_t n_eps = spec.epsilons.size();
  const std::size_t n_bins = spec.width_bins.size();
  const std::size_t tpc = static_cast<std::size_t>(spec.trials_per_cell);
  const std::size_t total = n_bins * n_eps * tpc;

  SweepResult result;
  result.epsilons = spec.epsilons;
  result.width_bins = spec.width_bins;
  result.matrix.assign(n_bins * n_eps, {});
  result.trials.assign(total, {});

  auto run_one = [&](std::size_t flat) {
    std::size_t b = flat / (n_eps * tpc);
    std::size_t e = (flat / tpc) % n_eps;
    int k = static_cast<int>(flat % tpc);
    const CollectedTerrain& ct = corpora[b][k];

    sim::SimConfig cfg = spec.sim;
    cfg.epsilon = spec.epsilons[e];
    cfg.noise = spec.noise;
    cfg.seed = trial_seed(spec.master_seed, e, b, k);
    auto [res, trace] = sim::run_trial(ct.grid, cfg);

    TrialRecord& rec = result.trials[flat];
    rec.terrain_seed = ct.perlin_seed;
    rec.sim_seed = cfg.seed;
    rec.outcome = res.reason;
    rec.success = res.success;
    rec.robots_used = res.robots_deployed;
    rec.elapsed = res.elapsed;
  };

  int threads = spec.threads > 0 ? spec.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(total)));

  if (threads == 1) {
    for (std::size_t i = 0; i < total; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= total) break;
        try {
          run_one(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  for (std::size_t b = 0; b < n_bins; ++b) {
    for (std::size_t e = 0; e < n_eps; ++e) {
      CellStats& cell = result.matrix[b * n_eps + e];
      cell.trials = spec.trials_per_cell;
      for (std::size_t k = 0; k < tpc; ++k)
        if (result.trials[(b * n_eps + e) * tpc + k].success) ++cell.successes;
      cell.rate = static_cast<double>(cell.successes) / cell.trials;
    }
  }
  return result;
}

namespace {

std::vector<std::vector<CollectedTerrain>> collect_corpora(const SweepSpec& spec) {
  std::vector<std::vector<CollectedTerrain>> corpora;
  corpora.reserve(spec.width_bins.size());
  for (double bin : spec.width_bins)
    corpora.push_back(
        collect_terrains(bin, spec.trials_per_cell, spec.master_seed, spec.terrain));
  return corpora;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  return run_sweep_with_corpus(spec, collect_corpora(spec));
}

std::pair<SweepResult, SweepResult> run_noise_comparison(const SweepSpec& spec) {
  auto corpora = collect_corpora(spec);
  SweepSpec clean = spec;
  clean.noise.enabled = false;
  SweepSpec noisy = spec;
  noisy.noise.enabled = true;
  return {run_sweep_with_corpus(clean, corpora), run_sweep_with_corpus(noisy, corpora)};
}

std::string sweep_csv(const SweepResult& r) {
  // Row order: width bins descending, epsilons ascending within a width.
  std::vector<std::size_t> bin_order(r.width_bins.size());
  for (std::size_t i = 0; i < bin_order.size(); ++i) bin_order[i] = i;
  std::sort(bin_order.begin(), bin_order.end(),
            [&](std::size_t a, std::size_t b) { return r.width_bins[a] > r.width_bins[b]; });
  std::vector<std::size_t> eps_order(r.epsilons.size());
  for (std::size_t i = 0; i < eps_order.size(); ++i) eps_order[i] = i;
  std::sort(eps_order.begin(), eps_order.end(),
            [&](std::size_t a, std::size_t b) { return r.epsilons[a] < r.epsilons[b]; });

  std::ostringstream os;
  os << "epsilon,width,trials,successes,rate\n";
  for (std::size_t b : bin_order) {
    for (std::size_t e : eps_order) {
      const CellStats& cell = r.cell(b, e);
      os << g9(r.epsilons[e]) << "," << g9(r.width_bins[b]) << "," << cell.trials << ","
         << cell.successes << "," << g9(cell.rate) << "\n";
    }
  }
  return os.str();
}

namespace {

std::string rate_color(double rate) {
  // Low rates red (215,48,39), high rates green (26,152,80).
  auto mixc = [&](int lo, int hi) {
    return static_cast<int>(std::lround(lo + (hi - lo) * rate));
  };
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", mixc(215, 26), mixc(48, 152), mixc(39, 80));
  return buf;
}

std::string fmt_rate(double rate) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", rate);
  return buf;
}

}  // namespace

std::string heatmap_svg(const SweepResult& r) {
  const int cell_px = 56;
  const int margin_left = 70, margin_bottom = 58, margin_top = 14, margin_right = 14;
  const int n_eps = static_cast<int>(r.epsilons.size());
  const int n_bins = static_cast<int>(r.width_bins.size());
  const int width = margin_left + n_eps * cell_px + margin_right;
  const int height = margin_top + n_bins * cell_px + margin_bottom;

  std::vector<std::size_t> eps_order(r.epsilons.size());
  for (std::size_t i = 0; i < eps_order.size(); ++i) eps_order[i] = i;
  std::sort(eps_order.begin(), eps_order.end(),
            [&](std::size_t a, std::size_t b) { return r.epsilons[a] < r.epsilons[b]; });
  std::vector<std::size_t> bin_order(r.width_bins.size());
  for (std::size_t i = 0; i < bin_order.size(); ++i) bin_order[i] = i;
  std::sort(bin_order.begin(), bin_order.end(),
            [&](std::size_t a, std::size_t b) { return r.width_bins[a] < r.width_bins[b]; });

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  for (int bi = 0; bi < n_bins; ++bi) {
    // Largest width at the top.
    int y = margin_top + (n_bins - 1 - bi) * cell_px;
    for (int ei = 0; ei < n_eps; ++ei) {
      int x = margin_left + ei * cell_px;
      const CellStats& cell = r.cell(bin_order[bi], eps_order[ei]);
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_px << "\" height=\""
         << cell_px << "\" fill=\"" << rate_color(cell.rate)
         << "\" stroke=\"white\" stroke-width=\"1\"/>\n";
      os << "<text x=\"" << x + cell_px / 2 << "\" y=\"" << y + cell_px / 2 + 5
         << "\" text-anchor=\"middle\" fill=\"black\">" << fmt_rate(cell.rate) << "</text>\n";
    }
    os << "<text x=\"" << margin_left - 8 << "\" y=\"" << y + cell_px / 2 + 5
       << "\" text-anchor=\"end\" fill=\"black\">" << g9(r.width_bins[bin_order[bi]])
       << "</text>\n";
  }
  for (int ei = 0; ei < n_eps; ++ei) {
    int x = margin_left + ei * cell_px;
    os << "<text x=\"" << x + cell_px / 2 << "\" y=\""
       << margin_top + n_bins * cell_px + 20 << "\" text-anchor=\"middle\" fill=\"black\">"
       << g9(r.epsilons[eps_order[ei]]) << "</text>\n";
  }
  os << "<text x=\"" << margin_left + n_eps * cell_px / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" fill=\"black\">circumferential radius</text>\n";
  os << "<text x=\"16\" y=\"" << margin_top + n_bins * cell_px / 2
     << "\" text-anchor=\"middle\" fill=\"black\" transform=\"rotate(-90 16 "
     << margin_top + n_bins * cell_px / 2 << ")\">minimum path width</text>\n";
  os << "</svg>\n";
  return os.str();
}

namespace {

void write_double_list(std::ostringstream& os, const std::vector<double>& xs) {
  os << "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ",";
    os << g9(xs[i]);
  }
  os << "]";
}

}  // namespace

std::string sweep_manifest(const SweepSpec& spec) {
  std::ostringstream os;
  os << "{\"format\":\"swarmnav-sweep-manifest\",\"version\":1";
  os << ",\"master_seed\":" << spec.master_seed;
  os << ",\"epsilons\":";
  write_double_list(os, spec.epsilons);
  os << ",\"width_bins\":";
  write_double_list(os, spec.width_bins);
  os << ",\"trials_per_cell\":" << spec.trials_per_cell;
  os << ",\"noise\":{\"enabled\":" << (spec.noise.enabled ? "true" : "false")
     << ",\"strength_lo\":" << g9(spec.noise.strength_factor_lo)
     << ",\"strength_hi\":" << g9(spec.noise.strength_factor_hi)
     << ",\"angle_lo\":" << g9(spec.noise.grad_angle_lo)
     << ",\"angle_hi\":" << g9(spec.noise.grad_angle_hi) << "}";
  os << ",\"sim\":{\"dt\":" << g9(spec.sim.dt) << ",\"time_budget\":" << g9(spec.sim.time_budget)
     << ",\"goal_tolerance\":" << g9(spec.sim.goal_tolerance)
     << ",\"max_robots\":" << spec.sim.max_robots << ",\"c\":" << g9(spec.sim.c) << "}";
  os << ",\"terrain\":{\"width\":" << spec.terrain.width_cells
     << ",\"height\":" << spec.terrain.height_cells << ",\"start\":[" << g9(spec.terrain.start.x)
     << "," << g9(spec.terrain.start.y) << "],\"goal\":[" << g9(spec.terrain.goal.x) << ","
     << g9(spec.terrain.goal.y) << "],\"lattice\":" << g9(spec.terrain.lattice_cell_size) << "}";
  os << "}\n";
  return os.str();
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace swarmnav::experiments
