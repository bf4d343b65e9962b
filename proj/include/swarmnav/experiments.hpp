#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "swarmnav/sim.hpp"
#include "swarmnav/terrain.hpp"

namespace swarmnav::experiments {

struct TerrainGenParams {
  int width_cells = 60;
  int height_cells = 60;
  Vec2 start{15.5, 15.5};
  Vec2 goal{44.5, 44.5};
  double lattice_cell_size = 10.0;
};

struct SweepSpec {
  std::vector<double> epsilons = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  std::vector<double> width_bins = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  int trials_per_cell = 100;
  std::uint64_t master_seed = 0;
  agent::NoiseConfig noise;
  sim::SimConfig sim;  // dt / budgets / max_robots / c; epsilon, seed and noise are set per trial
  TerrainGenParams terrain;
  int threads = 0;  // 0 picks the hardware concurrency
};

struct CollectedTerrain {
  terrain::GridTerrain grid;
  std::uint64_t perlin_seed = 0;
  double threshold_a = 0.0;
  double measured_width = 0.0;
  std::int64_t attempts = 0;  // attempts consumed before acceptance
};

struct TrialRecord {
  std::uint64_t terrain_seed = 0;
  std::uint64_t sim_seed = 0;
  sim::Reason outcome = sim::Reason::Timeout;
  bool success = false;
  int robots_used = 0;
  double elapsed = 0.0;
};

struct CellStats {
  int trials = 0;
  int successes = 0;
  double rate = 0.0;
};

// Success-rate matrix over (width bin, epsilon), width-major, plus the flat
// per-trial records in (bin, epsilon, trial) order.
struct SweepResult {
  std::vector<double> epsilons;
  std::vector<double> width_bins;
  std::vector<CellStats> matrix;
  std::vector<TrialRecord> trials;

  const CellStats& cell(std::size_t bin_idx, std::size_t eps_idx) const {
    return matrix[bin_idx * epsilons.size() + eps_idx];
  }
};

inline constexpr std::int64_t kRejectionBudget = 100000;  // per accepted terrain

// Deterministic per-trial seed, injective over a sweep's index ranges.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t eps_idx, std::size_t bin_idx,
                         int trial_idx);

// Rejection-samples terrains whose measured min_path_width lies within 0.25
// of width_bin and which have a start-goal path. Deterministic in
// master_seed; throws std::runtime_error when kRejectionBudget consecutive
// attempts fail to produce an acceptable terrain.
std::vector<CollectedTerrain> collect_terrains(double width_bin, int count,
                                               std::uint64_t master_seed,
                                               const TerrainGenParams& gen = {});

// Full sweep: one terrain corpus per width bin, reused across all epsilons.
// Trials run on a worker pool; results are identical for any thread count.
SweepResult run_sweep(const SweepSpec& spec);

// Same sweep against a caller-provided corpus (one list per width bin).
SweepResult run_sweep_with_corpus(const SweepSpec& spec,
                                  const std::vector<std::vector<CollectedTerrain>>& corpora);

// Paired arms over identical corpora and per-trial seeds: noise disabled,
// then spec.noise with noise forced on.
std::pair<SweepResult, SweepResult> run_noise_comparison(const SweepSpec& spec);

// CSV: header epsilon,width,trials,successes,rate; rows sorted by width
// descending, then epsilon ascending.
std::string sweep_csv(const SweepResult& r);

// Heatmap with one labelled cell per (epsilon, width). Deterministic bytes.
std::string heatmap_svg(const SweepResult& r);

// Reproducibility manifest: the spec and master seed that produced a sweep.
std::string sweep_manifest(const SweepSpec& spec);

void write_text_file(const std::string& text, const std::string& path);

}  // namespace swarmnav::experiments
