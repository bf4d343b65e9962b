#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swarmnav/geometry.hpp"
#include "swarmnav/rng.hpp"

namespace swarmnav::terrain {

// Occupancy grid over unit cells. Cell (col, row) covers
// [col, col+1) x [row, row+1); cells are stored row-major, row 0 first.
// Everything outside the grid counts as impassable.
struct GridTerrain {
  int width_cells = 60;
  int height_cells = 60;
  std::vector<std::uint8_t> cells;  // 0 = passable, 1 = impassable
  Vec2 start{15.5, 15.5};
  Vec2 goal{44.5, 44.5};

  bool in_bounds(int col, int row) const {
    return col >= 0 && col < width_cells && row >= 0 && row < height_cells;
  }
  bool impassable(int col, int row) const {
    if (!in_bounds(col, row)) return true;
    return cells[static_cast<std::size_t>(row) * width_cells + col] != 0;
  }
  bool passable(int col, int row) const { return !impassable(col, row); }
  void set_cell(int col, int row, bool impass) {
    cells[static_cast<std::size_t>(row) * width_cells + col] = impass ? 1 : 0;
  }
};

struct PerlinConfig {
  std::uint64_t seed = 0;
  double lattice_cell_size = 10.0;
  std::optional<double> threshold_a;  // drawn uniformly from [-1, 1] when unset
};

struct TerrainSummary {
  bool path_exists = false;
  double min_path_width = 0.0;
};

// Classic 2D gradient-lattice noise with a quintic fade, lattice spacing
// cfg.lattice_cell_size, rescaled so the theoretical range spans [-1, 1].
// Identically zero on lattice corners; deterministic in (x, y, seed).
double perlin_value(double x, double y, const PerlinConfig& cfg);

// Builds a terrain by thresholding perlin_value at each cell center: cells
// with noise above the threshold become impassable. The 10x10 cell blocks
// around start and goal are forced passable. `rng` is consumed only when
// cfg.threshold_a is unset. Throws std::invalid_argument when the safe zones
// do not fit or start/goal are invalid.
GridTerrain generate_terrain(const PerlinConfig& cfg, int width_cells, int height_cells,
                             Vec2 start, Vec2 goal, Rng& rng);

// Throws std::invalid_argument when GridTerrain invariants are violated.
void validate(const GridTerrain& t);

// A* over 4-connected passable cells, from the cell containing start to the
// cell containing goal.
bool path_exists(const GridTerrain& t);

// Bottleneck ("widest path") start-goal corridor width. Clearance is the
// Euclidean distance from a node of the 2x-supersampled grid (all multiples
// of 0.5) to the impassable region, squares treated as closed and the grid
// exterior as impassable. The returned width is twice the maximin clearance,
// rounded up to the 0.5 grid-unit measurement resolution. 0 when no path.
double min_path_width(const GridTerrain& t);

TerrainSummary summarize(const GridTerrain& t);

// Text terrain file, round-trips bit-exactly.
std::string save_terrain(const GridTerrain& t);
GridTerrain load_terrain(const std::string& text);
void save_terrain_file(const GridTerrain& t, const std::string& path);
GridTerrain load_terrain_file(const std::string& path);

// Compact hex packing of the cell array (4 cells per character, row-major).
// Used to embed terrains in trace headers.
std::string cells_to_hex(const GridTerrain& t);
void cells_from_hex(GridTerrain& t, const std::string& hex);

}  // namespace swarmnav::terrain
