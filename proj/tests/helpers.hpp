#pragma once

// Shared test fixtures: crafted terrains, independent oracles, and small
// file utilities. Oracles here stay deliberately brute-force so they do not
// share code paths with the implementation they check.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmnav/geometry.hpp"
#include "swarmnav/terrain.hpp"

namespace testutil {

using swarmnav::Vec2;
using swarmnav::terrain::GridTerrain;

inline GridTerrain solid_terrain(int w, int h, Vec2 start, Vec2 goal) {
  GridTerrain t;
  t.width_cells = w;
  t.height_cells = h;
  t.start = start;
  t.goal = goal;
  t.cells.assign(static_cast<std::size_t>(w) * h, 1);
  return t;
}

inline GridTerrain open_terrain(int w, int h, Vec2 start, Vec2 goal) {
  GridTerrain t = solid_terrain(w, h, start, goal);
  std::fill(t.cells.begin(), t.cells.end(), 0);
  return t;
}

// Carves [c0, c1] x [r0, r1] (inclusive cell ranges) passable.
inline void carve_rect(GridTerrain& t, int c0, int r0, int c1, int r1) {
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) t.set_cell(c, r, false);
}

inline void fill_rect(GridTerrain& t, int c0, int r0, int c1, int r1) {
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) t.set_cell(c, r, true);
}

// Straight horizontal corridor of `w` cells between solid walls, start and
// goal at the ends, measured width exactly w.
inline GridTerrain corridor_h(int w) {
  int h = w + 8;
  GridTerrain t = solid_terrain(40, h, {4.5, 4.0 + w / 2.0}, {35.5, 4.0 + w / 2.0});
  carve_rect(t, 1, 4, 38, 4 + w - 1);
  return t;
}

inline GridTerrain corridor_v(int w) {
  int width = w + 8;
  GridTerrain t = solid_terrain(width, 40, {4.0 + w / 2.0, 4.5}, {4.0 + w / 2.0, 35.5});
  carve_rect(t, 4, 1, 4 + w - 1, 38);
  return t;
}

// L-shaped corridor: right along the bottom, then up to the goal.
inline GridTerrain corridor_l(int w) {
  GridTerrain t = solid_terrain(40, 40, {4.5, 4.0 + w / 2.0}, {30.0 + w / 2.0, 35.5});
  carve_rect(t, 1, 4, 30 + w - 1, 4 + w - 1);          // horizontal leg
  carve_rect(t, 30, 4, 30 + w - 1, 38);                // vertical leg
  return t;
}

// Wide corridor pinched by two wall fingers whose corner gap vector is
// (1, k): the bottleneck clearance is sqrt(1 + k^2) / 2, so the measured
// width (rounded up to the half-unit grid) is e.g. 1.5 for k=1, 2.5 for k=2,
// 3.5 for k=3, 4.5 for k=4.
inline GridTerrain corridor_pinch(int k) {
  int h = 16;
  GridTerrain t = solid_terrain(40, h, {3.5, 8.0}, {36.5, 8.0});
  carve_rect(t, 1, 2, 38, 13);  // corridor rows 2..13 (width 12)
  int y1 = 8 - (k + 1) / 2;     // bottom finger reaches up to y = y1
  fill_rect(t, 18, 2, 18, y1 - 1);        // bottom finger, column 18
  fill_rect(t, 20, y1 + k, 20, 13);       // top finger, column 20
  return t;
}

// --- oracles ------------------------------------------------------------

// Flood-fill connectivity between the start and goal cells (4-connected).
inline bool flood_fill_path_exists(const GridTerrain& t) {
  int sc = static_cast<int>(std::floor(t.start.x)), sr = static_cast<int>(std::floor(t.start.y));
  int gc = static_cast<int>(std::floor(t.goal.x)), gr = static_cast<int>(std::floor(t.goal.y));
  if (t.impassable(sc, sr) || t.impassable(gc, gr)) return false;
  std::vector<char> seen(static_cast<std::size_t>(t.width_cells) * t.height_cells, 0);
  std::queue<std::pair<int, int>> q;
  q.push({sc, sr});
  seen[static_cast<std::size_t>(sr) * t.width_cells + sc] = 1;
  while (!q.empty()) {
    auto [c, r] = q.front();
    q.pop();
    if (c == gc && r == gr) return true;
    static constexpr int kd[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (auto& d : kd) {
      int nc = c + d[0], nr = r + d[1];
      if (!t.in_bounds(nc, nr) || t.impassable(nc, nr)) continue;
      char& s = seen[static_cast<std::size_t>(nr) * t.width_cells + nc];
      if (!s) {
        s = 1;
        q.push({nc, nr});
      }
    }
  }
  return false;
}

// Clearance of one supersampled node (coordinates i/2, j/2), computed the
// slow way: minimum distance to every impassable cell square plus the grid
// exterior.
inline double node_clearance_direct(const GridTerrain& t, int i, int j) {
  double px = i / 2.0, py = j / 2.0;
  double best = std::min(std::min(px, t.width_cells - px), std::min(py, t.height_cells - py));
  if (best < 0.0) return 0.0;
  for (int r = 0; r < t.height_cells; ++r) {
    for (int c = 0; c < t.width_cells; ++c) {
      if (!t.impassable(c, r)) continue;
      double dx = std::max({0.0, c - px, px - (c + 1.0)});
      double dy = std::max({0.0, r - py, py - (r + 1.0)});
      best = std::min(best, std::hypot(dx, dy));
    }
  }
  return best;
}

// Brute-force bottleneck width: enumerate every distinct node clearance as a
// threshold, flood-fill the nodes at or above it, and keep the largest
// threshold that still connects start to goal. Width is twice that
// clearance, rounded up to the half-unit measurement grid.
inline double min_path_width_oracle(const GridTerrain& t) {
  const int nw = 2 * t.width_cells + 1, nh = 2 * t.height_cells + 1;
  std::vector<double> clearance(static_cast<std::size_t>(nw) * nh);
  std::set<double> levels;
  for (int j = 0; j < nh; ++j)
    for (int i = 0; i < nw; ++i) {
      double c = node_clearance_direct(t, i, j);
      clearance[static_cast<std::size_t>(j) * nw + i] = c;
      if (c > 0.0) levels.insert(c);
    }

  auto node_index = [&](double coord, int max_i) {
    return std::clamp(static_cast<int>(std::lround(coord * 2.0)), 0, max_i);
  };
  int si = node_index(t.start.x, nw - 1), sj = node_index(t.start.y, nh - 1);
  int gi = node_index(t.goal.x, nw - 1), gj = node_index(t.goal.y, nh - 1);

  auto connected_at = [&](double threshold) {
    auto ok = [&](int i, int j) {
      return clearance[static_cast<std::size_t>(j) * nw + i] >= threshold;
    };
    if (!ok(si, sj) || !ok(gi, gj)) return false;
    std::vector<char> seen(clearance.size(), 0);
    std::queue<std::pair<int, int>> q;
    q.push({si, sj});
    seen[static_cast<std::size_t>(sj) * nw + si] = 1;
    while (!q.empty()) {
      auto [i, j] = q.front();
      q.pop();
      if (i == gi && j == gj) return true;
      static constexpr int kd[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (auto& d : kd) {
        int ni = i + d[0], nj = j + d[1];
        if (ni < 0 || nj < 0 || ni >= nw || nj >= nh) continue;
        char& s = seen[static_cast<std::size_t>(nj) * nw + ni];
        if (!s && ok(ni, nj)) {
          s = 1;
          q.push({ni, nj});
        }
      }
    }
    return false;
  };

  double best = 0.0;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    if (connected_at(*it)) {
      best = *it;
      break;
    }
  }
  if (best <= 0.0) return 0.0;
  return std::ceil(2.0 * best / 0.5 - 1e-9) * 0.5;
}

// --- misc ---------------------------------------------------------------

// Largest distance from any point of `probe` to the polyline `reference`.
inline double max_cross_track(const std::vector<Vec2>& probe,
                              const std::vector<Vec2>& reference) {
  auto seg_dist = [](Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 == 0.0) return distance(p, a);
    double u = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, {a.x + u * ab.x, a.y + u * ab.y});
  };
  double worst = 0.0;
  for (const Vec2& p : probe) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < reference.size(); ++i)
      best = std::min(best, seg_dist(p, reference[i], reference[i + 1]));
    if (reference.size() == 1) best = distance(p, reference[0]);
    worst = std::max(worst, best);
  }
  return worst;
}

inline std::string data_path(const std::string& name) {
  const char* dir = std::getenv("SWARMNAV_DATA");
  if (!dir) throw std::runtime_error("SWARMNAV_DATA not set");
  return std::string(dir) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

}  // namespace testutil
