#include "swarmnav/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace swarmnav::terrain {

namespace {

// Unit gradient at a lattice corner, hashed from (seed, ix, iy).
Vec2 lattice_gradient(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
  std::uint64_t h = mix64({seed, static_cast<std::uint64_t>(ix), static_cast<std::uint64_t>(iy)});
  double angle = static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 * M_PI;
  return unit_from_angle(angle);
}

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double lerp(double a, double b, double w) { return a + (b - a) * w; }

}  // namespace

double perlin_value(double x, double y, const PerlinConfig& cfg) {
  if (cfg.lattice_cell_size <= 0.0) throw std::invalid_argument("lattice_cell_size must be > 0");
  double sx = x / cfg.lattice_cell_size;
  double sy = y / cfg.lattice_cell_size;
  double fx0 = std::floor(sx);
  double fy0 = std::floor(sy);
  auto ix = static_cast<std::int64_t>(fx0);
  auto iy = static_cast<std::int64_t>(fy0);
  double dx = sx - fx0;
  double dy = sy - fy0;

  Vec2 g00 = lattice_gradient(cfg.seed, ix, iy);
  Vec2 g10 = lattice_gradient(cfg.seed, ix + 1, iy);
  Vec2 g01 = lattice_gradient(cfg.seed, ix, iy + 1);
  Vec2 g11 = lattice_gradient(cfg.seed, ix + 1, iy + 1);

  double n00 = dot(g00, {dx, dy});
  double n10 = dot(g10, {dx - 1.0, dy});
  double n01 = dot(g01, {dx, dy - 1.0});
  double n11 = dot(g11, {dx - 1.0, dy - 1.0});

  double u = fade(dx);
  double v = fade(dy);
  double value = lerp(lerp(n00, n10, u), lerp(n01, n11, u), v);

  // Unit-gradient 2D noise spans +-sqrt(2)/2.
  value *= M_SQRT2;
  return std::clamp(value, -1.0, 1.0);
}

namespace {

// 10x10 safe block: cells whose centers fall in the half-open square
// [p - 5, p + 5). Exactly 10x10 cells for half-integer and integer centers.
struct CellBlock {
  int col0, row0, col1, row1;  // inclusive
};

CellBlock safe_block(Vec2 p) {
  int col0 = static_cast<int>(std::ceil(p.x - 5.0 - 0.5));
  int row0 = static_cast<int>(std::ceil(p.y - 5.0 - 0.5));
  return {col0, row0, col0 + 9, row0 + 9};
}

}  // namespace

GridTerrain generate_terrain(const PerlinConfig& cfg, int width_cells, int height_cells,
                             Vec2 start, Vec2 goal, Rng& rng) {
  if (width_cells < 20 || height_cells < 20)
    throw std::invalid_argument("terrain dims must be at least 20x20");

  double a = cfg.threshold_a ? *cfg.threshold_a : uniform(rng, -1.0, 1.0);
  if (a < -1.0 || a > 1.0) throw std::invalid_argument("threshold_a must lie in [-1, 1]");

  GridTerrain t;
  t.width_cells = width_cells;
  t.height_cells = height_cells;
  t.start = start;
  t.goal = goal;
  t.cells.assign(static_cast<std::size_t>(width_cells) * height_cells, 0);

  for (int row = 0; row < height_cells; ++row) {
    for (int col = 0; col < width_cells; ++col) {
      double f = perlin_value(col + 0.5, row + 0.5, cfg);
      t.set_cell(col, row, f > a);
    }
  }

  for (Vec2 p : {start, goal}) {
    CellBlock b = safe_block(p);
    if (b.col0 < 0 || b.row0 < 0 || b.col1 >= width_cells || b.row1 >= height_cells)
      throw std::invalid_argument("safe zone does not fit inside the grid");
    for (int row = b.row0; row <= b.row1; ++row)
      for (int col = b.col0; col <= b.col1; ++col) t.set_cell(col, row, false);
  }

  validate(t);
  return t;
}

void validate(const GridTerrain& t) {
  if (t.width_cells <= 0 || t.height_cells <= 0)
    throw std::invalid_argument("terrain dims must be positive");
  if (t.cells.size() != static_cast<std::size_t>(t.width_cells) * t.height_cells)
    throw std::invalid_argument("cell array size mismatch");
  if (t.start == t.goal) throw std::invalid_argument("start and goal must differ");
  for (Vec2 p : {t.start, t.goal}) {
    if (!(p.x > 0.0 && p.x < t.width_cells && p.y > 0.0 && p.y < t.height_cells))
      throw std::invalid_argument("start/goal must lie strictly inside the grid");
    if (t.impassable(static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))))
      throw std::invalid_argument("start/goal cell must be passable");
  }
}

namespace {

struct CellIndex {
  int col, row;
};

CellIndex cell_of(const GridTerrain& t, Vec2 p) {
  (void)t;
  return {static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))};
}

}  // namespace

bool path_exists(const GridTerrain& t) {
  CellIndex s = cell_of(t, t.start);
  CellIndex g = cell_of(t, t.goal);
  if (t.impassable(s.col, s.row) || t.impassable(g.col, g.row)) return false;

  const int w = t.width_cells, h = t.height_cells;
  auto idx = [w](int col, int row) { return static_cast<std::size_t>(row) * w + col; };
  auto heuristic = [&](int col, int row) { return std::abs(col - g.col) + std::abs(row - g.row); };

  std::vector<int> cost(static_cast<std::size_t>(w) * h, -1);
  using Item = std::pair<int, std::pair<int, int>>;  // (f, (col,row))
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  cost[idx(s.col, s.row)] = 0;
  open.push({heuristic(s.col, s.row), {s.col, s.row}});

  static constexpr int kd[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!open.empty()) {
    auto [f, cr] = open.top();
    open.pop();
    auto [col, row] = cr;
    int c = cost[idx(col, row)];
    if (f > c + heuristic(col, row)) continue;  // stale entry
    if (col == g.col && row == g.row) return true;
    for (auto& d : kd) {
      int nc = col + d[0], nr = row + d[1];
      if (!t.in_bounds(nc, nr) || t.impassable(nc, nr)) continue;
      int ncost = c + 1;
      if (cost[idx(nc, nr)] < 0 || ncost < cost[idx(nc, nr)]) {
        cost[idx(nc, nr)] = ncost;
        open.push({ncost + heuristic(nc, nr), {nc, nr}});
      }
    }
  }
  return false;
}

namespace {

// Exact 1D squared-distance transform (Felzenszwalb & Huttenlocher).
void edt_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& out,
            std::vector<int>& v, std::vector<double>& z) {
  int n = static_cast<int>(f.size());
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  int k = 0;
  v[0] = 0;
  z[0] = -1e18;
  z[1] = 1e18;
  auto sq = [](std::int64_t q) { return q * q; };
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      int p = v[k];
      s = (static_cast<double>(f[q] + sq(q)) - static_cast<double>(f[p] + sq(p))) / (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = 1e18;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    std::int64_t d = q - v[k];
    out[q] = d * d + f[v[k]];
  }
}

constexpr std::int64_t kFarAway = std::int64_t{1} << 40;

// Squared distance (in half-cell node units) from every supersampled node to
// the nearest obstacle node. Obstacle nodes are exactly the nodes lying in
// the closed impassable region, so this equals the true squared distance to
// the region itself.
std::vector<std::int64_t> node_clearance_sq(const GridTerrain& t) {
  const int nw = 2 * t.width_cells + 1;
  const int nh = 2 * t.height_cells + 1;
  std::vector<std::int64_t> d2(static_cast<std::size_t>(nw) * nh, kFarAway);

  auto node_obstructed = [&](int i, int j) {
    if (i == 0 || j == 0 || i == nw - 1 || j == nh - 1) return true;  // world boundary
    int c_lo = (i % 2 == 0) ? i / 2 - 1 : i / 2;
    int c_hi = i / 2;
    int r_lo = (j % 2 == 0) ? j / 2 - 1 : j / 2;
    int r_hi = j / 2;
    for (int r = r_lo; r <= r_hi; ++r)
      for (int c = c_lo; c <= c_hi; ++c)
        if (t.impassable(c, r)) return true;
    return false;
  };

  for (int j = 0; j < nh; ++j)
    for (int i = 0; i < nw; ++i)
      if (node_obstructed(i, j)) d2[static_cast<std::size_t>(j) * nw + i] = 0;

  // Column pass then row pass.
  std::vector<std::int64_t> f(std::max(nw, nh)), out(std::max(nw, nh));
  std::vector<int> v;
  std::vector<double> z;
  for (int i = 0; i < nw; ++i) {
    f.resize(nh);
    out.resize(nh);
    for (int j = 0; j < nh; ++j) f[j] = d2[static_cast<std::size_t>(j) * nw + i];
    edt_1d(f, out, v, z);
    for (int j = 0; j < nh; ++j) d2[static_cast<std::size_t>(j) * nw + i] = out[j];
  }
  for (int j = 0; j < nh; ++j) {
    f.resize(nw);
    out.resize(nw);
    for (int i = 0; i < nw; ++i) f[i] = d2[static_cast<std::size_t>(j) * nw + i];
    edt_1d(f, out, v, z);
    for (int i = 0; i < nw; ++i) d2[static_cast<std::size_t>(j) * nw + i] = out[i];
  }
  return d2;
}

int nearest_node(double coord, int max_index) {
  int i = static_cast<int>(std::lround(coord * 2.0));
  return std::clamp(i, 0, max_index);
}

// Smallest multiple of 0.5 that is >= sqrt(d2)/... : the maximin squared
// clearance d2 is in node units, so the raw width is sqrt(d2) grid units.
double width_from_d2(std::int64_t d2) {
  if (d2 <= 0) return 0.0;
  auto k = static_cast<std::int64_t>(std::sqrt(static_cast<double>(4 * d2)));
  while (k * k < 4 * d2) ++k;
  while ((k - 1) * (k - 1) >= 4 * d2) --k;
  return static_cast<double>(k) / 2.0;
}

}  // namespace

double min_path_width(const GridTerrain& t) {
  const int nw = 2 * t.width_cells + 1;
  const int nh = 2 * t.height_cells + 1;
  std::vector<std::int64_t> clear2 = node_clearance_sq(t);
  auto at = [&](int i, int j) { return clear2[static_cast<std::size_t>(j) * nw + i]; };

  int si = nearest_node(t.start.x, nw - 1), sj = nearest_node(t.start.y, nh - 1);
  int gi = nearest_node(t.goal.x, nw - 1), gj = nearest_node(t.goal.y, nh - 1);
  if (at(si, sj) == 0 || at(gi, gj) == 0) return 0.0;

  // Maximin Dijkstra on integer squared clearances.
  std::vector<std::int64_t> best(clear2.size(), -1);
  using Item = std::pair<std::int64_t, std::pair<int, int>>;
  std::priority_queue<Item> open;
  best[static_cast<std::size_t>(sj) * nw + si] = at(si, sj);
  open.push({at(si, sj), {si, sj}});
  static constexpr int kd[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!open.empty()) {
    auto [b, ij] = open.top();
    open.pop();
    auto [i, j] = ij;
    if (b < best[static_cast<std::size_t>(j) * nw + i]) continue;
    if (i == gi && j == gj) return width_from_d2(b);
    for (auto& d : kd) {
      int ni = i + d[0], nj = j + d[1];
      if (ni < 0 || nj < 0 || ni >= nw || nj >= nh) continue;
      std::int64_t cand = std::min(b, at(ni, nj));
      if (cand > 0 && cand > best[static_cast<std::size_t>(nj) * nw + ni]) {
        best[static_cast<std::size_t>(nj) * nw + ni] = cand;
        open.push({cand, {ni, nj}});
      }
    }
  }
  return 0.0;
}

TerrainSummary summarize(const GridTerrain& t) {
  TerrainSummary s;
  s.min_path_width = min_path_width(t);
  s.path_exists = s.min_path_width > 0.0;
  return s;
}

namespace {

std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string save_terrain(const GridTerrain& t) {
  std::ostringstream os;
  os << "swarmnav-terrain v1\n";
  os << "width " << t.width_cells << "\n";
  os << "height " << t.height_cells << "\n";
  os << "start " << fmt_coord(t.start.x) << " " << fmt_coord(t.start.y) << "\n";
  os << "goal " << fmt_coord(t.goal.x) << " " << fmt_coord(t.goal.y) << "\n";
  os << "cells\n";
  for (int row = 0; row < t.height_cells; ++row) {
    for (int col = 0; col < t.width_cells; ++col) os << (t.impassable(col, row) ? '1' : '0');
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

GridTerrain load_terrain(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  auto fail = [](const std::string& why) -> GridTerrain {
    throw std::runtime_error("terrain parse error: " + why);
  };

  if (!std::getline(is, line) || line != "swarmnav-terrain v1") return fail("bad magic line");
  GridTerrain t;
  t.width_cells = t.height_cells = 0;
  std::string key;
  while (std::getline(is, line)) {
    if (line == "cells") break;
    std::istringstream ls(line);
    ls >> key;
    if (key == "width")
      ls >> t.width_cells;
    else if (key == "height")
      ls >> t.height_cells;
    else if (key == "start")
      ls >> t.start.x >> t.start.y;
    else if (key == "goal")
      ls >> t.goal.x >> t.goal.y;
    else
      return fail("unknown field '" + key + "'");
    if (!ls) return fail("malformed field '" + key + "'");
  }
  if (t.width_cells <= 0 || t.height_cells <= 0) return fail("missing or invalid dims");
  t.cells.assign(static_cast<std::size_t>(t.width_cells) * t.height_cells, 0);
  for (int row = 0; row < t.height_cells; ++row) {
    if (!std::getline(is, line) || static_cast<int>(line.size()) != t.width_cells)
      return fail("cell row " + std::to_string(row) + " has wrong length");
    for (int col = 0; col < t.width_cells; ++col) {
      if (line[col] != '0' && line[col] != '1') return fail("cell row has non-binary character");
      t.set_cell(col, row, line[col] == '1');
    }
  }
  if (!std::getline(is, line) || line != "end") return fail("missing end marker");
  validate(t);
  return t;
}

void save_terrain_file(const GridTerrain& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << save_terrain(t);
  if (!os) throw std::runtime_error("write failed: " + path);
}

GridTerrain load_terrain_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return load_terrain(buf.str());
}

std::string cells_to_hex(const GridTerrain& t) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  std::size_t n = t.cells.size();
  out.reserve((n + 3) / 4);
  for (std::size_t i = 0; i < n; i += 4) {
    int nibble = 0;
    for (std::size_t b = 0; b < 4 && i + b < n; ++b)
      if (t.cells[i + b]) nibble |= 1 << b;
    out.push_back(digits[nibble]);
  }
  return out;
}

void cells_from_hex(GridTerrain& t, const std::string& hex) {
  std::size_t n = static_cast<std::size_t>(t.width_cells) * t.height_cells;
  if (hex.size() != (n + 3) / 4) throw std::runtime_error("cell hex string has wrong length");
  t.cells.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    char c = hex[i / 4];
    int nibble = (c >= '0' && c <= '9') ? c - '0'
               : (c >= 'a' && c <= 'f') ? c - 'a' + 10
                                        : throw std::runtime_error("bad hex digit in cell data");
    t.cells[i] = (nibble >> (i % 4)) & 1;
  }
}

}  // namespace swarmnav::terrain
