#include "swarmnav/render.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "swarmnav/format.hpp"

namespace swarmnav::render {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

struct Mapper {
  double min_x, min_y, max_y, scale;
  double px(double x) const { return (x - min_x) * scale; }
  double py(double y) const { return (max_y - y) * scale; }  // world y up, SVG y down
};

void draw_cross(std::ostringstream& os, const Mapper& m, Vec2 p, double r) {
  os << "<path d=\"M" << g9(m.px(p.x) - r) << " " << g9(m.py(p.y) - r) << " L"
     << g9(m.px(p.x) + r) << " " << g9(m.py(p.y) + r) << " M" << g9(m.px(p.x) - r) << " "
     << g9(m.py(p.y) + r) << " L" << g9(m.px(p.x) + r) << " " << g9(m.py(p.y) - r)
     << "\" stroke=\"black\" stroke-width=\"2\" fill=\"none\"/>\n";
}

void draw_star(std::ostringstream& os, const Mapper& m, Vec2 p, double r) {
  os << "<polygon points=\"";
  for (int k = 0; k < 10; ++k) {
    double angle = M_PI / 2.0 + k * M_PI / 5.0;
    double rad = (k % 2 == 0) ? r : 0.4 * r;
    if (k) os << " ";
    os << g9(m.px(p.x) + rad * std::cos(angle)) << "," << g9(m.py(p.y) - rad * std::sin(angle));
  }
  os << "\" fill=\"gold\" stroke=\"black\" stroke-width=\"1\"/>\n";
}

}  // namespace

std::string trace_svg(const sim::SimTrace& trace, std::optional<double> up_to_time) {
  const bool is_sim = trace.header.kind == "sim";
  double cutoff = up_to_time.value_or(std::numeric_limits<double>::infinity());

  double min_x = 0.0, min_y = 0.0, max_x = 1.0, max_y = 1.0;
  if (is_sim && trace.header.terrain) {
    max_x = trace.header.terrain->width_cells;
    max_y = trace.header.terrain->height_cells;
  } else if (trace.header.acoustic) {
    const sim::AcousticEcho& a = *trace.header.acoustic;
    min_x = std::min(a.start.x, a.goal.x);
    max_x = std::max(a.start.x, a.goal.x);
    min_y = std::min(a.start.y, a.goal.y);
    max_y = std::max(a.start.y, a.goal.y);
    for (const auto& e : a.emitters) {
      min_x = std::min(min_x, e[0]);
      max_x = std::max(max_x, e[0]);
      min_y = std::min(min_y, e[1]);
      max_y = std::max(max_y, e[1]);
    }
    double pad = 0.15 * std::max(max_x - min_x, max_y - min_y) + 0.5;
    min_x -= pad;
    min_y -= pad;
    max_x += pad;
    max_y += pad;
  }
  double span = std::max(max_x - min_x, max_y - min_y);
  Mapper m{min_x, min_y, max_y, 720.0 / span};
  int width = static_cast<int>(std::lround((max_x - min_x) * m.scale));
  int height = static_cast<int>(std::lround((max_y - min_y) * m.scale));

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  Vec2 start, goal;
  double epsilon = 0.0;
  if (is_sim && trace.header.terrain) {
    const terrain::GridTerrain& t = *trace.header.terrain;
    start = t.start;
    goal = t.goal;
    epsilon = trace.header.config.epsilon;
    double cell = m.scale;
    os << "<g fill=\"#aadcf0\">\n";  // impassable cells
    for (int row = 0; row < t.height_cells; ++row)
      for (int col = 0; col < t.width_cells; ++col)
        if (t.impassable(col, row))
          os << "<rect x=\"" << g9(m.px(col)) << "\" y=\"" << g9(m.py(row + 1)) << "\" width=\""
             << g9(cell) << "\" height=\"" << g9(cell) << "\"/>\n";
    os << "</g>\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
       << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  } else if (trace.header.acoustic) {
    const sim::AcousticEcho& a = *trace.header.acoustic;
    start = a.start;
    goal = a.goal;
    for (const auto& e : a.emitters) {
      double radius = a.v_target > 0.0 ? std::sqrt(e[2] / a.v_target) : 0.0;
      os << "<circle cx=\"" << g9(m.px(e[0])) << "\" cy=\"" << g9(m.py(e[1])) << "\" r=\"4\""
         << " fill=\"#333333\"/>\n";
      if (radius > 0.0)
        os << "<circle cx=\"" << g9(m.px(e[0])) << "\" cy=\"" << g9(m.py(e[1])) << "\" r=\""
           << g9(radius * m.scale) << "\" fill=\"none\" stroke=\"#9b59b6\""
           << " stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    }
  }

  // Robot paths: tick positions, closed off by the robot's stuck/reached
  // event position when inside the cutoff.
  std::map<int, std::vector<Vec2>> paths;
  for (const sim::TickRecord& r : trace.ticks)
    if (r.t <= cutoff) paths[r.robot].push_back(r.position);
  for (const sim::EventRecord& e : trace.events)
    if (e.t <= cutoff &&
        (e.kind == sim::EventKind::Stuck || e.kind == sim::EventKind::Reached))
      paths[e.robot].push_back(e.position);

  for (const auto& [robot, pts] : paths) {
    if (pts.size() < 2) continue;
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[robot % 10]
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) os << " ";
      os << g9(m.px(pts[i].x)) << "," << g9(m.py(pts[i].y));
    }
    os << "\"/>\n";
  }

  for (const sim::EventRecord& e : trace.events) {
    if (e.t > cutoff || e.kind != sim::EventKind::Stuck) continue;
    os << "<circle cx=\"" << g9(m.px(e.position.x)) << "\" cy=\"" << g9(m.py(e.position.y))
       << "\" r=\"4\" fill=\"" << kPalette[e.robot % 10] << "\" stroke=\"black\""
       << " stroke-width=\"1\"/>\n";
    if (is_sim && epsilon > 0.0)
      os << "<circle cx=\"" << g9(m.px(e.position.x)) << "\" cy=\"" << g9(m.py(e.position.y))
         << "\" r=\"" << g9(epsilon * m.scale) << "\" fill=\"none\" stroke=\"#9b59b6\""
         << " stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
  }

  draw_cross(os, m, start, 7.0);
  draw_star(os, m, goal, 10.0);
  os << "</svg>\n";
  return os.str();
}

}  // namespace swarmnav::render
