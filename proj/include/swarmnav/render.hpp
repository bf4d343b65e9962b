#pragma once

#include <optional>
#include <string>

#include "swarmnav/trace.hpp"

namespace swarmnav::render {

// Draws a trace as a standalone SVG: terrain occupancy, start/goal marks,
// one polyline per robot, stuck positions, and the g = g_th circle around
// every source. `up_to_time` truncates the drawing to records at or before
// that simulated time (for frame sequences).
std::string trace_svg(const sim::SimTrace& trace, std::optional<double> up_to_time = {});

}  // namespace swarmnav::render
