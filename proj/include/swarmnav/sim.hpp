#pragma once

#include <utility>

#include "swarmnav/trace.hpp"

namespace swarmnav::sim {

// True when p falls in an impassable cell or outside the grid. The cell
// containing p is found by flooring both coordinates.
bool is_stuck(const terrain::GridTerrain& t, Vec2 p);

// Closed ball: distance exactly `tol` counts as reached.
bool is_goal_reached(Vec2 p, Vec2 goal, double tol);

// Runs one sequential-deployment trial: robots launch from the start one at
// a time, each stuck robot freezes into a field source, and the trial ends
// when a robot reaches the goal, the time budget runs out, or the last
// allowed robot gets stuck. Fully deterministic in (terrain, cfg).
std::pair<SimResult, SimTrace> run_trial(const terrain::GridTerrain& t, const SimConfig& cfg);

}  // namespace swarmnav::sim
