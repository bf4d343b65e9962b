#pragma once

#include <vector>

#include "swarmnav/geometry.hpp"

namespace swarmnav::field {

// Distances below this are clamped when evaluating 1/r^2, keeping the
// arithmetic finite at the source singularity.
inline constexpr double kMinDistance = 1e-6;

// One inverse-square potential source, emitted by a stuck robot.
struct FieldSource {
  Vec2 position;
  double strength_c = 1.0;
};

// Sources in deployment order; append-only during a trial.
struct FieldSet {
  std::vector<FieldSource> sources;

  bool empty() const { return sources.empty(); }
  std::size_t size() const { return sources.size(); }
  void add(Vec2 position, double strength_c) { sources.push_back({position, strength_c}); }
};

// Superposed field strength g = sum c / max(r^2, kMinDistance^2).
double strength_at(const FieldSet& fs, Vec2 p);

// Analytic gradient of strength_at. For a single source it points from p
// toward the source. Throws std::domain_error when p lies within
// kMinDistance of a source.
Vec2 gradient_at(const FieldSet& fs, Vec2 p);

// True when p lies within kMinDistance of some source (gradient undefined).
bool degenerate_at(const FieldSet& fs, Vec2 p);

// g_th = c / epsilon^2: the single-source level set g = g_th is the circle
// of radius epsilon. Throws std::invalid_argument for nonpositive epsilon.
double epsilon_to_threshold(double epsilon, double c = 1.0);
double threshold_to_epsilon(double g_th, double c = 1.0);

}  // namespace swarmnav::field
