#include "swarmnav/field.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmnav::field {

double strength_at(const FieldSet& fs, Vec2 p) {
  double g = 0.0;
  for (const FieldSource& s : fs.sources) {
    double r2 = (p - s.position).norm2();
    g += s.strength_c / std::max(r2, kMinDistance * kMinDistance);
  }
  return g;
}

Vec2 gradient_at(const FieldSet& fs, Vec2 p) {
  if (degenerate_at(fs, p)) throw std::domain_error("gradient undefined at a field source");
  Vec2 grad;
  for (const FieldSource& s : fs.sources) {
    Vec2 d = p - s.position;
    double r2 = d.norm2();
    double k = -2.0 * s.strength_c / (r2 * r2);
    grad.x += k * d.x;
    grad.y += k * d.y;
  }
  return grad;
}

bool degenerate_at(const FieldSet& fs, Vec2 p) {
  for (const FieldSource& s : fs.sources)
    if ((p - s.position).norm2() < kMinDistance * kMinDistance) return true;
  return false;
}

double epsilon_to_threshold(double epsilon, double c) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  return c / (epsilon * epsilon);
}

double threshold_to_epsilon(double g_th, double c) {
  if (g_th <= 0.0) throw std::invalid_argument("g_th must be positive");
  return std::sqrt(c / g_th);
}

}  // namespace swarmnav::field
