#include "swarmnav/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmnav::agent {

SenseSample sense(Vec2 pos, double heading, const field::FieldSet& fs, Vec2 goal,
                  const NoiseConfig& noise, Rng& rng) {
  SenseSample s;
  s.g = strength_at(fs, pos);
  if (noise.enabled) s.g *= uniform(rng, noise.strength_factor_lo, noise.strength_factor_hi);

  if (!fs.empty() && !degenerate_at(fs, pos)) {
    Vec2 grad = gradient_at(fs, pos);
    if (grad.norm() >= kGradientFloor) {
      double dir = std::atan2(grad.y, grad.x);
      if (noise.enabled) dir += uniform(rng, noise.grad_angle_lo, noise.grad_angle_hi);
      s.grad_dir = wrap_angle(dir);
    }
  }

  s.goal_bearing = bearing(pos, goal);
  if (s.grad_dir) s.theta_fg = angle_between(s.goal_bearing, *s.grad_dir);
  s.theta_rg = angle_between(heading, s.goal_bearing);
  return s;
}

Mode update_mode(Mode mode, const SenseSample& s, double g_th) {
  if (!s.theta_fg) return mode;
  if (mode == Mode::GoalSeek) {
    if (s.g >= g_th && *s.theta_fg <= M_PI / 2.0) return Mode::Circumnavigate;
  } else {
    if (s.theta_rg < M_PI / 2.0 && *s.theta_fg > M_PI / 2.0) return Mode::GoalSeek;
  }
  return mode;
}

double circumnavigate_heading(double grad_dir, double goal_bearing) {
  double ccw = wrap_angle(grad_dir + M_PI / 2.0);
  double cw = wrap_angle(grad_dir - M_PI / 2.0);
  double d_ccw = angle_between(ccw, goal_bearing);
  double d_cw = angle_between(cw, goal_bearing);
  return d_ccw <= d_cw ? ccw : cw;
}

double target_heading(Mode mode, const SenseSample& s) {
  if (mode == Mode::GoalSeek) return s.goal_bearing;
  if (!s.grad_dir) throw std::logic_error("circumnavigation requires a sensed gradient");
  return circumnavigate_heading(*s.grad_dir, s.goal_bearing);
}

AgentState step(const AgentState& st, double target, const AgentParams& params, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  AgentState next = st;
  double diff = wrap_angle(target - st.heading);
  if (std::fabs(diff) <= params.heading_deadband) {
    next.position.x += params.speed * dt * std::cos(st.heading);
    next.position.y += params.speed * dt * std::sin(st.heading);
  } else {
    double turn = std::min(params.turn_rate * dt, std::fabs(diff));
    next.heading = wrap_angle(st.heading + std::copysign(turn, diff));
  }
  return next;
}

}  // namespace swarmnav::agent
