#pragma once

#include <optional>

#include "swarmnav/field.hpp"
#include "swarmnav/geometry.hpp"
#include "swarmnav/rng.hpp"

namespace swarmnav::agent {

// A sensed gradient below this magnitude is treated as absent.
inline constexpr double kGradientFloor = 1e-12;

enum class Mode { GoalSeek, Circumnavigate };
enum class Status { Active, Stuck, Reached };

struct AgentState {
  Vec2 position;
  double heading = 0.0;  // radians in (-pi, pi]
  Mode mode = Mode::GoalSeek;
  Status status = Status::Active;
};

struct AgentParams {
  double speed = 1.0;                  // grid units / s
  double turn_rate = M_PI / 6.0;       // rad / s
  double heading_deadband = M_PI / 36.0;
  double g_th = 1.0;
  double epsilon = 1.0;
};

struct NoiseConfig {
  bool enabled = false;
  double strength_factor_lo = 0.8;
  double strength_factor_hi = 1.2;
  double grad_angle_lo = -M_PI / 6.0;
  double grad_angle_hi = M_PI / 6.0;
};

struct SenseSample {
  double g = 0.0;
  std::optional<double> grad_dir;  // direction of increasing field
  double goal_bearing = 0.0;
  std::optional<double> theta_fg;  // angle(goal dir, grad dir), [0, pi]
  double theta_rg = 0.0;           // angle(heading, goal dir), [0, pi]
};

// Local sensing of the field plus global sensing of the goal bearing. Noise,
// when enabled, multiplies the measured strength by a uniform factor and
// perturbs the gradient direction by a uniform angle; the derived angles use
// the noisy direction. The gradient is absent for a negligible or degenerate
// field.
SenseSample sense(Vec2 pos, double heading, const field::FieldSet& fs, Vec2 goal,
                  const NoiseConfig& noise, Rng& rng);

// Mode transitions:
//   GoalSeek -> Circumnavigate  when g >= g_th and theta_fg <= pi/2
//   Circumnavigate -> GoalSeek  when theta_rg < pi/2 and theta_fg > pi/2
// Both require a sensed gradient; otherwise the mode is unchanged.
Mode update_mode(Mode mode, const SenseSample& s, double g_th);

// The tangential direction grad_dir +- pi/2 closer to the goal bearing;
// an exact tie picks the counterclockwise side (+pi/2).
double circumnavigate_heading(double grad_dir, double goal_bearing);

// GoalSeek: the goal bearing. Circumnavigate: circumnavigate_heading; throws
// std::logic_error when the gradient is absent.
double target_heading(Mode mode, const SenseSample& s);

// One control tick: move straight at `speed` when the heading error is
// within the deadband, otherwise turn in place toward the target, clamped so
// one tick never overshoots.
AgentState step(const AgentState& st, double target, const AgentParams& params, double dt);

}  // namespace swarmnav::agent
