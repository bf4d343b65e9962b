#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "swarmnav/agent.hpp"
#include "swarmnav/field.hpp"
#include "swarmnav/geometry.hpp"
#include "swarmnav/trace.hpp"

namespace swarmnav::acoustic {

// Six microphones evenly spaced on a circle around the robot center, mic 1
// on the robot's +x axis.
struct MicArray {
  static constexpr int kMicCount = 6;
  double radius = 0.1;  // m

  // Offset of microphone n (0-based) in the robot frame.
  Vec2 offset(int n) const {
    double theta = 2.0 * M_PI * n / kMicCount;
    return {radius * std::cos(theta), radius * std::sin(theta)};
  }
};

struct AcousticRobotState {
  Vec2 position;
  double heading = 0.0;
  agent::Mode mode = agent::Mode::GoalSeek;
  double source_gain = 1.0;
  int frequency_tag = 0;  // stands in for the per-robot emission channel
};

struct AcousticParams {
  double k_p = 100.0;
  double alpha = 1e-4;
  double v_target = 22000.0;
  double v_min = 15000.0;
  double v_m = 100.0;      // motor reference voltage
  double k_v = 0.001;      // forward m/s per volt
  double k_omega = 0.005;  // rad/s per volt of wheel differential
  double dt = 0.1;
};

using Readings = std::array<double, MicArray::kMicCount>;

// Per-mic intensity summed over the other robots' emissions (the robot's own
// channel is excluded by construction). Same inverse-square form as the
// virtual field, with each source's strength acting as its gain.
Readings mic_readings(const AcousticRobotState& pose, const MicArray& array,
                      const field::FieldSet& others);

// V_ave: the field value at the robot center, estimated as the mic mean.
double estimate_average(const Readings& v);

struct GradientEstimate {
  Vec2 grad;                        // world frame
  std::optional<double> direction;  // absent when |grad| is negligible
};

// grad = sum_n (V_n - V_ave) m_n in the robot frame, rotated into the world
// frame by `heading`; only the direction is used downstream.
GradientEstimate estimate_gradient(const Readings& v, const MicArray& array, double heading);

// Mode 1: u = K_p * theta1. Mode 2: u = K_p * (theta2 + alpha * (V_ave - V_target)).
double control_input(agent::Mode mode, double theta, double v_ave, const AcousticParams& p);

// Differential drive: v_m + u on the left motor, v_m - u on the right, so a
// positive u turns clockwise. First-order Euler pose update.
AcousticRobotState motor_step(const AcousticRobotState& st, double u, const AcousticParams& p,
                              double dt);

// Mode 1 -> 2 when V_ave > V_target and the grad/goal angle is below pi/2;
// mode 2 -> 1 when the robot already faces goalward of the field (robot/goal
// angle < pi/2, grad/goal angle > pi/2) or when V_ave drops below V_min.
agent::Mode acoustic_mode_switch(agent::Mode mode, double v_ave,
                                 const std::optional<double>& grad_dir, double goal_bearing,
                                 double heading, const AcousticParams& p);

// Emission gain making a robot at distance epsilon from a lone source read
// V_ave = v_target.
inline double gain_for_radius(double epsilon, double v_target) {
  return v_target * epsilon * epsilon;
}

enum class Sensing { Exact, Mic };

struct AcousticRunConfig {
  Sensing sensing = Sensing::Mic;
  MicArray array;
  AcousticParams params;
  Vec2 start{0.0, 0.0};
  Vec2 goal{3.0, 0.0};
  std::vector<std::array<double, 3>> emitters;  // x, y, gain
  double goal_tolerance = 0.05;                 // m
  double time_budget = 600.0;                   // s
  std::uint64_t seed = 0;
  agent::NoiseConfig noise;  // per-mic factors (mic) or value/angle (exact)
};

// Single-robot closed-loop run among fixed emitters, driven either by the
// mic-array estimator or by exact field values through the same controller.
// Emits the sim trace format with mic values appended to tick records.
std::pair<sim::SimResult, sim::SimTrace> run_acoustic_trial(const AcousticRunConfig& rc);

}  // namespace swarmnav::acoustic
