#include "swarmnav/acoustic.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmnav::acoustic {

Readings mic_readings(const AcousticRobotState& pose, const MicArray& array,
                      const field::FieldSet& others) {
  Readings v{};
  double ch = std::cos(pose.heading), sh = std::sin(pose.heading);
  for (int n = 0; n < MicArray::kMicCount; ++n) {
    Vec2 m = array.offset(n);
    Vec2 world{pose.position.x + ch * m.x - sh * m.y, pose.position.y + sh * m.x + ch * m.y};
    v[n] = strength_at(others, world);
  }
  return v;
}

double estimate_average(const Readings& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / MicArray::kMicCount;
}

GradientEstimate estimate_gradient(const Readings& v, const MicArray& array, double heading) {
  double v_ave = estimate_average(v);
  Vec2 g_robot;
  for (int n = 0; n < MicArray::kMicCount; ++n) {
    Vec2 m = array.offset(n);
    g_robot.x += (v[n] - v_ave) * m.x;
    g_robot.y += (v[n] - v_ave) * m.y;
  }
  double ch = std::cos(heading), sh = std::sin(heading);
  GradientEstimate est;
  est.grad = {ch * g_robot.x - sh * g_robot.y, sh * g_robot.x + ch * g_robot.y};
  if (est.grad.norm() >= agent::kGradientFloor)
    est.direction = std::atan2(est.grad.y, est.grad.x);
  return est;
}

double control_input(agent::Mode mode, double theta, double v_ave, const AcousticParams& p) {
  if (mode == agent::Mode::GoalSeek) return p.k_p * theta;
  return p.k_p * (theta + p.alpha * (v_ave - p.v_target));
}

AcousticRobotState motor_step(const AcousticRobotState& st, double u, const AcousticParams& p,
                              double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  AcousticRobotState next = st;
  double v = p.k_v * p.v_m;
  double omega = -2.0 * p.k_omega * u;  // left gets v_m + u, right v_m - u
  next.position.x += v * dt * std::cos(st.heading);
  next.position.y += v * dt * std::sin(st.heading);
  next.heading = wrap_angle(st.heading + omega * dt);
  return next;
}

agent::Mode acoustic_mode_switch(agent::Mode mode, double v_ave,
                                 const std::optional<double>& grad_dir, double goal_bearing,
                                 double heading, const AcousticParams& p) {
  if (mode == agent::Mode::GoalSeek) {
    if (v_ave > p.v_target && grad_dir &&
        angle_between(goal_bearing, *grad_dir) < M_PI / 2.0)
      return agent::Mode::Circumnavigate;
    return mode;
  }
  if (v_ave < p.v_min) return agent::Mode::GoalSeek;
  if (angle_between(heading, goal_bearing) < M_PI / 2.0 && grad_dir &&
      angle_between(*grad_dir, goal_bearing) > M_PI / 2.0)
    return agent::Mode::GoalSeek;
  return mode;
}

std::pair<sim::SimResult, sim::SimTrace> run_acoustic_trial(const AcousticRunConfig& rc) {
  if (rc.goal_tolerance <= 0.0) throw std::invalid_argument("goal_tolerance must be positive");
  if (rc.time_budget <= 0.0) throw std::invalid_argument("time_budget must be positive");

  field::FieldSet emitters;
  for (const auto& e : rc.emitters) emitters.add({e[0], e[1]}, e[2]);

  sim::SimTrace trace;
  trace.header.kind = "acoustic";
  sim::AcousticEcho echo;
  echo.sensing = rc.sensing == Sensing::Mic ? "mic" : "exact";
  echo.dt = rc.params.dt;
  echo.time_budget = rc.time_budget;
  echo.goal_tolerance = rc.goal_tolerance;
  echo.seed = rc.seed;
  echo.k_p = rc.params.k_p;
  echo.alpha = rc.params.alpha;
  echo.v_target = rc.params.v_target;
  echo.v_min = rc.params.v_min;
  echo.v_m = rc.params.v_m;
  echo.k_v = rc.params.k_v;
  echo.k_omega = rc.params.k_omega;
  echo.array_radius = rc.array.radius;
  echo.start = rc.start;
  echo.goal = rc.goal;
  echo.emitters = rc.emitters;
  echo.noise = rc.noise;
  trace.header.acoustic = echo;

  Rng rng(rc.seed);
  AcousticRobotState st;
  st.position = rc.start;
  st.heading = bearing(rc.start, rc.goal);

  sim::SimResult result;
  result.robots_deployed = 1;
  trace.events.push_back({0.0, sim::EventKind::Deployed, 0, st.position});

  std::int64_t ticks = 0;
  double elapsed = 0.0;
  const double dt = rc.params.dt;

  while (true) {
    if (elapsed > rc.time_budget) {
      trace.events.push_back({elapsed, sim::EventKind::Timeout, 0, st.position});
      result.reason = sim::Reason::Timeout;
      break;
    }

    double v_ave;
    std::optional<double> grad_dir;
    sim::TickRecord rec;
    if (rc.sensing == Sensing::Mic) {
      Readings v = mic_readings(st, rc.array, emitters);
      if (rc.noise.enabled)
        for (double& x : v)
          x *= uniform(rng, rc.noise.strength_factor_lo, rc.noise.strength_factor_hi);
      v_ave = estimate_average(v);
      grad_dir = estimate_gradient(v, rc.array, st.heading).direction;
      rec.mic = v;
    } else {
      v_ave = strength_at(emitters, st.position);
      if (rc.noise.enabled)
        v_ave *= uniform(rng, rc.noise.strength_factor_lo, rc.noise.strength_factor_hi);
      if (!emitters.empty() && !degenerate_at(emitters, st.position)) {
        Vec2 grad = gradient_at(emitters, st.position);
        if (grad.norm() >= agent::kGradientFloor) {
          double dir = std::atan2(grad.y, grad.x);
          if (rc.noise.enabled)
            dir += uniform(rng, rc.noise.grad_angle_lo, rc.noise.grad_angle_hi);
          grad_dir = wrap_angle(dir);
        }
      }
    }

    double goal_bearing = bearing(st.position, rc.goal);
    st.mode = acoustic_mode_switch(st.mode, v_ave, grad_dir, goal_bearing, st.heading,
                                   rc.params);

    rec.t = elapsed;
    rec.robot = 0;
    rec.position = st.position;
    rec.heading = st.heading;
    rec.mode = st.mode;
    rec.g = v_ave;
    rec.grad_dir = grad_dir;
    rec.v_ave = v_ave;
    trace.ticks.push_back(rec);

    double theta;
    if (st.mode == agent::Mode::GoalSeek) {
      theta = wrap_angle(goal_bearing - st.heading);
    } else if (grad_dir) {
      double target = agent::circumnavigate_heading(*grad_dir, goal_bearing);
      theta = wrap_angle(target - st.heading);
    } else {
      theta = 0.0;  // no usable gradient: hold course, regulate on V_e only
    }
    double u = control_input(st.mode, theta, v_ave, rc.params);
    st = motor_step(st, u, rc.params, dt);
    ++ticks;
    elapsed = static_cast<double>(ticks) * dt;

    if (distance(st.position, rc.goal) <= rc.goal_tolerance) {
      trace.events.push_back({elapsed, sim::EventKind::Reached, 0, st.position});
      result.reason = sim::Reason::Reached;
      result.success = true;
      break;
    }
  }

  result.elapsed = elapsed;
  return {result, std::move(trace)};
}

}  // namespace swarmnav::acoustic
