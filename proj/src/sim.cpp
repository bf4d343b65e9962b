#include "swarmnav/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmnav::sim {

bool is_stuck(const terrain::GridTerrain& t, Vec2 p) {
  int col = static_cast<int>(std::floor(p.x));
  int row = static_cast<int>(std::floor(p.y));
  return t.impassable(col, row);
}

bool is_goal_reached(Vec2 p, Vec2 goal, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("goal tolerance must be positive");
  return distance(p, goal) <= tol;
}

namespace {

void validate_config(const SimConfig& cfg) {
  if (cfg.dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (cfg.time_budget <= 0.0) throw std::invalid_argument("time_budget must be positive");
  if (cfg.goal_tolerance <= 0.0) throw std::invalid_argument("goal_tolerance must be positive");
  if (cfg.max_robots < 1) throw std::invalid_argument("max_robots must be at least 1");
  if (cfg.epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (cfg.c <= 0.0) throw std::invalid_argument("c must be positive");
}

}  // namespace

std::pair<SimResult, SimTrace> run_trial(const terrain::GridTerrain& t, const SimConfig& cfg) {
  terrain::validate(t);
  validate_config(cfg);

  agent::AgentParams params;
  params.epsilon = cfg.epsilon;
  params.g_th = cfg.g_th();

  Rng rng(cfg.seed);
  field::FieldSet fields;

  SimTrace trace;
  trace.header.kind = "sim";
  trace.header.config = cfg;
  trace.header.terrain = t;

  SimResult result;
  std::int64_t ticks = 0;
  double elapsed = 0.0;

  agent::AgentState st;
  auto deploy = [&](double at) {
    st.position = t.start;
    st.heading = bearing(t.start, t.goal);  // placed facing the goal
    st.mode = agent::Mode::GoalSeek;
    st.status = agent::Status::Active;
    trace.events.push_back({at, EventKind::Deployed, result.robots_deployed, st.position});
    ++result.robots_deployed;
  };
  deploy(0.0);
  int robot = 0;

  while (true) {
    if (elapsed > cfg.time_budget) {
      trace.events.push_back({elapsed, EventKind::Timeout, robot, st.position});
      result.reason = Reason::Timeout;
      break;
    }

    agent::SenseSample s =
        agent::sense(st.position, st.heading, fields, t.goal, cfg.noise, rng);
    st.mode = agent::update_mode(st.mode, s, params.g_th);
    trace.ticks.push_back(
        {elapsed, robot, st.position, st.heading, st.mode, s.g, s.grad_dir});

    // A circumnavigating robot with no usable gradient holds its heading for
    // the tick (visible in the trace as a null grad_dir).
    double target = (st.mode == agent::Mode::Circumnavigate && !s.grad_dir)
                        ? st.heading
                        : agent::target_heading(st.mode, s);
    st = agent::step(st, target, params, cfg.dt);
    ++ticks;
    elapsed = static_cast<double>(ticks) * cfg.dt;

    if (is_stuck(t, st.position)) {
      st.status = agent::Status::Stuck;
      ++result.robots_stuck;
      trace.events.push_back({elapsed, EventKind::Stuck, robot, st.position});
      fields.add(st.position, cfg.c);
      if (result.robots_deployed >= cfg.max_robots) {
        result.reason = Reason::RobotsExhausted;
        break;
      }
      deploy(elapsed);
      ++robot;
    } else if (is_goal_reached(st.position, t.goal, cfg.goal_tolerance)) {
      st.status = agent::Status::Reached;
      trace.events.push_back({elapsed, EventKind::Reached, robot, st.position});
      result.reason = Reason::Reached;
      result.success = true;
      break;
    }
  }

  result.elapsed = elapsed;
  return {result, std::move(trace)};
}

}  // namespace swarmnav::sim
