#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarmnav/agent.hpp"
#include "swarmnav/geometry.hpp"
#include "swarmnav/terrain.hpp"

namespace swarmnav::sim {

struct SimConfig {
  double dt = 0.1;
  double time_budget = 10000.0;
  double goal_tolerance = 1.0;
  int max_robots = 100;
  double epsilon = 1.0;
  double c = 1.0;
  agent::NoiseConfig noise;
  std::uint64_t seed = 0;

  double g_th() const { return c / (epsilon * epsilon); }
};

enum class Reason { Reached, Timeout, RobotsExhausted };

struct SimResult {
  bool success = false;
  int robots_deployed = 0;
  int robots_stuck = 0;
  double elapsed = 0.0;
  Reason reason = Reason::Timeout;
};

enum class EventKind { Deployed, Stuck, Reached, Timeout };

struct TickRecord {
  double t = 0.0;
  int robot = 0;
  Vec2 position;
  double heading = 0.0;
  agent::Mode mode = agent::Mode::GoalSeek;
  double g = 0.0;
  std::optional<double> grad_dir;
  // Acoustic runs append raw microphone values and their mean.
  std::optional<std::array<double, 6>> mic;
  std::optional<double> v_ave;
};

struct EventRecord {
  double t = 0.0;
  EventKind kind = EventKind::Deployed;
  int robot = 0;
  Vec2 position;
};

// Echo of an acoustic run's configuration, kept free of acoustic-module
// types so traces stay self-contained.
struct AcousticEcho {
  std::string sensing;  // "mic" or "exact"
  double dt = 0.0;
  double time_budget = 0.0;
  double goal_tolerance = 0.0;
  std::uint64_t seed = 0;
  double k_p = 0.0;
  double alpha = 0.0;
  double v_target = 0.0;
  double v_min = 0.0;
  double v_m = 0.0;
  double k_v = 0.0;
  double k_omega = 0.0;
  double array_radius = 0.0;
  Vec2 start, goal;
  std::vector<std::array<double, 3>> emitters;  // x, y, gain
  agent::NoiseConfig noise;
};

struct TraceHeader {
  std::string kind;  // "sim" or "acoustic"
  SimConfig config;
  std::optional<terrain::GridTerrain> terrain;
  std::optional<AcousticEcho> acoustic;
};

// Per-trial event log. Ticks and events are each time-ordered; their merged
// run order puts events before ticks that share a timestamp.
struct SimTrace {
  TraceHeader header;
  std::vector<TickRecord> ticks;
  std::vector<EventRecord> events;
};

// Line-delimited serialization: a header object on the first line, then one
// record object per line in run order. Numbers carry 9 significant digits;
// round trips are byte-exact.
std::string serialize_trace(const SimTrace& tr);

// Throws std::runtime_error naming the offending line on malformed input.
SimTrace load_trace(const std::string& bytes);

void save_trace_file(const SimTrace& tr, const std::string& path);
SimTrace load_trace_file(const std::string& path);

const char* mode_name(agent::Mode m);
const char* event_name(EventKind k);
const char* reason_name(Reason r);

}  // namespace swarmnav::sim
