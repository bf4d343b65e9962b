#include "swarmnav/trace.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "swarmnav/format.hpp"

namespace swarmnav::sim {

namespace {

using nlohmann::json;

void write_noise(std::ostringstream& os, const agent::NoiseConfig& n) {
  os << "{\"enabled\":" << (n.enabled ? "true" : "false")
     << ",\"strength_lo\":" << g9(n.strength_factor_lo)
     << ",\"strength_hi\":" << g9(n.strength_factor_hi)
     << ",\"angle_lo\":" << g9(n.grad_angle_lo)
     << ",\"angle_hi\":" << g9(n.grad_angle_hi) << "}";
}

void write_header(std::ostringstream& os, const TraceHeader& h) {
  os << "{\"format\":\"swarmnav-trace\",\"version\":1,\"kind\":\"" << h.kind << "\"";
  if (h.kind == "sim") {
    const SimConfig& c = h.config;
    os << ",\"config\":{\"dt\":" << g9(c.dt) << ",\"time_budget\":" << g9(c.time_budget)
       << ",\"goal_tolerance\":" << g9(c.goal_tolerance) << ",\"max_robots\":" << c.max_robots
       << ",\"epsilon\":" << g9(c.epsilon) << ",\"c\":" << g9(c.c)
       << ",\"g_th\":" << g9(c.g_th()) << ",\"seed\":" << c.seed << ",\"noise\":";
    write_noise(os, c.noise);
    os << "}";
    if (h.terrain) {
      const terrain::GridTerrain& t = *h.terrain;
      os << ",\"terrain\":{\"width\":" << t.width_cells << ",\"height\":" << t.height_cells
         << ",\"start\":[" << g9(t.start.x) << "," << g9(t.start.y) << "],\"goal\":["
         << g9(t.goal.x) << "," << g9(t.goal.y) << "],\"cells\":\"" << cells_to_hex(t)
         << "\"}";
    }
  } else if (h.kind == "acoustic") {
    const AcousticEcho& a = *h.acoustic;
    os << ",\"acoustic\":{\"sensing\":\"" << a.sensing << "\",\"dt\":" << g9(a.dt)
       << ",\"time_budget\":" << g9(a.time_budget)
       << ",\"goal_tolerance\":" << g9(a.goal_tolerance) << ",\"seed\":" << a.seed
       << ",\"k_p\":" << g9(a.k_p) << ",\"alpha\":" << g9(a.alpha)
       << ",\"v_target\":" << g9(a.v_target) << ",\"v_min\":" << g9(a.v_min)
       << ",\"v_m\":" << g9(a.v_m) << ",\"k_v\":" << g9(a.k_v)
       << ",\"k_omega\":" << g9(a.k_omega) << ",\"array_radius\":" << g9(a.array_radius)
       << ",\"start\":[" << g9(a.start.x) << "," << g9(a.start.y) << "],\"goal\":["
       << g9(a.goal.x) << "," << g9(a.goal.y) << "],\"emitters\":[";
    for (std::size_t i = 0; i < a.emitters.size(); ++i) {
      if (i) os << ",";
      os << "[" << g9(a.emitters[i][0]) << "," << g9(a.emitters[i][1]) << ","
         << g9(a.emitters[i][2]) << "]";
    }
    os << "],\"noise\":";
    write_noise(os, a.noise);
    os << "}";
  }
  os << "}\n";
}

void write_tick(std::ostringstream& os, const TickRecord& r) {
  os << "{\"t\":" << g9(r.t) << ",\"robot\":" << r.robot << ",\"x\":" << g9(r.position.x)
     << ",\"y\":" << g9(r.position.y) << ",\"heading\":" << g9(r.heading) << ",\"mode\":\""
     << mode_name(r.mode) << "\",\"g\":" << g9(r.g) << ",\"grad_dir\":"
     << (r.grad_dir ? g9(*r.grad_dir) : "null");
  if (r.mic) {
    os << ",\"v\":[";
    for (int i = 0; i < 6; ++i) {
      if (i) os << ",";
      os << g9((*r.mic)[i]);
    }
    os << "]";
  }
  if (r.v_ave) os << ",\"v_ave\":" << g9(*r.v_ave);
  os << "}\n";
}

void write_event(std::ostringstream& os, const EventRecord& e) {
  os << "{\"t\":" << g9(e.t) << ",\"event\":\"" << event_name(e.kind)
     << "\",\"robot\":" << e.robot << ",\"x\":" << g9(e.position.x)
     << ",\"y\":" << g9(e.position.y) << "}\n";
}

agent::NoiseConfig parse_noise(const json& j) {
  agent::NoiseConfig n;
  n.enabled = j.at("enabled").get<bool>();
  n.strength_factor_lo = j.at("strength_lo").get<double>();
  n.strength_factor_hi = j.at("strength_hi").get<double>();
  n.grad_angle_lo = j.at("angle_lo").get<double>();
  n.grad_angle_hi = j.at("angle_hi").get<double>();
  return n;
}

TraceHeader parse_header(const json& j) {
  TraceHeader h;
  if (j.at("format").get<std::string>() != "swarmnav-trace")
    throw std::runtime_error("not a swarmnav trace");
  if (j.at("version").get<int>() != 1) throw std::runtime_error("unsupported trace version");
  h.kind = j.at("kind").get<std::string>();
  if (h.kind == "sim") {
    const json& c = j.at("config");
    h.config.dt = c.at("dt").get<double>();
    h.config.time_budget = c.at("time_budget").get<double>();
    h.config.goal_tolerance = c.at("goal_tolerance").get<double>();
    h.config.max_robots = c.at("max_robots").get<int>();
    h.config.epsilon = c.at("epsilon").get<double>();
    h.config.c = c.at("c").get<double>();
    h.config.seed = c.at("seed").get<std::uint64_t>();
    h.config.noise = parse_noise(c.at("noise"));
    if (j.contains("terrain")) {
      const json& tj = j.at("terrain");
      terrain::GridTerrain t;
      t.width_cells = tj.at("width").get<int>();
      t.height_cells = tj.at("height").get<int>();
      t.start = {tj.at("start").at(0).get<double>(), tj.at("start").at(1).get<double>()};
      t.goal = {tj.at("goal").at(0).get<double>(), tj.at("goal").at(1).get<double>()};
      t.cells.assign(static_cast<std::size_t>(t.width_cells) * t.height_cells, 0);
      terrain::cells_from_hex(t, tj.at("cells").get<std::string>());
      h.terrain = std::move(t);
    }
  } else if (h.kind == "acoustic") {
    const json& a = j.at("acoustic");
    AcousticEcho e;
    e.sensing = a.at("sensing").get<std::string>();
    e.dt = a.at("dt").get<double>();
    e.time_budget = a.at("time_budget").get<double>();
    e.goal_tolerance = a.at("goal_tolerance").get<double>();
    e.seed = a.at("seed").get<std::uint64_t>();
    e.k_p = a.at("k_p").get<double>();
    e.alpha = a.at("alpha").get<double>();
    e.v_target = a.at("v_target").get<double>();
    e.v_min = a.at("v_min").get<double>();
    e.v_m = a.at("v_m").get<double>();
    e.k_v = a.at("k_v").get<double>();
    e.k_omega = a.at("k_omega").get<double>();
    e.array_radius = a.at("array_radius").get<double>();
    e.start = {a.at("start").at(0).get<double>(), a.at("start").at(1).get<double>()};
    e.goal = {a.at("goal").at(0).get<double>(), a.at("goal").at(1).get<double>()};
    for (const json& em : a.at("emitters"))
      e.emitters.push_back({em.at(0).get<double>(), em.at(1).get<double>(), em.at(2).get<double>()});
    e.noise = parse_noise(a.at("noise"));
    h.acoustic = std::move(e);
  } else {
    throw std::runtime_error("unknown trace kind '" + h.kind + "'");
  }
  return h;
}

agent::Mode parse_mode(const std::string& s) {
  if (s == "goal_seek") return agent::Mode::GoalSeek;
  if (s == "circumnavigate") return agent::Mode::Circumnavigate;
  throw std::runtime_error("unknown mode '" + s + "'");
}

EventKind parse_event(const std::string& s) {
  if (s == "deployed") return EventKind::Deployed;
  if (s == "stuck") return EventKind::Stuck;
  if (s == "reached") return EventKind::Reached;
  if (s == "timeout") return EventKind::Timeout;
  throw std::runtime_error("unknown event '" + s + "'");
}

}  // namespace

const char* mode_name(agent::Mode m) {
  return m == agent::Mode::GoalSeek ? "goal_seek" : "circumnavigate";
}

const char* event_name(EventKind k) {
  switch (k) {
    case EventKind::Deployed: return "deployed";
    case EventKind::Stuck: return "stuck";
    case EventKind::Reached: return "reached";
    case EventKind::Timeout: return "timeout";
  }
  return "?";
}

const char* reason_name(Reason r) {
  switch (r) {
    case Reason::Reached: return "Reached";
    case Reason::Timeout: return "Timeout";
    case Reason::RobotsExhausted: return "RobotsExhausted";
  }
  return "?";
}

std::string serialize_trace(const SimTrace& tr) {
  std::ostringstream os;
  write_header(os, tr.header);
  // Run order: ticks and events are each time-ordered; at equal timestamps
  // events come first.
  std::size_t ti = 0, ei = 0;
  while (ti < tr.ticks.size() || ei < tr.events.size()) {
    bool take_event = ei < tr.events.size() &&
                      (ti >= tr.ticks.size() || tr.events[ei].t <= tr.ticks[ti].t);
    if (take_event)
      write_event(os, tr.events[ei++]);
    else
      write_tick(os, tr.ticks[ti++]);
  }
  return os.str();
}

SimTrace load_trace(const std::string& bytes) {
  std::istringstream is(bytes);
  std::string line;
  int lineno = 0;
  SimTrace tr;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      if (!have_header) {
        tr.header = parse_header(j);
        have_header = true;
      } else if (j.contains("event")) {
        EventRecord e;
        e.t = j.at("t").get<double>();
        e.kind = parse_event(j.at("event").get<std::string>());
        e.robot = j.at("robot").get<int>();
        e.position = {j.at("x").get<double>(), j.at("y").get<double>()};
        tr.events.push_back(e);
      } else {
        TickRecord r;
        r.t = j.at("t").get<double>();
        r.robot = j.at("robot").get<int>();
        r.position = {j.at("x").get<double>(), j.at("y").get<double>()};
        r.heading = j.at("heading").get<double>();
        r.mode = parse_mode(j.at("mode").get<std::string>());
        r.g = j.at("g").get<double>();
        if (!j.at("grad_dir").is_null()) r.grad_dir = j.at("grad_dir").get<double>();
        if (j.contains("v")) {
          std::array<double, 6> v{};
          for (int i = 0; i < 6; ++i) v[i] = j.at("v").at(i).get<double>();
          r.mic = v;
        }
        if (j.contains("v_ave")) r.v_ave = j.at("v_ave").get<double>();
        tr.ticks.push_back(r);
      }
    } catch (const json::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw std::runtime_error("trace is empty (no header line)");
  return tr;
}

void save_trace_file(const SimTrace& tr, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << serialize_trace(tr);
  if (!os) throw std::runtime_error("write failed: " + path);
}

SimTrace load_trace_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return load_trace(buf.str());
}

}  // namespace swarmnav::sim
