#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "swarmnav/acoustic.hpp"

using namespace swarmnav;
using acoustic::AcousticParams;
using acoustic::AcousticRobotState;
using acoustic::MicArray;
using acoustic::Readings;
using agent::Mode;

TEST_CASE("no sources means silent microphones") {
  AcousticRobotState st;
  Readings v = acoustic::mic_readings(st, MicArray{}, field::FieldSet{});
  for (double x : v) CHECK(x == 0.0);
}

TEST_CASE("a distant source along +x orders the microphones") {
  AcousticRobotState st;  // heading 0, mic 1 at +x
  field::FieldSet fs;
  fs.add({10, 0}, 1.0);
  Readings v = acoustic::mic_readings(st, MicArray{}, fs);
  for (int n = 1; n < 6; ++n) CHECK(v[0] > v[n]);
  for (int n = 0; n < 6; ++n)
    if (n != 3) CHECK(v[3] < v[n]);
  CHECK(v[1] == doctest::Approx(v[5]).epsilon(1e-12));  // symmetry about the x axis
  CHECK(v[2] == doctest::Approx(v[4]).epsilon(1e-12));
}

TEST_CASE("microphone values match the inverse-square formula") {
  MicArray array;
  AcousticRobotState st;
  st.position = {1.0, -0.5};
  st.heading = 0.7;
  field::FieldSet fs;
  fs.add({2.0, 0.3}, 42.0);
  Readings v = acoustic::mic_readings(st, array, fs);
  for (int n = 0; n < 6; ++n) {
    double phi = st.heading + 2.0 * M_PI * n / 6.0;
    Vec2 mic{st.position.x + array.radius * std::cos(phi),
             st.position.y + array.radius * std::sin(phi)};
    double expected = 42.0 / (mic - Vec2{2.0, 0.3}).norm2();
    CHECK(v[n] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("average of the six readings") {
  CHECK(acoustic::estimate_average({5, 5, 5, 5, 5, 5}) == 5.0);
  CHECK(acoustic::estimate_average({1, 2, 3, 4, 5, 6}) == doctest::Approx(3.5));
}

TEST_CASE("average approximates the center value for distant sources") {
  MicArray array;
  field::FieldSet fs;
  fs.add({0, 0}, 1.0);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    double r = uniform(rng, 10.0 * array.radius, 40.0 * array.radius);
    double phi = uniform(rng, -M_PI, M_PI);
    AcousticRobotState st;
    st.position = {r * std::cos(phi), r * std::sin(phi)};
    st.heading = uniform(rng, -M_PI, M_PI);
    double v_ave = acoustic::estimate_average(acoustic::mic_readings(st, array, fs));
    double center = field::strength_at(fs, st.position);
    CHECK(std::fabs(v_ave - center) / center < 0.01);
  }
}

TEST_CASE("equal readings give no gradient direction") {
  auto est = acoustic::estimate_gradient({3, 3, 3, 3, 3, 3}, MicArray{}, 0.4);
  CHECK(est.grad.norm() < 1e-15);
  CHECK_FALSE(est.direction.has_value());
}

TEST_CASE("linear field over the array recovers the closed form") {
  MicArray array;
  double k = 7.0;
  Readings v;
  for (int n = 0; n < 6; ++n) v[n] = k * array.offset(n).x;
  auto est = acoustic::estimate_gradient(v, array, 0.0);
  // sum cos^2 over six evenly spaced mics is 3.
  CHECK(std::fabs(est.grad.x - 3.0 * k * array.radius * array.radius) < 1e-9);
  CHECK(std::fabs(est.grad.y) < 1e-9);
  REQUIRE(est.direction.has_value());
  CHECK(std::fabs(*est.direction) < 1e-9);

  // The same readings on a rotated robot point the world-frame estimate
  // along the rotated axis.
  auto rotated = acoustic::estimate_gradient(v, array, 1.1);
  REQUIRE(rotated.direction.has_value());
  CHECK(*rotated.direction == doctest::Approx(1.1).epsilon(1e-9));
}

TEST_CASE("estimated direction tracks the analytic gradient within five degrees") {
  MicArray array;
  field::FieldSet fs;
  fs.add({0, 0}, 1.0);
  Rng rng(4);
  int worst_count = 0;
  for (int i = 0; i < 1000; ++i) {
    double r = uniform(rng, 2.0 * array.radius, 30.0 * array.radius);
    double phi = uniform(rng, -M_PI, M_PI);
    AcousticRobotState st;
    st.position = {r * std::cos(phi), r * std::sin(phi)};
    st.heading = uniform(rng, -M_PI, M_PI);
    auto est = acoustic::estimate_gradient(acoustic::mic_readings(st, array, fs), array,
                                           st.heading);
    REQUIRE(est.direction.has_value());
    Vec2 g = field::gradient_at(fs, st.position);
    double err = angle_between(*est.direction, std::atan2(g.y, g.x));
    CHECK(err <= 5.0 * M_PI / 180.0);
    if (err > 2.0 * M_PI / 180.0) ++worst_count;
  }
  CHECK(worst_count < 1000);
}

TEST_CASE("estimator converges to the analytic direction for small arrays") {
  MicArray array;
  field::FieldSet fs;
  fs.add({0, 0}, 1.0);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    double r = 20.0 * array.radius;
    double phi = uniform(rng, -M_PI, M_PI);
    AcousticRobotState st;
    st.position = {r * std::cos(phi), r * std::sin(phi)};
    st.heading = uniform(rng, -M_PI, M_PI);
    auto est = acoustic::estimate_gradient(acoustic::mic_readings(st, array, fs), array,
                                           st.heading);
    REQUIRE(est.direction.has_value());
    Vec2 g = field::gradient_at(fs, st.position);
    CHECK(angle_between(*est.direction, std::atan2(g.y, g.x)) <= 1.0 * M_PI / 180.0);
  }
}

TEST_CASE("estimate rotates with the scene") {
  MicArray array;
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    field::FieldSet fs;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < n; ++k)
      fs.add({uniform(rng, -3, 3), uniform(rng, -3, 3)}, uniform(rng, 0.5, 2.0));
    AcousticRobotState st;
    st.position = {uniform(rng, -4, 4), uniform(rng, -4, 4)};
    st.heading = uniform(rng, -M_PI, M_PI);
    bool close = false;
    for (const auto& s : fs.sources)
      if (distance(s.position, st.position) < 4.0 * array.radius) close = true;
    if (close) continue;

    double phi = uniform(rng, -M_PI, M_PI);
    double c = std::cos(phi), s = std::sin(phi);
    auto rot = [&](Vec2 p) { return Vec2{c * p.x - s * p.y, s * p.x + c * p.y}; };
    field::FieldSet fs_rot;
    for (const auto& src : fs.sources) fs_rot.add(rot(src.position), src.strength_c);
    AcousticRobotState st_rot;
    st_rot.position = rot(st.position);
    st_rot.heading = wrap_angle(st.heading + phi);

    auto est = acoustic::estimate_gradient(acoustic::mic_readings(st, array, fs), array,
                                           st.heading);
    auto est_rot = acoustic::estimate_gradient(
        acoustic::mic_readings(st_rot, array, fs_rot), array, st_rot.heading);
    if (!est.direction) continue;
    REQUIRE(est_rot.direction.has_value());
    CHECK(angle_between(*est_rot.direction, *est.direction + phi) < 1e-9);
  }
}

TEST_CASE("control inputs follow the two laws") {
  AcousticParams p;
  CHECK(acoustic::control_input(Mode::GoalSeek, 0.0, 0.0, p) == 0.0);
  CHECK(acoustic::control_input(Mode::GoalSeek, 0.1, 0.0, p) == doctest::Approx(10.0));
  CHECK(acoustic::control_input(Mode::Circumnavigate, 0.0, 22000.0, p) == doctest::Approx(0.0));
  CHECK(acoustic::control_input(Mode::Circumnavigate, 0.0, 32000.0, p) ==
        doctest::Approx(100.0 * 1e-4 * 10000.0));
  CHECK(acoustic::control_input(Mode::Circumnavigate, 0.2, 22000.0, p) == doctest::Approx(20.0));
}

TEST_CASE("zero input drives straight and conserves heading exactly") {
  AcousticParams p;
  AcousticRobotState st;
  st.heading = 0.4;
  auto next = acoustic::motor_step(st, 0.0, p, 0.1);
  CHECK(next.heading == 0.4);
  CHECK(distance(next.position, st.position) == doctest::Approx(p.k_v * p.v_m * 0.1));
}

TEST_CASE("positive input turns clockwise") {
  AcousticParams p;
  AcousticRobotState st;
  auto next = acoustic::motor_step(st, 5.0, p, 0.1);
  CHECK(next.heading < 0.0);
  CHECK(next.heading == doctest::Approx(-2.0 * p.k_omega * 5.0 * 0.1));
}

TEST_CASE("constant input orbits at the unicycle radius") {
  AcousticParams p;
  double u = 10.0;
  double expected_radius = p.k_v * p.v_m / (2.0 * p.k_omega * u);
  double dt = 1e-3;
  AcousticRobotState st;
  std::vector<Vec2> orbit;
  double omega = 2.0 * p.k_omega * u;
  int steps = static_cast<int>(std::ceil(2.0 * M_PI / (omega * dt)));
  for (int i = 0; i < steps; ++i) {
    st = acoustic::motor_step(st, u, p, dt);
    orbit.push_back(st.position);
  }
  Vec2 center{0, 0};
  for (const Vec2& q : orbit) center = center + q;
  center = center * (1.0 / orbit.size());
  for (const Vec2& q : orbit)
    CHECK(distance(q, center) == doctest::Approx(expected_radius).epsilon(1e-3));
}

TEST_CASE("acoustic mode switching follows the thresholds") {
  AcousticParams p;
  // Loss of signal alone forces mode 1.
  CHECK(acoustic::acoustic_mode_switch(Mode::Circumnavigate, 14000.0, 0.3, 0.0, 0.0, p) ==
        Mode::GoalSeek);
  // Strong field toward the goal enters mode 2.
  CHECK(acoustic::acoustic_mode_switch(Mode::GoalSeek, 23000.0, M_PI / 4, 0.0, 0.0, p) ==
        Mode::Circumnavigate);
  // Weak field stays in mode 1.
  CHECK(acoustic::acoustic_mode_switch(Mode::GoalSeek, 10000.0, 0.0, 0.0, 0.0, p) ==
        Mode::GoalSeek);
  // Field behind, robot facing the goal: leave mode 2.
  CHECK(acoustic::acoustic_mode_switch(Mode::Circumnavigate, 20000.0, M_PI, 0.0, 0.1, p) ==
        Mode::GoalSeek);
  // Field goalward keeps mode 2 while the signal is healthy.
  CHECK(acoustic::acoustic_mode_switch(Mode::Circumnavigate, 20000.0, 0.2, 0.0, 0.0, p) ==
        Mode::Circumnavigate);
  // No gradient and healthy signal: stay put.
  CHECK(acoustic::acoustic_mode_switch(Mode::Circumnavigate, 20000.0, std::nullopt, 0.0, 0.0,
                                       p) == Mode::Circumnavigate);
}

TEST_CASE("mic-driven loop shadows the exact-gradient loop around an emitter") {
  double eps = 0.5;
  acoustic::AcousticRunConfig rc;
  rc.start = {0, 0};
  rc.goal = {3, 0};
  rc.emitters.push_back({1.5, 0.1, acoustic::gain_for_radius(eps, rc.params.v_target)});
  rc.time_budget = 600.0;
  rc.goal_tolerance = 0.05;

  rc.sensing = acoustic::Sensing::Exact;
  auto [res_exact, trace_exact] = acoustic::run_acoustic_trial(rc);
  rc.sensing = acoustic::Sensing::Mic;
  auto [res_mic, trace_mic] = acoustic::run_acoustic_trial(rc);

  REQUIRE(res_exact.success);
  REQUIRE(res_mic.success);

  std::vector<Vec2> path_exact, path_mic;
  for (const auto& r : trace_exact.ticks) path_exact.push_back(r.position);
  for (const auto& r : trace_mic.ticks) path_mic.push_back(r.position);
  CHECK(testutil::max_cross_track(path_mic, path_exact) <= 0.2 * eps);

  // Both loops actually bypassed the emitter rather than running it over.
  Vec2 emitter{1.5, 0.1};
  for (const Vec2& q : path_mic) CHECK(distance(q, emitter) > 0.2 * eps);

  // Mic traces carry the raw readings.
  REQUIRE(!trace_mic.ticks.empty());
  CHECK(trace_mic.ticks.front().mic.has_value());
  CHECK(trace_mic.ticks.front().v_ave.has_value());
}

TEST_CASE("acoustic traces round trip through the sim format") {
  acoustic::AcousticRunConfig rc;
  rc.emitters.push_back({1.5, 0.1, acoustic::gain_for_radius(0.5, rc.params.v_target)});
  rc.time_budget = 60.0;
  auto [res, trace] = acoustic::run_acoustic_trial(rc);
  std::string bytes = sim::serialize_trace(trace);
  sim::SimTrace back = sim::load_trace(bytes);
  CHECK(sim::serialize_trace(back) == bytes);
  REQUIRE(back.header.acoustic.has_value());
  CHECK(back.header.acoustic->sensing == "mic");
  CHECK(back.header.acoustic->emitters.size() == 1);
}
