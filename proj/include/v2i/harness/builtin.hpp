/*
 * Copyright (C) 2026 The v2i-testbed Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#pragma once

#include <string>
#include <vector>

#include "v2i/harness/scenario.hpp"

namespace v2i::harness {

inline constexpr std::int64_t kTestIntersectionId = 1001;

/// Three-lane, single-reference test intersection. Lane 1 approaches from the
/// south on signal group 8; lanes 2 and 3 come from the east and west. Nodes
/// are 5 m apart so the nearest-node gate never loses a vehicle on its lane.
inline MapMessage test_intersection_map() {
  MapMessage m;
  m.intersection_id = kTestIntersectionId;
  m.reference = {39.99545, -83.04330};
  const auto make_lane = [](int id, int group, double x0, double y0, double dx, double dy) {
    LaneGeometry lane{id, group, {}};
    for (int i = 0; i <= 50; ++i) lane.nodes.push_back({x0 + dx * i, y0 + dy * i});
    return lane;
  };
  m.lanes.push_back(make_lane(1, 8, -180, -1500, 0, -500));
  m.lanes.push_back(make_lane(2, 2, 1500, 180, 500, 0));
  m.lanes.push_back(make_lane(3, 6, -1500, -180, -500, 0));
  return m;
}

/// Plan where group 8 runs `cycle` (starting at t = 0) and the cross
/// street groups run the same cycle half a period later.
inline SignalPlan test_intersection_plan(std::vector<Interval> cycle) {
  SignalPlan p;
  p.intersection_id = kTestIntersectionId;
  GroupCycle main{std::move(cycle), 0.0};
  GroupCycle cross = main;
  cross.cycle_offset = main.cycle_length() / 2.0;
  p.groups[8] = main;
  p.groups[2] = cross;
  p.groups[6] = cross;
  return p;
}

namespace builtin_detail {

using namespace driver;

inline Condition when(ConditionKind k) { return {k, SignalState::GREEN, 0.0, 0}; }
inline Condition when_light(SignalState s) { return {ConditionKind::LIGHT_IS, s, 0.0, 0}; }
inline Condition when_value(ConditionKind k, double v) { return {k, SignalState::GREEN, v, 0}; }
inline Condition when_state(int code) { return {ConditionKind::STATE_IS, SignalState::GREEN, 0.0, code}; }

inline Action accelerate(double a, double cap_kmh) {
  return {ActionKind::ACCELERATE, a, cap_kmh, 0.0, 1.0};
}
inline Action brake(double a) { return {ActionKind::BRAKE, a, 0.0, 0.0, 1.0}; }
inline Action hold() { return {ActionKind::HOLD, 0.0, 0.0, 0.0, 1.0}; }
inline Action stop_at_line(double margin, double hold_brake) {
  return {ActionKind::STOP_AT_LINE, hold_brake, 0.0, margin, 1.0};
}
inline Action track_vmin(double a, double margin_kmh) {
  return {ActionKind::TRACK_VMIN, a, 0.0, margin_kmh, 1.0};
}

inline ScenarioConfig base(std::string name, Application app, std::vector<Interval> cycle) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.application = app;
  c.map = test_intersection_map();
  c.plan = test_intersection_plan(std::move(cycle));
  c.cfg.v_limit = 60.0 / glosa::kMpsToKmh;
  c.cfg.t_yellow = 3.0;
  return c;
}

} // namespace builtin_detail

/// Red-phase warning: launch from rest on red, warning comes on, the driver
/// eases off until it clears, then holds speed and crosses on green.
inline ScenarioConfig rlvw_1() {
  using namespace builtin_detail;
  using S = SignalState;
  auto c = base("rlvw-1", Application::RLVW, {{S::RED, 12}, {S::GREEN, 20}, {S::YELLOW, 3}});
  c.vehicle = {1, -40.0, 0.0};
  c.duration = 35.0;
  c.driver = DriverScript{
      "rlvw-1-driver",
      "launch",
      {{"launch", accelerate(1.5, 60), {{{when(ConditionKind::WARN_ON)}, "ease"}}},
       {"ease", brake(1.0), {{{when(ConditionKind::WARN_OFF)}, "hold"}}},
       {"hold", hold(), {}}},
      0.5};
  return c;
}

/// Green-phase warning: fast approach with little green left, the driver
/// stops for the red and goes on the next green.
inline ScenarioConfig rlvw_2() {
  using namespace builtin_detail;
  using S = SignalState;
  auto c = base("rlvw-2", Application::RLVW, {{S::GREEN, 4}, {S::YELLOW, 3}, {S::RED, 12}, {S::GREEN, 16}});
  c.vehicle = {1, -110.0, 50.0 / 3.6};
  c.duration = 35.0;
  c.driver = DriverScript{
      "rlvw-2-driver",
      "cruise",
      {{"cruise", hold(), {{{when(ConditionKind::WARN_ON), when_value(ConditionKind::DIST_BELOW, 60)}, "stop"}}},
       {"stop", stop_at_line(2.0, 2.0), {{{when(ConditionKind::STOPPED), when_light(S::GREEN)}, "go"}}},
       {"go", accelerate(2.0, 40), {}}},
      0.5};
  return c;
}

/// Green-phase warning at low speed: the driver speeds up to make the green.
inline ScenarioConfig rlvw_3() {
  using namespace builtin_detail;
  using S = SignalState;
  auto c = base("rlvw-3", Application::RLVW, {{S::GREEN, 12}, {S::YELLOW, 3}, {S::RED, 15}});
  c.vehicle = {1, -50.0, 0.0};
  c.duration = 30.0;
  c.driver = DriverScript{
      "rlvw-3-driver",
      "creep",
      {{"creep", accelerate(1.0, 8), {{{when(ConditionKind::WARN_ON), when_value(ConditionKind::TIME_AFTER, 1.0)}, "hurry"}}},
       {"hurry", accelerate(2.0, 22), {}}},
      0.5};
  return c;
}

/// GLOSA on red: RLVW state while approaching fast, stop and wait, then no
/// recommendation on green before pulling away.
inline ScenarioConfig glosa_1() {
  using namespace builtin_detail;
  using S = SignalState;
  auto c = base("glosa-1", Application::GLOSA, {{S::RED, 14}, {S::GREEN, 15}, {S::YELLOW, 3}});
  c.vehicle = {1, -60.0, 40.0 / 3.6};
  c.duration = 32.0;
  c.driver = DriverScript{
      "glosa-1-driver",
      "approach",
      {{"approach", hold(), {{{when_value(ConditionKind::DIST_BELOW, 35)}, "stop"}}},
       {"stop", stop_at_line(1.5, 2.0), {{{when(ConditionKind::STOPPED), when_light(S::GREEN)}, "go"}}},
       {"go", accelerate(2.0, 40), {}}},
      0.5};
  return c;
}

/// GLOSA speed advisory on green: slow approach, the advised minimum speed
/// is tracked and the vehicle crosses before the green ends.
inline ScenarioConfig glosa_2() {
  using namespace builtin_detail;
  using S = SignalState;
  auto c = base("glosa-2", Application::GLOSA, {{S::GREEN, 10}, {S::YELLOW, 3}, {S::RED, 17}});
  c.vehicle = {1, -50.0, 15.0 / 3.6};
  c.duration = 30.0;
  c.driver = DriverScript{
      "glosa-2-driver",
      "cruise",
      {{"cruise", hold(), {{{when_state(3)}, "track"}}},
       {"track", track_vmin(2.0, 6.0), {}}},
      0.5};
  return c;
}

inline std::vector<ScenarioConfig> builtin_scenarios() {
  return {rlvw_1(), rlvw_2(), rlvw_3(), glosa_1(), glosa_2()};
}

inline ScenarioConfig builtin_scenario(const std::string& name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  throw ConfigError("no builtin scenario named '" + name + "'");
}

} // namespace v2i::harness
