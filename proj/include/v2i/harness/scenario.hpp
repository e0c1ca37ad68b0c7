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

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "v2i/driver.hpp"
#include "v2i/glosa.hpp"
#include "v2i/harness/log.hpp"
#include "v2i/harness/transport.hpp"
#include "v2i/messages.hpp"
#include "v2i/signal_plan.hpp"
#include "v2i/vehicle.hpp"

namespace v2i::harness {

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr double kTickSeconds = 0.1;

struct InitialVehicle {
  int lane_id = 1;
  double s = -100.0; // m, negative before the stop bar
  double v = 0.0;    // m/s
};

struct ScenarioConfig {
  std::string name;
  Application application = Application::RLVW;
  MapMessage map;
  SignalPlan plan;
  InitialVehicle vehicle;
  std::optional<driver::DriverScript> driver; // empty = HUMAN
  glosa::Config cfg;
  int debounce_ticks = 0;
  double duration = 30.0; // s
  TransportKind transport = TransportKind::INPROC;
  int start_clock_ds = 0; // wall clock at t = 0

  bool human() const { return !driver.has_value(); }
  int ticks() const { return static_cast<int>(std::llround(duration / kTickSeconds)); }
};

inline void validate(const ScenarioConfig& c) {
  try {
    validate(c.map);
  } catch (const InvariantViolation& e) {
    throw ConfigError(std::string("map: ") + e.what());
  }
  validate(c.plan);
  const LaneGeometry* lane = c.map.find_lane(c.vehicle.lane_id);
  if (!lane) throw ConfigError("vehicle lane " + std::to_string(c.vehicle.lane_id) + " not in map");
  for (const auto& l : c.map.lanes) {
    if (!c.plan.groups.count(l.signal_group)) {
      throw ConfigError("signal group " + std::to_string(l.signal_group) + " has no plan");
    }
  }
  if (c.plan.intersection_id != c.map.intersection_id) {
    throw ConfigError("plan and map intersection ids differ");
  }
  if (!(c.vehicle.s <= 0.0) || -c.vehicle.s > lane_length(*lane)) {
    throw ConfigError("initial position is outside the lane");
  }
  if (!(c.vehicle.v >= 0.0)) throw ConfigError("initial speed must be >= 0");
  double longest = 0.0;
  for (const auto& [g, cycle] : c.plan.groups) longest = std::max(longest, cycle.cycle_length());
  if (!(c.duration >= longest)) throw ConfigError("duration must cover one signal cycle");
  if (c.start_clock_ds < 0 || c.start_clock_ds >= kDeciSecondsPerHour) {
    throw ConfigError("start_clock_ds out of range");
  }
  try {
    glosa::validate(c.cfg);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  if (c.driver) driver::validate(*c.driver);
}

// ---------------------------------------------------------------------------
// Scenario file format (JSON, schema_version 1):
//
// {
//   "schema_version": 1,
//   "name": "rlvw-1",
//   "application": "RLVW" | "GLOSA",
//   "map": <canonical MAP message>,
//   "plan": {"intersection_id": int,
//            "groups": [{"signal_group": int, "cycle_offset": s,
//                        "intervals": [{"state": "GREEN", "duration": s}, ...]}]},
//   "vehicle": {"lane_id": int, "s": m, "v": m/s},
//   "driver": "HUMAN" | {"name", "initial", "reaction_latency",
//                        "modes": [{"name", "action": {...}, "transitions": [...]}]},
//   "algorithms": {"v_limit_kmh", "v_eps", "d_near", "t_yellow",
//                  "include_yellow_in_window", "debounce_ticks"},
//   "duration": s,
//   "transport": "INPROC" | "UDP",
//   "start_clock_ds": int
// }

namespace scenario_detail {

using nlohmann::json;

inline const char* to_string(driver::ActionKind k) {
  using K = driver::ActionKind;
  switch (k) {
  case K::ACCELERATE: return "ACCELERATE";
  case K::BRAKE: return "BRAKE";
  case K::HOLD: return "HOLD";
  case K::CRUISE: return "CRUISE";
  case K::TRACK_VMIN: return "TRACK_VMIN";
  case K::STOP_AT_LINE: return "STOP_AT_LINE";
  }
  return "?";
}

inline driver::ActionKind action_kind(const std::string& s) {
  using K = driver::ActionKind;
  for (auto k : {K::ACCELERATE, K::BRAKE, K::HOLD, K::CRUISE, K::TRACK_VMIN, K::STOP_AT_LINE}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown action kind '" + s + "'");
}

inline const char* to_string(driver::ConditionKind k) {
  using K = driver::ConditionKind;
  switch (k) {
  case K::WARN_ON: return "WARN_ON";
  case K::WARN_OFF: return "WARN_OFF";
  case K::LIGHT_IS: return "LIGHT_IS";
  case K::DIST_BELOW: return "DIST_BELOW";
  case K::SPEED_ABOVE_KMH: return "SPEED_ABOVE_KMH";
  case K::SPEED_BELOW_KMH: return "SPEED_BELOW_KMH";
  case K::STOPPED: return "STOPPED";
  case K::STATE_IS: return "STATE_IS";
  case K::TIME_AFTER: return "TIME_AFTER";
  }
  return "?";
}

inline driver::ConditionKind condition_kind(const std::string& s) {
  using K = driver::ConditionKind;
  for (auto k : {K::WARN_ON, K::WARN_OFF, K::LIGHT_IS, K::DIST_BELOW, K::SPEED_ABOVE_KMH,
                 K::SPEED_BELOW_KMH, K::STOPPED, K::STATE_IS, K::TIME_AFTER}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown condition kind '" + s + "'");
}

inline json condition_to_json(const driver::Condition& c) {
  using K = driver::ConditionKind;
  json j{{"kind", to_string(c.kind)}};
  switch (c.kind) {
  case K::LIGHT_IS: j["light"] = v2i::to_string(c.light); break;
  case K::STATE_IS: j["state"] = c.state; break;
  case K::DIST_BELOW:
  case K::SPEED_ABOVE_KMH:
  case K::SPEED_BELOW_KMH:
  case K::TIME_AFTER: j["value"] = c.value; break;
  default: break;
  }
  return j;
}

inline driver::Condition condition_from_json(const json& j) {
  driver::Condition c;
  c.kind = condition_kind(j.at("kind").get<std::string>());
  if (j.contains("light")) c.light = signal_state_from_string(j.at("light").get<std::string>());
  c.state = j.value("state", 0);
  c.value = j.value("value", 0.0);
  return c;
}

inline json driver_to_json(const std::optional<driver::DriverScript>& d) {
  if (!d) return "HUMAN";
  json modes = json::array();
  for (const auto& m : d->modes) {
    json transitions = json::array();
    for (const auto& tr : m.transitions) {
      json when = json::array();
      for (const auto& c : tr.all_of) when.push_back(condition_to_json(c));
      transitions.push_back({{"when", when}, {"to", tr.to}});
    }
    json action{{"kind", to_string(m.action.kind)},
                {"accel", m.action.accel},
                {"speed_kmh", m.action.speed_kmh},
                {"margin", m.action.margin},
                {"gain", m.action.gain}};
    modes.push_back({{"name", m.name}, {"action", action}, {"transitions", transitions}});
  }
  return {{"name", d->name},
          {"initial", d->initial},
          {"reaction_latency", d->reaction_latency},
          {"modes", modes}};
}

inline std::optional<driver::DriverScript> driver_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "HUMAN") throw ConfigError("driver must be HUMAN or a script");
    return std::nullopt;
  }
  driver::DriverScript d;
  d.name = j.at("name").get<std::string>();
  d.initial = j.at("initial").get<std::string>();
  d.reaction_latency = j.value("reaction_latency", 0.5);
  for (const auto& jm : j.at("modes")) {
    driver::Mode m;
    m.name = jm.at("name").get<std::string>();
    const auto& ja = jm.at("action");
    m.action.kind = action_kind(ja.at("kind").get<std::string>());
    m.action.accel = ja.value("accel", 0.0);
    m.action.speed_kmh = ja.value("speed_kmh", 0.0);
    m.action.margin = ja.value("margin", 0.0);
    m.action.gain = ja.value("gain", 1.0);
    for (const auto& jt : jm.value("transitions", json::array())) {
      driver::Transition tr;
      tr.to = jt.at("to").get<std::string>();
      for (const auto& jc : jt.at("when")) tr.all_of.push_back(condition_from_json(jc));
      m.transitions.push_back(std::move(tr));
    }
    d.modes.push_back(std::move(m));
  }
  return d;
}

inline json plan_to_json(const SignalPlan& p) {
  json groups = json::array();
  for (const auto& [g, cycle] : p.groups) {
    json intervals = json::array();
    for (const auto& iv : cycle.intervals) {
      intervals.push_back({{"state", v2i::to_string(iv.state)}, {"duration", iv.duration}});
    }
    groups.push_back(
        {{"signal_group", g}, {"cycle_offset", cycle.cycle_offset}, {"intervals", intervals}});
  }
  return {{"intersection_id", p.intersection_id}, {"groups", groups}};
}

inline SignalPlan plan_from_json(const json& j) {
  SignalPlan p;
  p.intersection_id = j.at("intersection_id").get<std::int64_t>();
  for (const auto& jg : j.at("groups")) {
    GroupCycle cycle;
    cycle.cycle_offset = jg.value("cycle_offset", 0.0);
    for (const auto& ji : jg.at("intervals")) {
      cycle.intervals.push_back({signal_state_from_string(ji.at("state").get<std::string>()),
                                 ji.at("duration").get<double>()});
    }
    const int g = jg.at("signal_group").get<int>();
    if (!p.groups.emplace(g, std::move(cycle)).second) {
      throw ConfigError("duplicate signal group " + std::to_string(g) + " in plan");
    }
  }
  return p;
}

} // namespace scenario_detail

namespace scenario_detail {
// km/h text that reads back to exactly `v_mps` whenever a short form exists.
inline double kmh_for_file(double v_mps) {
  const double kmh = v_mps * glosa::kMpsToKmh;
  const double rounded = std::round(kmh * 1e9) / 1e9;
  return rounded / glosa::kMpsToKmh == v_mps ? rounded : kmh;
}
} // namespace scenario_detail

inline std::string scenario_to_json(const ScenarioConfig& c) {
  using scenario_detail::json;
  const json j{
      {"schema_version", kScenarioSchemaVersion},
      {"name", c.name},
      {"application", to_string(c.application)},
      {"map", json::parse(encode(c.map))},
      {"plan", scenario_detail::plan_to_json(c.plan)},
      {"vehicle", {{"lane_id", c.vehicle.lane_id}, {"s", c.vehicle.s}, {"v", c.vehicle.v}}},
      {"driver", scenario_detail::driver_to_json(c.driver)},
      {"algorithms",
       {{"v_limit_kmh", scenario_detail::kmh_for_file(c.cfg.v_limit)},
        {"v_eps", c.cfg.v_eps},
        {"d_near", c.cfg.d_near},
        {"t_yellow", c.cfg.t_yellow},
        {"include_yellow_in_window", c.cfg.include_yellow_in_window},
        {"debounce_ticks", c.debounce_ticks}}},
      {"duration", c.duration},
      {"transport", c.transport == TransportKind::UDP ? "UDP" : "INPROC"},
      {"start_clock_ds", c.start_clock_ds},
  };
  return j.dump(2) + "\n";
}

inline ScenarioConfig scenario_from_json(std::string_view text) {
  using scenario_detail::json;
  ScenarioConfig c;
  try {
    const json j = json::parse(text.begin(), text.end());
    const int version = j.at("schema_version").get<int>();
    if (version != kScenarioSchemaVersion) {
      throw ConfigError("unsupported scenario schema_version " + std::to_string(version));
    }
    c.name = j.at("name").get<std::string>();
    c.application = application_from_string(j.at("application").get<std::string>());
    c.map = std::get<MapMessage>(decode(j.at("map").dump()));
    c.plan = scenario_detail::plan_from_json(j.at("plan"));
    const auto& jv = j.at("vehicle");
    c.vehicle = {jv.at("lane_id").get<int>(), jv.at("s").get<double>(), jv.at("v").get<double>()};
    c.driver = scenario_detail::driver_from_json(j.at("driver"));
    const auto& ja = j.at("algorithms");
    c.cfg.v_limit = ja.at("v_limit_kmh").get<double>() / glosa::kMpsToKmh;
    c.cfg.v_eps = ja.value("v_eps", rlvw::kDefaultSpeedEpsilon);
    c.cfg.d_near = ja.value("d_near", 10.0);
    c.cfg.t_yellow = ja.value("t_yellow", 0.0);
    c.cfg.include_yellow_in_window = ja.value("include_yellow_in_window", false);
    c.debounce_ticks = ja.value("debounce_ticks", 0);
    c.duration = j.at("duration").get<double>();
    const auto transport = j.value("transport", std::string("INPROC"));
    if (transport == "UDP") {
      c.transport = TransportKind::UDP;
    } else if (transport == "INPROC") {
      c.transport = TransportKind::INPROC;
    } else {
      throw ConfigError("unknown transport '" + transport + "'");
    }
    c.start_clock_ds = j.value("start_clock_ds", 0);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario file: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(std::string("scenario file: ") + e.what());
  } catch (const InvariantViolation& e) {
    throw ConfigError(std::string("scenario file: ") + e.what());
  } catch (const std::bad_variant_access&) {
    throw ConfigError("scenario file: map must be a MAP message");
  }
  validate(c);
  return c;
}

} // namespace v2i::harness
