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
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "v2i/error.hpp"
#include "v2i/geo.hpp"

namespace v2i {

/// Deci-seconds since the top of the hour, J2735 style.
inline constexpr int kDeciSecondsPerHour = 36000;

enum class SignalState { GREEN, YELLOW, RED };

inline const char* to_string(SignalState s) {
  switch (s) {
  case SignalState::GREEN: return "GREEN";
  case SignalState::YELLOW: return "YELLOW";
  case SignalState::RED: return "RED";
  }
  return "?";
}

inline SignalState signal_state_from_string(std::string_view s) {
  if (s == "GREEN") return SignalState::GREEN;
  if (s == "YELLOW") return SignalState::YELLOW;
  if (s == "RED") return SignalState::RED;
  throw ParseError("unknown signal state '" + std::string(s) + "'");
}

/// Telemetry encoding of the light: GREEN=1, YELLOW=2, RED=3.
inline int light_code(SignalState s) { return static_cast<int>(s) + 1; }

inline SignalState light_from_code(int code) {
  if (code < 1 || code > 3) throw ParseError("light code out of range");
  return static_cast<SignalState>(code - 1);
}

struct LaneGeometry {
  int lane_id = 1;
  int signal_group = 1;
  // First node is the stop bar; the rest proceed away from the intersection.
  std::vector<geo::LocalOffset> nodes;

  friend bool operator==(const LaneGeometry&, const LaneGeometry&) = default;
};

struct MapMessage {
  std::int64_t intersection_id = 0;
  geo::GeoPoint reference;
  std::vector<LaneGeometry> lanes;

  const LaneGeometry* find_lane(int lane_id) const {
    auto it = std::find_if(lanes.begin(), lanes.end(),
                           [&](const LaneGeometry& l) { return l.lane_id == lane_id; });
    return it == lanes.end() ? nullptr : &*it;
  }
  friend bool operator==(const MapMessage&, const MapMessage&) = default;
};

struct PhaseStatus {
  int signal_group = 1;
  SignalState event_state = SignalState::RED;
  int min_end_time_ds = 0;

  friend bool operator==(const PhaseStatus&, const PhaseStatus&) = default;
};

struct SpatMessage {
  std::int64_t intersection_id = 0;
  int timestamp_ds = 0;
  std::vector<PhaseStatus> phases;

  const PhaseStatus* find_phase(int signal_group) const {
    auto it = std::find_if(phases.begin(), phases.end(), [&](const PhaseStatus& p) {
      return p.signal_group == signal_group;
    });
    return it == phases.end() ? nullptr : &*it;
  }
  friend bool operator==(const SpatMessage&, const SpatMessage&) = default;
};

using Message = std::variant<MapMessage, SpatMessage>;

inline constexpr double kMaxNodeOffsetCm = 100'000.0;

// ---------------------------------------------------------------------------
// Validation

inline void validate(const MapMessage& m) {
  if (!m.reference.valid()) throw InvariantViolation("MAP reference point out of range");
  if (m.lanes.empty()) throw InvariantViolation("MAP has no lanes");
  std::set<int> ids;
  for (const auto& lane : m.lanes) {
    if (lane.lane_id < 1) throw InvariantViolation("lane_id must be >= 1");
    if (lane.signal_group < 1) throw InvariantViolation("signal_group must be >= 1");
    if (!ids.insert(lane.lane_id).second) {
      throw InvariantViolation("duplicate lane_id " + std::to_string(lane.lane_id));
    }
    if (lane.nodes.size() < 2) {
      throw InvariantViolation("lane " + std::to_string(lane.lane_id) + " has fewer than 2 nodes");
    }
    for (const auto& n : lane.nodes) {
      if (!std::isfinite(n.east_cm) || !std::isfinite(n.north_cm) ||
          n.east_cm != std::trunc(n.east_cm) || n.north_cm != std::trunc(n.north_cm)) {
        throw InvariantViolation("node offsets must be whole centimeters");
      }
      if (std::hypot(n.east_cm, n.north_cm) >= kMaxNodeOffsetCm) {
        throw InvariantViolation("node offset is 1 km or more from the reference");
      }
    }
  }
}

inline void validate(const SpatMessage& s) {
  if (s.timestamp_ds < 0 || s.timestamp_ds >= kDeciSecondsPerHour) {
    throw InvariantViolation("timestamp_ds out of [0, 35999]");
  }
  std::set<int> groups;
  for (const auto& p : s.phases) {
    if (p.min_end_time_ds < 0 || p.min_end_time_ds >= kDeciSecondsPerHour) {
      throw InvariantViolation("min_end_time_ds " + std::to_string(p.min_end_time_ds) +
                               " out of [0, 35999]");
    }
    if (!groups.insert(p.signal_group).second) {
      throw InvariantViolation("duplicate signal_group " + std::to_string(p.signal_group));
    }
  }
}

inline void validate(const Message& m) {
  std::visit([](const auto& msg) { validate(msg); }, m);
}

/// Cross-message rule: every group a lane references must be present in the
/// SPaT of the same intersection.
inline void check_consistency(const MapMessage& map, const SpatMessage& spat) {
  if (map.intersection_id != spat.intersection_id) return;
  for (const auto& lane : map.lanes) {
    if (!spat.find_phase(lane.signal_group)) {
      throw InvariantViolation("signal_group " + std::to_string(lane.signal_group) +
                               " missing from SPaT");
    }
  }
}

// ---------------------------------------------------------------------------
// Canonical codec. nlohmann::json objects are key-sorted and dump() without an
// indent emits no whitespace, which makes the text canonical.

namespace codec_detail {

using nlohmann::json;

inline json to_json(const MapMessage& m) {
  json lanes = json::array();
  for (const auto& lane : m.lanes) {
    json nodes = json::array();
    for (const auto& n : lane.nodes) {
      nodes.push_back({{"east_cm", static_cast<std::int64_t>(n.east_cm)},
                       {"north_cm", static_cast<std::int64_t>(n.north_cm)}});
    }
    lanes.push_back(
        {{"lane_id", lane.lane_id}, {"signal_group", lane.signal_group}, {"nodes", nodes}});
  }
  return {{"type", "MAP"},
          {"intersection_id", m.intersection_id},
          {"reference", {{"lat", m.reference.lat}, {"lon", m.reference.lon}}},
          {"lanes", lanes}};
}

inline json to_json(const SpatMessage& s) {
  json phases = json::array();
  for (const auto& p : s.phases) {
    phases.push_back({{"signal_group", p.signal_group},
                      {"event_state", to_string(p.event_state)},
                      {"min_end_time_ds", p.min_end_time_ds}});
  }
  return {{"type", "SPAT"},
          {"intersection_id", s.intersection_id},
          {"timestamp_ds", s.timestamp_ds},
          {"phases", phases}};
}

inline const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) throw ParseError("expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

inline void expect_keys(const json& obj, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ParseError("expected an object");
  if (obj.size() != keys.size()) throw ParseError("unexpected fields in object");
  for (const char* k : keys) field(obj, k);
}

inline std::int64_t as_int(const json& v, const char* what) {
  if (!v.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return v.get<std::int64_t>();
}

inline int as_int32(const json& v, const char* what) {
  const auto x = as_int(v, what);
  if (x < INT32_MIN || x > INT32_MAX) throw ParseError(std::string(what) + " overflows");
  return static_cast<int>(x);
}

inline double as_double(const json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + " must be a number");
  return v.get<double>();
}

inline const json& as_array(const json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + " must be an array");
  return v;
}

inline MapMessage map_from_json(const json& j) {
  expect_keys(j, {"type", "intersection_id", "reference", "lanes"});
  MapMessage m;
  m.intersection_id = as_int(j["intersection_id"], "intersection_id");
  const auto& ref = field(j, "reference");
  expect_keys(ref, {"lat", "lon"});
  m.reference = {as_double(ref["lat"], "lat"), as_double(ref["lon"], "lon")};
  for (const auto& jl : as_array(j["lanes"], "lanes")) {
    expect_keys(jl, {"lane_id", "signal_group", "nodes"});
    LaneGeometry lane;
    lane.lane_id = as_int32(jl["lane_id"], "lane_id");
    lane.signal_group = as_int32(jl["signal_group"], "signal_group");
    for (const auto& jn : as_array(jl["nodes"], "nodes")) {
      expect_keys(jn, {"east_cm", "north_cm"});
      lane.nodes.push_back({static_cast<double>(as_int(jn["east_cm"], "east_cm")),
                            static_cast<double>(as_int(jn["north_cm"], "north_cm"))});
    }
    m.lanes.push_back(std::move(lane));
  }
  return m;
}

inline SpatMessage spat_from_json(const json& j) {
  expect_keys(j, {"type", "intersection_id", "timestamp_ds", "phases"});
  SpatMessage s;
  s.intersection_id = as_int(j["intersection_id"], "intersection_id");
  s.timestamp_ds = as_int32(j["timestamp_ds"], "timestamp_ds");
  for (const auto& jp : as_array(j["phases"], "phases")) {
    expect_keys(jp, {"signal_group", "event_state", "min_end_time_ds"});
    PhaseStatus p;
    p.signal_group = as_int32(jp["signal_group"], "signal_group");
    const auto& st = jp["event_state"];
    if (!st.is_string()) throw ParseError("event_state must be a string");
    p.event_state = signal_state_from_string(st.get<std::string>());
    p.min_end_time_ds = as_int32(jp["min_end_time_ds"], "min_end_time_ds");
    s.phases.push_back(p);
  }
  return s;
}

} // namespace codec_detail

/// Canonical bytes for a message. Structurally equal messages encode to
/// identical bytes.
inline std::string encode(const Message& msg) {
  validate(msg);
  return std::visit([](const auto& m) { return codec_detail::to_json(m).dump(); }, msg);
}

inline Message decode(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  const auto& type = codec_detail::field(j, "type");
  if (!type.is_string()) throw ParseError("type must be a string");
  Message out;
  if (type == "MAP") {
    out = codec_detail::map_from_json(j);
  } else if (type == "SPAT") {
    out = codec_detail::spat_from_json(j);
  } else {
    throw ParseError("unknown message type " + type.dump());
  }
  validate(out);
  return out;
}

// ---------------------------------------------------------------------------
// SPaT time arithmetic

/// Deci-seconds from `now` forward to `later`, wrapping into the next hour.
inline int ds_until(int later, int now) {
  return ((later - now) % kDeciSecondsPerHour + kDeciSecondsPerHour) % kDeciSecondsPerHour;
}

/// Seconds until the phase's minimum end time, in [0, 3600).
inline double remaining_time(int min_end_time_ds, int now_ds) {
  if (min_end_time_ds < 0 || min_end_time_ds >= kDeciSecondsPerHour || now_ds < 0 ||
      now_ds >= kDeciSecondsPerHour) {
    throw OutOfRange("deci-second values must lie in [0, 35999]");
  }
  return ds_until(min_end_time_ds, now_ds) / 10.0;
}

inline double remaining_time(const PhaseStatus& phase, int now_ds) {
  return remaining_time(phase.min_end_time_ds, now_ds);
}

} // namespace v2i
