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
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "v2i/v2i.hpp"

namespace v2i::testing {

inline std::string source_path(const std::string& rel) { return std::string(V2I_SOURCE_DIR) + "/" + rel; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline SignalState random_state(Rng& rng) { return static_cast<SignalState>(uniform_int(rng, 0, 2)); }

// Random valid MAP. Node offsets are whole centimeters on a coarse grid so
// that exact distance ties between lanes happen regularly.
inline MapMessage random_map(Rng& rng, int max_lanes = 8, int max_nodes = 20, int grid_cm = 0) {
  MapMessage m;
  m.intersection_id = uniform_int(rng, 1, 65535);
  m.reference = {uniform(rng, -60.0, 60.0), uniform(rng, -179.0, 179.0)};
  const int lanes = uniform_int(rng, 1, max_lanes);
  std::vector<int> ids;
  for (int i = 1; i <= 3 * max_lanes; ++i) ids.push_back(i);
  std::shuffle(ids.begin(), ids.end(), rng);
  for (int l = 0; l < lanes; ++l) {
    LaneGeometry lane{ids[l], uniform_int(rng, 1, 16), {}};
    const int nodes = uniform_int(rng, 2, max_nodes);
    for (int n = 0; n < nodes; ++n) {
      double e = uniform_int(rng, -20000, 20000);
      double no = uniform_int(rng, -20000, 20000);
      if (grid_cm > 0) {
        e = std::round(e / grid_cm) * grid_cm;
        no = std::round(no / grid_cm) * grid_cm;
      }
      lane.nodes.push_back({e, no});
    }
    m.lanes.push_back(lane);
  }
  return m;
}

inline SpatMessage random_spat(Rng& rng) {
  SpatMessage s;
  s.intersection_id = uniform_int(rng, 1, 65535);
  s.timestamp_ds = uniform_int(rng, 0, 35999);
  std::vector<int> groups;
  for (int g = 1; g <= 32; ++g) groups.push_back(g);
  std::shuffle(groups.begin(), groups.end(), rng);
  const int n = uniform_int(rng, 1, 16);
  for (int i = 0; i < n; ++i) s.phases.push_back({groups[i], random_state(rng), uniform_int(rng, 0, 35999)});
  return s;
}

// Exhaustive nearest node: every (distance, lane_id, node) tuple, sorted.
struct BruteMatch {
  bool found = false;
  int lane_id = 0;
  std::size_t node = 0;
};

inline BruteMatch brute_force_match(const MapMessage& map, const geo::GeoPoint& pos, double max_lateral) {
  const auto p = geo::to_local(map.reference, pos);
  std::vector<std::tuple<double, int, std::size_t>> all;
  for (const auto& lane : map.lanes) {
    for (std::size_t i = 0; i < lane.nodes.size(); ++i) {
      const double de = (p.east_cm - lane.nodes[i].east_cm) / 100.0;
      const double dn = (p.north_cm - lane.nodes[i].north_cm) / 100.0;
      all.emplace_back(std::sqrt(de * de + dn * dn), lane.lane_id, i);
    }
  }
  std::sort(all.begin(), all.end());
  if (all.empty() || std::get<0>(all.front()) > max_lateral + 1e-9) return {};
  return {true, std::get<1>(all.front()), std::get<2>(all.front())};
}

// Constant-speed arrival against an explicit phase timeline. The timeline is
// the current phase for t_rem, then the rest of a plan whose yellow is
// t_yellow and whose red outlasts any arrival in range.
inline bool rlvw_oracle(const rlvw::Input& in, double v_eps = rlvw::kDefaultSpeedEpsilon) {
  if (in.v_veh < v_eps) return false;
  constexpr double kLong = 1e9;
  std::vector<Interval> timeline;
  switch (in.state) {
  case SignalState::GREEN:
    timeline = {{SignalState::GREEN, in.t_rem}, {SignalState::YELLOW, in.t_yellow}, {SignalState::RED, kLong}};
    break;
  case SignalState::YELLOW:
    timeline = {{SignalState::YELLOW, in.t_rem}, {SignalState::RED, kLong}};
    break;
  case SignalState::RED:
    timeline = {{SignalState::RED, in.t_rem}, {SignalState::GREEN, kLong}};
    break;
  }
  const double arrival = in.d_int / in.v_veh;
  double start = 0.0;
  for (const auto& iv : timeline) {
    const double end = start + iv.duration;
    if (iv.state == SignalState::RED && arrival > start && arrival < end) return true;
    start = end;
  }
  return false;
}

inline rlvw::Input random_rlvw_input(Rng& rng) {
  rlvw::Input in{random_state(rng), uniform(rng, 0.0, 300.0), uniform(rng, 0.5, 30.0),
                 uniform(rng, 0.0, 60.0), uniform(rng, 0.0, 6.0)};
  if (in.d_int == 0.0) in.d_int = 300.0;
  // Put a share of the cases exactly on the comparison boundary.
  if (uniform_int(rng, 0, 19) == 0) {
    const double arrival = in.d_int / in.v_veh;
    if (in.state == SignalState::GREEN && arrival >= in.t_yellow) {
      in.t_rem = arrival - in.t_yellow;
    } else if (in.state != SignalState::GREEN) {
      in.t_rem = arrival;
    }
  }
  return in;
}

// Log helpers.
inline int first_index(const harness::TimeSeriesLog& log, auto pred) {
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    if (pred(log.rows[i])) return static_cast<int>(i);
  }
  return -1;
}

inline int crossing_index(const harness::TimeSeriesLog& log) {
  bool approached = false;
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    if (log.rows[i].d_int > 0.0) approached = true;
    if (approached && log.rows[i].d_int <= 0.0) return static_cast<int>(i);
  }
  return -1;
}

inline bool is_subsequence(const std::vector<std::string>& needle, const std::vector<std::string>& hay) {
  std::size_t j = 0;
  for (const auto& h : hay) {
    if (j < needle.size() && h == needle[j]) ++j;
  }
  return j == needle.size();
}

// Ticks at which the receiver holds a usable picture: some MAP has arrived,
// the newest SPaT is younger than the freshness window, and the phase that
// frame announced for the vehicle's group has not yet ended. Computed from
// the plan, independently of the receiver.
inline std::vector<bool> fresh_ticks(const harness::ScenarioConfig& cfg, const harness::RunResult& res) {
  const int group = cfg.map.find_lane(cfg.vehicle.lane_id)->signal_group;
  std::vector<bool> fresh(res.log.rows.size(), false);
  bool have_map = false;
  int last = -1;
  for (std::size_t k = 0; k < fresh.size(); ++k) {
    have_map = have_map || res.map_delivered[k];
    if (res.spat_delivered[k]) last = static_cast<int>(k);
    if (!have_map || last < 0) continue;
    const int age = static_cast<int>(k) - last;
    const double ends_in = state_at(cfg.plan, group, last / 10.0).t_rem;
    fresh[k] = age < harness::kFreshnessWindowDs && (age == 0 || age / 10.0 < ends_in - 1e-9);
  }
  return fresh;
}

inline bool logs_identical(const harness::TimeSeriesLog& a, const harness::TimeSeriesLog& b) {
  return harness::to_csv(a) == harness::to_csv(b);
}

} // namespace v2i::testing
