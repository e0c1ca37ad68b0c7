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

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "v2i/messages.hpp"

namespace v2i {

struct Interval {
  SignalState state = SignalState::RED;
  double duration = 0.0; // s

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct GroupCycle {
  std::vector<Interval> intervals;
  double cycle_offset = 0.0; // s added to time before reduction

  double cycle_length() const {
    double total = 0.0;
    for (const auto& iv : intervals) total += iv.duration;
    return total;
  }
  friend bool operator==(const GroupCycle&, const GroupCycle&) = default;
};

/// Fixed-time plan: one repeating cycle per signal group.
struct SignalPlan {
  std::int64_t intersection_id = 0;
  std::map<int, GroupCycle> groups;

  friend bool operator==(const SignalPlan&, const SignalPlan&) = default;
};

struct PhaseAt {
  SignalState state = SignalState::RED;
  double t_rem = 0.0; // s left in the current interval
};

inline void validate(const SignalPlan& plan) {
  if (plan.groups.empty()) throw ConfigError("signal plan has no groups");
  for (const auto& [group, cycle] : plan.groups) {
    const std::string tag = "group " + std::to_string(group) + ": ";
    bool has_green = false;
    bool has_red = false;
    for (const auto& iv : cycle.intervals) {
      if (!(iv.duration > 0.0) || !std::isfinite(iv.duration)) {
        throw ConfigError(tag + "interval durations must be positive");
      }
      has_green |= iv.state == SignalState::GREEN;
      has_red |= iv.state == SignalState::RED;
    }
    if (!has_green || !has_red) throw ConfigError(tag + "cycle needs a GREEN and a RED interval");
    const double len = cycle.cycle_length();
    if (!(len > 0.0) || len >= 3600.0) throw ConfigError(tag + "cycle length must be in (0, 3600)");
    if (!std::isfinite(cycle.cycle_offset)) throw ConfigError(tag + "cycle offset must be finite");
  }
}

/// Ground-truth phase of `group` at time `t`. Intervals are half-open, so a
/// boundary instant belongs to the interval being entered.
inline PhaseAt state_at(const SignalPlan& plan, int group, double t) {
  auto it = plan.groups.find(group);
  if (it == plan.groups.end()) throw UnknownGroup("signal group " + std::to_string(group));
  if (!(t >= 0.0)) throw InvalidInput("time must be non-negative");
  const auto& cycle = it->second;
  const double len = cycle.cycle_length();
  double x = std::fmod(t + cycle.cycle_offset, len);
  if (x < 0.0) x += len;

  double start = 0.0;
  for (const auto& iv : cycle.intervals) {
    const double end = start + iv.duration;
    if (x < end) return {iv.state, end - x};
    start = end;
  }
  // Only reachable through rounding at the very end of the cycle.
  return {cycle.intervals.front().state, cycle.intervals.front().duration};
}

/// SPaT broadcast for time `t`, stamped with `wall_clock_ds`.
inline SpatMessage spat_snapshot(const SignalPlan& plan, double t, int wall_clock_ds) {
  if (wall_clock_ds < 0 || wall_clock_ds >= kDeciSecondsPerHour) {
    throw OutOfRange("wall clock must lie in [0, 35999] deci-seconds");
  }
  SpatMessage spat;
  spat.intersection_id = plan.intersection_id;
  spat.timestamp_ds = wall_clock_ds;
  for (const auto& [group, cycle] : plan.groups) {
    const auto ph = state_at(plan, group, t);
    const auto rem_ds = static_cast<int>(std::llround(ph.t_rem * 10.0));
    spat.phases.push_back({group, ph.state, (wall_clock_ds + rem_ds) % kDeciSecondsPerHour});
  }
  return spat;
}

} // namespace v2i
