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
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "v2i/error.hpp"
#include "v2i/messages.hpp"
#include "v2i/vehicle.hpp"

namespace v2i::driver {

/// What a driver can see on a tick: the light, the in-vehicle display, and
/// their own motion.
struct Observation {
  double t = 0.0;
  SignalState light = SignalState::RED;
  double stop_bar_distance = 0.0; // m, negative once past the stop bar
  double v = 0.0;                 // m/s
  bool warn = false;
  int algo_state = 0;
  double v_min_kmh = -1.0;
  double v_max_kmh = -1.0;
  double time_to_green = -1.0;
};

enum class ActionKind {
  ACCELERATE,   // accel up to speed_kmh, then hold
  BRAKE,        // constant deceleration `accel`
  HOLD,         // zero command
  CRUISE,       // proportional control toward speed_kmh
  TRACK_VMIN,   // stay at least `margin` km/h above the advised minimum
  STOP_AT_LINE, // constant-deceleration stop `margin` m before the stop bar
};

struct Action {
  ActionKind kind = ActionKind::HOLD;
  double accel = 0.0;     // m/s^2 magnitude
  double speed_kmh = 0.0; // cap or target
  double margin = 0.0;
  double gain = 1.0; // 1/s for the proportional modes
};

enum class ConditionKind {
  WARN_ON,
  WARN_OFF,
  LIGHT_IS,
  DIST_BELOW, // stop bar distance < value
  SPEED_ABOVE_KMH,
  SPEED_BELOW_KMH,
  STOPPED,
  STATE_IS,
  TIME_AFTER,
};

struct Condition {
  ConditionKind kind = ConditionKind::WARN_ON;
  SignalState light = SignalState::GREEN; // LIGHT_IS
  double value = 0.0;                     // threshold for the numeric kinds
  int state = 0;                          // STATE_IS
};

struct Transition {
  std::vector<Condition> all_of;
  std::string to;
};

struct Mode {
  std::string name;
  Action action;
  std::vector<Transition> transitions;
};

/// Declarative driver: a set of modes, each with a total action and
/// transitions that fire on observations seen `reaction_latency` late.
struct DriverScript {
  std::string name;
  std::string initial;
  std::vector<Mode> modes;
  double reaction_latency = 0.5; // s
};

inline bool holds(const Condition& c, const Observation& o) {
  switch (c.kind) {
  case ConditionKind::WARN_ON: return o.warn;
  case ConditionKind::WARN_OFF: return !o.warn;
  case ConditionKind::LIGHT_IS: return o.light == c.light;
  case ConditionKind::DIST_BELOW: return o.stop_bar_distance < c.value;
  case ConditionKind::SPEED_ABOVE_KMH: return o.v * 3.6 > c.value;
  case ConditionKind::SPEED_BELOW_KMH: return o.v * 3.6 < c.value;
  case ConditionKind::STOPPED: return o.v == 0.0;
  case ConditionKind::STATE_IS: return o.algo_state == c.state;
  case ConditionKind::TIME_AFTER: return o.t >= c.value;
  }
  return false;
}

inline void validate(const DriverScript& script) {
  if (script.modes.empty()) throw ConfigError("driver script '" + script.name + "' has no modes");
  const auto known = [&](const std::string& name) {
    return std::any_of(script.modes.begin(), script.modes.end(),
                       [&](const Mode& m) { return m.name == name; });
  };
  if (!known(script.initial)) throw ConfigError("unknown initial mode '" + script.initial + "'");
  for (const auto& m : script.modes) {
    for (const auto& tr : m.transitions) {
      if (!known(tr.to)) throw ConfigError("transition to unknown mode '" + tr.to + "'");
    }
  }
  if (!(script.reaction_latency >= 0.0)) throw ConfigError("reaction latency must be >= 0");
}

/// Runtime state of a scripted driver. Deterministic: the same observation
/// stream always produces the same commands.
class Driver {
public:
  Driver(DriverScript script, double dt, VehicleLimits limits = {})
      : script_(std::move(script)), dt_(dt), limits_(limits) {
    validate(script_);
    mode_ = index_of(script_.initial);
    delay_ticks_ = static_cast<std::size_t>(std::llround(script_.reaction_latency / dt_));
  }

  ControlCommand command(const Observation& now) {
    history_.push_back(now);
    if (history_.size() > delay_ticks_) {
      const Observation& seen = history_.front();
      for (const auto& tr : current().transitions) {
        if (std::all_of(tr.all_of.begin(), tr.all_of.end(),
                        [&](const Condition& c) { return holds(c, seen); })) {
          mode_ = index_of(tr.to);
          break;
        }
      }
      history_.pop_front();
    }
    return acceleration_to_command(acceleration(current().action, now), limits_);
  }

  const std::string& mode() const { return current().name; }

private:
  const Mode& current() const { return script_.modes[mode_]; }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < script_.modes.size(); ++i) {
      if (script_.modes[i].name == name) return i;
    }
    throw ConfigError("unknown mode '" + name + "'");
  }

  double clamp_accel(double a) const { return std::clamp(a, -limits_.brake_max, limits_.accel_max); }

  double acceleration(const Action& act, const Observation& o) const {
    switch (act.kind) {
    case ActionKind::ACCELERATE: {
      const double cap = act.speed_kmh / 3.6;
      if (o.v >= cap) return 0.0;
      return clamp_accel(std::min(act.accel, (cap - o.v) / dt_));
    }
    case ActionKind::BRAKE:
      return clamp_accel(-act.accel);
    case ActionKind::HOLD:
      return 0.0;
    case ActionKind::CRUISE:
      return clamp_accel(act.gain * (act.speed_kmh / 3.6 - o.v));
    case ActionKind::TRACK_VMIN: {
      if (o.v_min_kmh < 0.0) return 0.0;
      const double target = (o.v_min_kmh + act.margin) / 3.6;
      if (o.v >= target) return 0.0;
      return clamp_accel(std::min(act.accel, act.gain * (target - o.v)));
    }
    case ActionKind::STOP_AT_LINE: {
      const double room = o.stop_bar_distance - act.margin;
      // The v^2/2d law only approaches rest asymptotically; finish the stop
      // once the holding brake can absorb the remaining speed in one tick.
      if (o.v <= act.accel * dt_) return clamp_accel(-act.accel);
      if (room <= 0.0) return -limits_.brake_max;
      return clamp_accel(-(o.v * o.v) / (2.0 * room));
    }
    }
    return 0.0;
  }

  DriverScript script_;
  double dt_;
  VehicleLimits limits_;
  std::size_t mode_ = 0;
  std::size_t delay_ticks_ = 0;
  std::deque<Observation> history_;
};

/// Feeds a whole observation stream through a fresh driver.
inline std::vector<ControlCommand> run_driver(const DriverScript& script,
                                              const std::vector<Observation>& feedback,
                                              double dt = 0.1, VehicleLimits limits = {}) {
  Driver drv(script, dt, limits);
  std::vector<ControlCommand> out;
  out.reserve(feedback.size());
  for (const auto& o : feedback) out.push_back(drv.command(o));
  return out;
}

} // namespace v2i::driver
