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
#include <optional>

#include "v2i/messages.hpp"

namespace v2i::rlvw {

inline constexpr double kDefaultSpeedEpsilon = 0.5; // m/s

struct Input {
  SignalState state = SignalState::RED;
  double d_int = 0.0;    // m to the stop bar
  double v_veh = 0.0;    // m/s
  double t_rem = 0.0;    // s left in the current phase
  double t_yellow = 0.0; // s, assumed yellow duration after a green
};

struct WarningStatus {
  bool warn = false;
  // Empty when the vehicle is slower than the speed epsilon.
  std::optional<double> time_to_arrival;

  friend bool operator==(const WarningStatus&, const WarningStatus&) = default;
};

inline void validate(const Input& in) {
  for (double x : {in.d_int, in.v_veh, in.t_rem, in.t_yellow}) {
    if (!std::isfinite(x) || x < 0.0) {
      throw InvalidInput("RLVW inputs must be finite and non-negative");
    }
  }
}

/// Red light violation predicate.
///   GREEN : d/v > t_rem + t_yellow
///   YELLOW: d/v > t_rem
///   RED   : d/v < t_rem
/// Strict comparisons; slower than `v_eps` never warns.
inline WarningStatus evaluate(const Input& in, double v_eps = kDefaultSpeedEpsilon) {
  validate(in);
  if (!(v_eps > 0.0)) throw InvalidInput("speed epsilon must be positive");
  if (in.v_veh < v_eps) return {};

  const double arrival = in.d_int / in.v_veh;
  bool warn = false;
  switch (in.state) {
  case SignalState::GREEN: warn = arrival > in.t_rem + in.t_yellow; break;
  case SignalState::YELLOW: warn = arrival > in.t_rem; break;
  case SignalState::RED: warn = arrival < in.t_rem; break;
  }
  return {warn, arrival};
}

/// Learns the yellow duration from consecutive SPaT frames of one signal
/// group: the last GREEN frame's end time is the yellow onset, so the yellow
/// length is the distance between the two end times. This survives dropped
/// frames as long as one frame of each phase arrives.
class YellowTracker {
public:
  explicit YellowTracker(double configured_yellow = 0.0) : configured_(configured_yellow) {}

  void observe(const PhaseStatus& phase) {
    switch (phase.event_state) {
    case SignalState::GREEN:
      green_end_ds_ = phase.min_end_time_ds;
      break;
    case SignalState::YELLOW:
      if (green_end_ds_) {
        observed_ = ds_until(phase.min_end_time_ds, *green_end_ds_) / 10.0;
      }
      break;
    case SignalState::RED:
      green_end_ds_.reset();
      break;
    }
  }

  /// Most recently observed yellow, else the configured constant (0 if none).
  double yellow_duration() const { return observed_.value_or(configured_); }
  bool has_observation() const { return observed_.has_value(); }

private:
  double configured_;
  std::optional<int> green_end_ds_;
  std::optional<double> observed_;
};

/// Optional N-tick debounce for displays. A change is only published after
/// the raw value has held for `ticks` consecutive evaluations.
class Debounce {
public:
  explicit Debounce(int ticks = 0) : ticks_(ticks) {}

  bool update(bool raw) {
    if (ticks_ <= 0) return shown_ = raw;
    if (raw == shown_) {
      streak_ = 0;
    } else if (++streak_ >= ticks_) {
      shown_ = raw;
      streak_ = 0;
    }
    return shown_;
  }

private:
  int ticks_;
  int streak_ = 0;
  bool shown_ = false;
};

} // namespace v2i::rlvw
