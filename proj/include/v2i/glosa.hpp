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

#include "v2i/messages.hpp"
#include "v2i/rlvw.hpp"

namespace v2i::glosa {

inline constexpr double kNotApplicable = -1.0;
inline constexpr double kMpsToKmh = 3.6;

enum class ApproachState : int {
  WAITING_FOR_GREEN = 1,
  RLVW = 2,
  SPEED_ADVISORY = 3,
  NO_RECOMMENDATION = 4,
};

inline const char* to_string(ApproachState s) {
  switch (s) {
  case ApproachState::WAITING_FOR_GREEN: return "Waiting for Green";
  case ApproachState::RLVW: return "RLVW";
  case ApproachState::SPEED_ADVISORY: return "Speed Advisory";
  case ApproachState::NO_RECOMMENDATION: return "No Recommendation";
  }
  return "?";
}

struct Config {
  double v_limit = 60.0 / kMpsToKmh; // m/s
  double v_eps = rlvw::kDefaultSpeedEpsilon;
  double d_near = 10.0;  // m
  double t_yellow = 0.0; // s
  // Count the yellow interval as passable time when computing v_min on GREEN.
  bool include_yellow_in_window = false;
};

/// Speeds are km/h at full precision; round only for display. Fields that do
/// not apply to the current state hold -1.
struct Advisory {
  ApproachState approaching_state = ApproachState::NO_RECOMMENDATION;
  double v_min = kNotApplicable;         // km/h
  double v_max = kNotApplicable;         // km/h
  double time_to_green = kNotApplicable; // s
  bool warn = false;

  int state_code() const { return static_cast<int>(approaching_state); }
  friend bool operator==(const Advisory&, const Advisory&) = default;
};

inline void validate(const Config& cfg) {
  if (!(cfg.v_limit > 0.0) || !(cfg.v_eps > 0.0) || !(cfg.d_near > 0.0) ||
      !std::isfinite(cfg.v_limit) || !std::isfinite(cfg.d_near) ||
      !std::isfinite(cfg.t_yellow) || cfg.t_yellow < 0.0) {
    throw InvalidInput("GLOSA config values must be positive and finite");
  }
}

namespace detail {

// d / t, treating an empty distance as needing no speed and an expired
// window as needing infinite speed.
inline double required_speed(double d_int, double window) {
  if (d_int == 0.0) return 0.0;
  if (window == 0.0) return INFINITY;
  return d_int / window;
}

inline Advisory advise_moving_through(SignalState state, double t_rem, double d_int, double v_veh,
                                      const Config& cfg) {
  double window = t_rem;
  if (state == SignalState::GREEN && cfg.include_yellow_in_window) window += cfg.t_yellow;
  const double v_req = required_speed(d_int, window);
  if (v_req <= cfg.v_limit) {
    return {ApproachState::SPEED_ADVISORY, v_req * kMpsToKmh, cfg.v_limit * kMpsToKmh,
            kNotApplicable, false};
  }
  // The green (or yellow) cannot be made legally; fall back to the warning.
  const auto w = rlvw::evaluate({state, d_int, v_veh, t_rem, cfg.t_yellow}, cfg.v_eps);
  if (w.warn) return {ApproachState::RLVW, kNotApplicable, kNotApplicable, kNotApplicable, true};
  return {};
}

} // namespace detail

/// GLOSA approach-state machine, evaluated once per tick from scratch.
inline Advisory advise(SignalState state, double t_rem, double d_int, double v_veh,
                       const Config& cfg) {
  validate(cfg);
  for (double x : {t_rem, d_int, v_veh}) {
    if (!std::isfinite(x) || x < 0.0) throw InvalidInput("GLOSA inputs must be finite and >= 0");
  }
  const bool stopped_near = v_veh < cfg.v_eps && d_int <= cfg.d_near;

  switch (state) {
  case SignalState::RED: {
    if (stopped_near) {
      return {ApproachState::WAITING_FOR_GREEN, kNotApplicable, kNotApplicable, t_rem, false};
    }
    const auto w = rlvw::evaluate({state, d_int, v_veh, t_rem, cfg.t_yellow}, cfg.v_eps);
    if (w.warn) return {ApproachState::RLVW, kNotApplicable, kNotApplicable, t_rem, true};
    // Slow enough to arrive no earlier than the green onset.
    const double v_max = std::min(detail::required_speed(d_int, t_rem), cfg.v_limit);
    return {ApproachState::SPEED_ADVISORY, kNotApplicable, v_max * kMpsToKmh, t_rem, false};
  }
  case SignalState::GREEN:
  case SignalState::YELLOW:
    if (stopped_near) return {};
    return detail::advise_moving_through(state, t_rem, d_int, v_veh, cfg);
  }
  return {};
}

} // namespace v2i::glosa
