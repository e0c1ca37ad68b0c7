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

#include <cstdio>
#include <string>

#include "v2i/glosa.hpp"
#include "v2i/messages.hpp"

namespace v2i::harness {

struct RlvwStatus {
  int matched_lane = 0;
  int phase_group = 0;
  SignalState phase_state = SignalState::RED;
  double remaining_time = 0.0; // s
  double distance = 0.0;       // m
  double speed_kmh = 0.0;
  bool warn = false;
};

struct GlosaStatus {
  double distance = 0.0; // m
  glosa::Advisory advisory;
  SignalState light = SignalState::RED;
};

namespace ui_detail {
inline std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}
// -1 sentinels print as a bare "-1", never as "-1.0".
inline std::string or_sentinel(double x, int decimals) {
  return x == glosa::kNotApplicable ? std::string("-1") : fixed(x, decimals);
}
} // namespace ui_detail

/// Terminal status block of the red light violation warning application.
inline std::string render(const RlvwStatus& s) {
  using ui_detail::fixed;
  std::string out;
  out += "Matched Lane: " + std::to_string(s.matched_lane) + "\n";
  out += "Phase Group Number: " + std::to_string(s.phase_group) + "\n";
  out += std::string("Phase State: ") + to_string(s.phase_state) + "\n";
  out += "Remaining Time: " + fixed(s.remaining_time, 1) + " sec\n";
  out += "Distance to Intersection: " + fixed(s.distance, 1) + " m\n";
  out += "Vehicle Speed: " + fixed(s.speed_kmh, 2) + " km/h\n";
  out += "Warning Status: " + std::string(s.warn ? "1" : "0") + "\n";
  return out;
}

/// Terminal status block of the speed advisory application. Speeds round to
/// 0.1 km/h here and nowhere else.
inline std::string render(const GlosaStatus& s) {
  using ui_detail::fixed;
  using ui_detail::or_sentinel;
  std::string out;
  out += "Distance: " + fixed(s.distance, 2) + " m\n";
  out += "Approaching State: " + std::to_string(s.advisory.state_code()) + "\n";
  out += "Traffic Light State: " + std::to_string(light_code(s.light)) + "\n";
  out += "Min Recommended Speed: " + or_sentinel(s.advisory.v_min, 1) + " km/h\n";
  out += "Max Recommended Speed: " + or_sentinel(s.advisory.v_max, 1) + " km/h\n";
  out += "Time to Green: " + or_sentinel(s.advisory.time_to_green, 1) + " sec\n";
  return out;
}

} // namespace v2i::harness
