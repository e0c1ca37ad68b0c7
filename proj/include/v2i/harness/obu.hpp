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

#include <map>
#include <optional>
#include <string_view>

#include "v2i/glosa.hpp"
#include "v2i/harness/log.hpp"
#include "v2i/lane_matcher.hpp"
#include "v2i/messages.hpp"
#include "v2i/rlvw.hpp"

namespace v2i::harness {

/// SPaT older than this many deci-seconds is stale (3 missed frames at 10 Hz).
inline constexpr int kFreshnessWindowDs = 3;

struct ObuConfig {
  Application app = Application::RLVW;
  glosa::Config glosa;  // t_yellow here is the configured fallback
  int debounce_ticks = 0;
  double max_lateral_m = kDefaultMaxLateralM;
};

/// Everything the on-board unit computed on one tick.
struct ObuOutput {
  std::optional<MatchResult> match;
  std::optional<SignalState> light; // as reported by SPaT
  double t_rem = -1.0;
  double t_yellow = 0.0;
  int algo_state = kStateInactive;
  bool warn = false;
  double v_min = -1.0;
  double v_max = -1.0;
  double time_to_green = -1.0;
};

/// Vehicle-side message consumer and application runner. Keeps the latest
/// MAP and the freshest SPaT; duplicates and out-of-order frames are ignored.
class Obu {
public:
  explicit Obu(ObuConfig cfg) : cfg_(cfg), debounce_(cfg.debounce_ticks) {}

  /// Accepts one encoded message. Returns false if it was dropped as
  /// malformed or not newer than what is held.
  bool receive(std::string_view bytes) {
    Message msg;
    try {
      msg = decode(bytes);
    } catch (const Error&) {
      ++rejected_;
      return false;
    }
    if (auto* map = std::get_if<MapMessage>(&msg)) {
      map_ = std::move(*map);
      return true;
    }
    auto& spat = std::get<SpatMessage>(msg);
    if (spat_) {
      const int ahead = ds_until(spat.timestamp_ds, spat_->timestamp_ds);
      if (ahead == 0 || ahead >= kDeciSecondsPerHour / 2) return false;
    }
    for (const auto& ph : spat.phases) {
      auto [it, _] = yellow_.try_emplace(ph.signal_group, cfg_.glosa.t_yellow);
      it->second.observe(ph);
    }
    spat_ = std::move(spat);
    return true;
  }

  const std::optional<MapMessage>& map() const { return map_; }
  const std::optional<SpatMessage>& spat() const { return spat_; }
  int rejected() const { return rejected_; }

  /// True when the held SPaT is younger than the freshness window and the
  /// group's phase in it has not already ended.
  bool fresh_for(int signal_group, int now_ds) const {
    if (!spat_) return false;
    const int age = ds_until(now_ds, spat_->timestamp_ds);
    if (age >= kFreshnessWindowDs) return false;
    const PhaseStatus* ph = spat_->find_phase(signal_group);
    if (!ph) return false;
    return age == 0 || age < ds_until(ph->min_end_time_ds, spat_->timestamp_ds);
  }

  ObuOutput process(const geo::GeoPoint& pos, double v_veh, int now_ds) {
    ObuOutput out;
    if (!map_) return out;
    out.match = try_match_lane(*map_, pos, cfg_.max_lateral_m);
    if (!out.match || out.match->distance_to_intersection == 0.0) {
      debounce_.update(false);
      return out;
    }
    const int group = out.match->signal_group;
    if (!fresh_for(group, now_ds)) {
      out.algo_state = kStateStale;
      debounce_.update(false);
      return out;
    }
    const PhaseStatus& ph = *spat_->find_phase(group);
    out.light = ph.event_state;
    out.t_rem = remaining_time(ph, now_ds);
    auto yt = yellow_.find(group);
    out.t_yellow = yt == yellow_.end() ? cfg_.glosa.t_yellow : yt->second.yellow_duration();
    const double d = out.match->distance_to_intersection;

    if (cfg_.app == Application::RLVW) {
      const auto w = rlvw::evaluate({ph.event_state, d, v_veh, out.t_rem, out.t_yellow},
                                    cfg_.glosa.v_eps);
      out.algo_state = kRlvwMonitoring;
      out.warn = debounce_.update(w.warn);
      return out;
    }
    glosa::Config gc = cfg_.glosa;
    gc.t_yellow = out.t_yellow;
    const auto adv = glosa::advise(ph.event_state, out.t_rem, d, v_veh, gc);
    out.algo_state = adv.state_code();
    out.warn = adv.warn;
    out.v_min = adv.v_min;
    out.v_max = adv.v_max;
    out.time_to_green = adv.time_to_green;
    return out;
  }

private:
  ObuConfig cfg_;
  rlvw::Debounce debounce_;
  std::optional<MapMessage> map_;
  std::optional<SpatMessage> spat_;
  std::map<int, rlvw::YellowTracker> yellow_;
  int rejected_ = 0;
};

} // namespace v2i::harness
