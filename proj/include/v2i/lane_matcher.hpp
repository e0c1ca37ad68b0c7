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

#include <cstddef>
#include <limits>
#include <optional>
#include <tuple>

#include "v2i/geo.hpp"
#include "v2i/messages.hpp"

namespace v2i {

inline constexpr double kDefaultMaxLateralM = 5.0;

struct MatchResult {
  int lane_id = 0;
  int signal_group = 0;
  double distance_to_intersection = 0.0; // meters to the stop bar
  std::size_t matched_node_index = 0;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Distance from `pos` to the lane's stop bar (first node). Clamped to zero
/// once the vehicle has moved past the stop bar into the intersection, i.e.
/// its projection onto the first segment falls on the intersection side.
inline double distance_to_intersection(const MapMessage& map, int lane_id,
                                       const geo::GeoPoint& pos) {
  const LaneGeometry* lane = map.find_lane(lane_id);
  if (!lane) throw UnknownLane("lane " + std::to_string(lane_id) + " not in MAP");
  const auto p = geo::to_local(map.reference, pos);
  const auto& stop = lane->nodes.front();
  const auto& next = lane->nodes[1];
  const double ux = next.east_cm - stop.east_cm;
  const double uy = next.north_cm - stop.north_cm;
  const double along = (p.east_cm - stop.east_cm) * ux + (p.north_cm - stop.north_cm) * uy;
  if (along < 0.0) return 0.0;
  return geo::planar_distance(p, stop);
}

/// Nearest-node lane matching. Returns nullopt when every node is farther
/// than `max_lateral_m`. Ties go to the lowest lane_id, then node index, so
/// the result does not depend on lane storage order.
inline std::optional<MatchResult> try_match_lane(const MapMessage& map, const geo::GeoPoint& pos,
                                                 double max_lateral_m = kDefaultMaxLateralM) {
  if (!(max_lateral_m > 0.0)) throw InvalidInput("max_lateral must be positive");
  const auto p = geo::to_local(map.reference, pos);

  const LaneGeometry* best_lane = nullptr;
  std::size_t best_node = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& lane : map.lanes) {
    for (std::size_t i = 0; i < lane.nodes.size(); ++i) {
      const double d = geo::planar_distance(p, lane.nodes[i]);
      if (!best_lane || std::tie(d, lane.lane_id, i) <
                            std::tie(best_dist, best_lane->lane_id, best_node)) {
        best_lane = &lane;
        best_node = i;
        best_dist = d;
      }
    }
  }
  if (!best_lane || best_dist > max_lateral_m) return std::nullopt;

  return MatchResult{best_lane->lane_id, best_lane->signal_group,
                     distance_to_intersection(map, best_lane->lane_id, pos), best_node};
}

inline MatchResult match_lane(const MapMessage& map, const geo::GeoPoint& pos,
                              double max_lateral_m = kDefaultMaxLateralM) {
  if (auto m = try_match_lane(map, pos, max_lateral_m)) return *m;
  throw NoMatch("no lane node within " + std::to_string(max_lateral_m) + " m");
}

} // namespace v2i
