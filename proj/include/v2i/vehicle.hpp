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

#include "v2i/geo.hpp"
#include "v2i/messages.hpp"

namespace v2i {

struct VehicleLimits {
  double accel_max = 3.0; // m/s^2
  double brake_max = 5.0; // m/s^2, magnitude
};

/// Longitudinal state along a lane. `s` is the arc position with the stop
/// bar at 0 and negative values on the approach.
struct VehicleState {
  double s = 0.0; // m
  double v = 0.0; // m/s
  double a = 0.0; // m/s^2, last applied command
  double t = 0.0; // s

  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

/// Pedal positions from a driver, each in [0, 1].
struct ControlCommand {
  double throttle = 0.0;
  double brake = 0.0;

  friend bool operator==(const ControlCommand&, const ControlCommand&) = default;
};

/// Clamps both pedals to [0, 1]; brake wins when both are pressed.
inline double command_to_acceleration(ControlCommand cmd, const VehicleLimits& lim = {}) {
  const auto clamp01 = [](double x) { return std::isfinite(x) ? std::clamp(x, 0.0, 1.0) : 0.0; };
  const double brake = clamp01(cmd.brake);
  if (brake > 0.0) return -brake * lim.brake_max;
  return clamp01(cmd.throttle) * lim.accel_max;
}

/// Pedal command that produces `accel` (saturating at the limits).
inline ControlCommand acceleration_to_command(double accel, const VehicleLimits& lim = {}) {
  if (accel > 0.0) return {std::min(accel / lim.accel_max, 1.0), 0.0};
  if (accel < 0.0) return {0.0, std::min(-accel / lim.brake_max, 1.0)};
  return {};
}

/// Semi-implicit Euler: speed first, then position with the new speed.
inline VehicleState step(const VehicleState& state, double accel, double dt,
                         const VehicleLimits& lim = {}) {
  if (!(dt > 0.0) || dt > 0.1) throw InvalidInput("dt must be in (0, 0.1]");
  if (!std::isfinite(accel) || accel > lim.accel_max || accel < -lim.brake_max) {
    throw InvalidInput("acceleration command outside vehicle limits");
  }
  VehicleState next = state;
  next.v = std::max(0.0, state.v + accel * dt);
  next.s = state.s + next.v * dt;
  next.a = accel;
  next.t = state.t + dt;
  return next;
}

inline const LaneGeometry& lane_or_throw(const MapMessage& map, int lane_id) {
  const LaneGeometry* lane = map.find_lane(lane_id);
  if (!lane) throw UnknownLane("lane " + std::to_string(lane_id) + " not in MAP");
  return *lane;
}

/// Polyline length of a lane, in meters.
inline double lane_length(const LaneGeometry& lane) {
  double total = 0.0;
  for (std::size_t i = 1; i < lane.nodes.size(); ++i) {
    total += geo::planar_distance(lane.nodes[i - 1], lane.nodes[i]);
  }
  return total;
}

/// Local offset at arc distance `along` (m) from the stop bar.
inline geo::LocalOffset point_along(const LaneGeometry& lane, double along) {
  double walked = 0.0;
  for (std::size_t i = 1; i < lane.nodes.size(); ++i) {
    const auto& a = lane.nodes[i - 1];
    const auto& b = lane.nodes[i];
    const double seg = geo::planar_distance(a, b);
    if (seg > 0.0 && along <= walked + seg) {
      const double f = (along - walked) / seg;
      return {a.east_cm + f * (b.east_cm - a.east_cm), a.north_cm + f * (b.north_cm - a.north_cm)};
    }
    walked += seg;
  }
  return lane.nodes.back();
}

/// Geodetic position of a vehicle at arc position `s` on a lane.
inline geo::GeoPoint position_to_geo(const MapMessage& map, int lane_id, double s) {
  const auto& lane = lane_or_throw(map, lane_id);
  const double along = -s;
  if (!std::isfinite(s) || along < 0.0 || along > lane_length(lane)) {
    throw OutOfExtent("s = " + std::to_string(s) + " is outside lane " + std::to_string(lane_id));
  }
  return geo::from_local(map.reference, point_along(lane, along));
}

} // namespace v2i
