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
#include <numbers>
#include <string>

#include "v2i/error.hpp"

namespace v2i::geo {

/// Mean Earth radius in meters. Fixed so projections are bit-stable.
inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Separation beyond which the equirectangular projection is refused.
inline constexpr double kMaxProjectionM = 5'000.0;

struct GeoPoint {
  double lat = 0.0; // degrees, WGS-84
  double lon = 0.0; // degrees

  bool valid() const {
    return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 &&
           lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
  }
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Planar offset from an intersection reference point, in centimeters.
struct LocalOffset {
  double east_cm = 0.0;
  double north_cm = 0.0;

  double norm_m() const { return std::hypot(east_cm, north_cm) / 100.0; }
  friend bool operator==(const LocalOffset&, const LocalOffset&) = default;
};

inline constexpr double deg_to_rad(double deg) {
  return deg * std::numbers::pi / 180.0;
}

/// Great-circle distance in meters. Used as the range guard for the
/// projection and as the reference metric in tests.
inline double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double dlat = deg_to_rad(b.lat - a.lat);
  const double dlon = deg_to_rad(b.lon - a.lon);
  const double s = std::sin(dlat / 2.0);
  const double t = std::sin(dlon / 2.0);
  const double h =
      s * s + std::cos(deg_to_rad(a.lat)) * std::cos(deg_to_rad(b.lat)) * t * t;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

namespace detail {
// Centimeters per degree of latitude, and of longitude at the reference.
inline double cm_per_deg_north() { return kEarthRadiusM * std::numbers::pi / 180.0 * 100.0; }
inline double cm_per_deg_east(const GeoPoint& ref) {
  return std::cos(deg_to_rad(ref.lat)) * cm_per_deg_north();
}
inline void require_valid(const GeoPoint& p, const char* what) {
  if (!p.valid()) {
    throw OutOfRange(std::string(what) + " is not a valid WGS-84 coordinate");
  }
}
} // namespace detail

/// Equirectangular projection of `p` about `ref`.
inline LocalOffset to_local(const GeoPoint& ref, const GeoPoint& p) {
  detail::require_valid(ref, "reference");
  detail::require_valid(p, "point");
  if (haversine_m(ref, p) >= kMaxProjectionM) {
    throw OutOfRange("point is 5 km or more from the reference");
  }
  return LocalOffset{(p.lon - ref.lon) * detail::cm_per_deg_east(ref),
                     (p.lat - ref.lat) * detail::cm_per_deg_north()};
}

/// Inverse of to_local for the same reference.
inline GeoPoint from_local(const GeoPoint& ref, const LocalOffset& off) {
  detail::require_valid(ref, "reference");
  if (!std::isfinite(off.east_cm) || !std::isfinite(off.north_cm) ||
      off.norm_m() >= kMaxProjectionM) {
    throw OutOfRange("offset magnitude must be finite and below 5 km");
  }
  GeoPoint p{ref.lat + off.north_cm / detail::cm_per_deg_north(),
             ref.lon + off.east_cm / detail::cm_per_deg_east(ref)};
  detail::require_valid(p, "projected point");
  return p;
}

/// Euclidean distance between two offsets, in meters.
inline double planar_distance(const LocalOffset& a, const LocalOffset& b) {
  return std::hypot(a.east_cm - b.east_cm, a.north_cm - b.north_cm) / 100.0;
}

} // namespace v2i::geo
