#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "roadsim/types.hpp"

namespace roadsim {

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Great-circle distance in meters (spherical law of cosines form).
/// The arccos argument is clamped to [-1, 1] against rounding drift.
inline double haversine(double lat1, double lon1, double lat2, double lon2,
                        double r = kEarthRadiusM) {
  if (lat1 == lat2 && lon1 == lon2) return 0.0;
  const double p1 = deg2rad(lat1), p2 = deg2rad(lat2);
  const double dl = std::abs(deg2rad(lon1) - deg2rad(lon2));
  const double c = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
  return r * std::acos(std::clamp(c, -1.0, 1.0));
}

inline double haversine(const LatLon& a, const LatLon& b, double r = kEarthRadiusM) {
  return haversine(a.lat, a.lon, b.lat, b.lon, r);
}

inline double polyline_length(std::span<const LatLon> pts) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) total += haversine(pts[i - 1], pts[i]);
  return total;
}

/// Initial bearing in degrees clockwise from north, in [0, 360).
inline double bearing_deg(const LatLon& a, const LatLon& b) {
  const double p1 = deg2rad(a.lat), p2 = deg2rad(b.lat);
  const double dl = deg2rad(b.lon - a.lon);
  const double y = std::sin(dl) * std::cos(p2);
  const double x = std::cos(p1) * std::sin(p2) - std::sin(p1) * std::cos(p2) * std::cos(dl);
  const double deg = std::atan2(y, x) * 180.0 / std::numbers::pi;
  return deg < 0.0 ? deg + 360.0 : deg;
}

}  // namespace roadsim
