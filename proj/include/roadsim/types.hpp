#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace roadsim {

using NodeId = std::int64_t;
using ZoneId = std::int64_t;

// Retained OSM highway classes plus a catch-all for everything else.
enum class RoadType : std::uint8_t {
  motorway,
  motorway_link,
  trunk,
  trunk_link,
  primary,
  primary_link,
  secondary,
  secondary_link,
  tertiary,
  tertiary_link,
  unclassified,
  road,
  other,
};

inline constexpr std::size_t kRoadTypeCount = 13;

inline constexpr std::array<std::string_view, kRoadTypeCount> kRoadTypeNames = {
    "motorway",  "motorway_link",  "trunk",        "trunk_link", "primary",
    "primary_link", "secondary", "secondary_link", "tertiary",   "tertiary_link",
    "unclassified", "road",      "other"};

/// The twelve classes kept by the "tertiary and higher" filter.
inline constexpr std::array<RoadType, 12> kMajorRoadTypes = {
    RoadType::motorway,      RoadType::motorway_link, RoadType::trunk,
    RoadType::trunk_link,    RoadType::primary,       RoadType::primary_link,
    RoadType::secondary,     RoadType::secondary_link, RoadType::tertiary,
    RoadType::tertiary_link, RoadType::unclassified,  RoadType::road};

constexpr std::string_view to_string(RoadType t) {
  return kRoadTypeNames[static_cast<std::size_t>(t)];
}

/// Unknown strings map to RoadType::other.
constexpr RoadType parse_road_type(std::string_view s) {
  for (std::size_t i = 0; i + 1 < kRoadTypeCount; ++i)
    if (kRoadTypeNames[i] == s) return static_cast<RoadType>(i);
  return RoadType::other;
}

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
  friend bool operator==(const LatLon&, const LatLon&) = default;
};

inline constexpr double kMphToMps = 0.44704;
inline constexpr double kEarthRadiusM = 6371000.0;

}  // namespace roadsim
