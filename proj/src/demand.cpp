#include "roadsim/demand.hpp"

#include <map>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "roadsim/csv.hpp"
#include "roadsim/error.hpp"

namespace roadsim {

NodeLocator::NodeLocator(const RoadGraph& g) : graph_(&g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::ArrayXd lat(n);
  lon_rad_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& node = g.node(static_cast<std::size_t>(i));
    lat(i) = deg2rad(node.lat);
    lon_rad_(i) = deg2rad(node.lon);
  }
  sin_lat_ = lat.sin();
  cos_lat_ = lat.cos();
}

Eigen::ArrayXd NodeLocator::distances(double lat, double lon) const {
  const double p = deg2rad(lat), l = deg2rad(lon);
  const Eigen::ArrayXd c =
      std::sin(p) * sin_lat_ + std::cos(p) * cos_lat_ * (lon_rad_ - l).abs().cos();
  return kEarthRadiusM * c.max(-1.0).min(1.0).acos();
}

NodeId NodeLocator::nearest(double lat, double lon) const {
  if (graph_->empty()) throw EmptyGraph();
  const Eigen::ArrayXd d = distances(lat, lon);
  const double best = d.minCoeff();
  // Anything within a millimetre of the vectorized minimum is a candidate.
  std::size_t arg = 0;
  double arg_dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) > best + 1e-3) continue;
    const auto& node = graph_->node(static_cast<std::size_t>(i));
    const double exact = haversine(lat, lon, node.lat, node.lon);
    if (exact < arg_dist) {
      arg_dist = exact;
      arg = static_cast<std::size_t>(i);
    }
  }
  return graph_->node(arg).id;
}

NodeId nearest_node(const Zone& zone, const RoadGraph& g) {
  return NodeLocator(g).nearest(zone.centroid_lat, zone.centroid_lon);
}

LinkedDemand link_demand(std::span<const TripRecord> trips, std::span<const Zone> zones,
                         const RoadGraph& g) {
  std::unordered_map<ZoneId, const Zone*> by_id;
  for (const auto& z : zones) by_id.emplace(z.id, &z);

  const NodeLocator locator(g);
  std::unordered_map<ZoneId, NodeId> memo;
  auto node_for = [&](ZoneId id) {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const auto z = by_id.find(id);
    if (z == by_id.end()) throw UnknownZone(id);
    const NodeId n = locator.nearest(z->second->centroid_lat, z->second->centroid_lon);
    memo.emplace(id, n);
    return n;
  };

  using Key = std::tuple<NodeId, NodeId, int>;  // bucket -1 == absent
  std::map<Key, double> merged;
  LinkedDemand out;
  for (const auto& t : trips) {
    const NodeId o = node_for(t.origin_zone);
    const NodeId d = node_for(t.dest_zone);
    if (o == d) {
      ++out.dropped_records;
      out.dropped_trips += t.trips;
      continue;
    }
    merged[{o, d, t.departure_bucket.value_or(-1)}] += t.trips;
  }
  out.records.reserve(merged.size());
  for (const auto& [key, trips_sum] : merged) {
    const auto& [o, d, b] = key;
    out.records.push_back({o, d, trips_sum, b < 0 ? std::nullopt : std::optional<int>(b)});
  }
  return out;
}

std::vector<Zone> read_zones_csv(const std::filesystem::path& path) {
  csv::Reader r(path);
  r.expect_header_prefix({"zone_id", "centroid_lat", "centroid_lon"});
  std::vector<Zone> zones;
  std::unordered_set<ZoneId> seen;
  std::vector<std::string> f;
  while (r.next(f)) {
    if (f.size() != 3) r.fail("expected 3 fields");
    Zone z{r.to_int(f[0], "zone_id"), r.to_double(f[1], "centroid_lat"),
           r.to_double(f[2], "centroid_lon")};
    if (z.centroid_lat < -90 || z.centroid_lat > 90 || z.centroid_lon < -180 || z.centroid_lon > 180)
      r.fail("centroid out of range");
    if (!seen.insert(z.id).second) r.fail("duplicate zone id " + f[0]);
    zones.push_back(z);
  }
  return zones;
}

std::vector<TripRecord> read_trips_csv(const std::filesystem::path& path) {
  csv::Reader r(path);
  r.expect_header_prefix({"origin_zone", "dest_zone", "trips"});
  const bool has_bucket = r.header().size() >= 4 && r.header()[3] == "departure_bucket";
  std::vector<TripRecord> trips;
  std::vector<std::string> f;
  while (r.next(f)) {
    if (f.size() != r.header().size()) r.fail("wrong field count");
    TripRecord t{r.to_int(f[0], "origin_zone"), r.to_int(f[1], "dest_zone"),
                 r.to_double(f[2], "trips"), std::nullopt};
    if (!(t.trips > 0)) r.fail("trips must be positive");
    if (has_bucket)
      if (auto b = r.to_optional_int(f[3], "departure_bucket")) t.departure_bucket = static_cast<int>(*b);
    trips.push_back(t);
  }
  return trips;
}

std::vector<NodeDemand> read_node_demand_csv(const std::filesystem::path& path) {
  csv::Reader r(path);
  r.expect_header_prefix({"origin_node", "dest_node", "trips"});
  const bool has_bucket = r.header().size() >= 4 && r.header()[3] == "departure_bucket";
  std::vector<NodeDemand> out;
  std::vector<std::string> f;
  while (r.next(f)) {
    if (f.size() != r.header().size()) r.fail("wrong field count");
    NodeDemand d{r.to_int(f[0], "origin_node"), r.to_int(f[1], "dest_node"),
                 r.to_double(f[2], "trips"), std::nullopt};
    if (!(d.trips > 0)) r.fail("trips must be positive");
    if (has_bucket)
      if (auto b = r.to_optional_int(f[3], "departure_bucket")) d.departure_bucket = static_cast<int>(*b);
    out.push_back(d);
  }
  return out;
}

std::string node_demand_csv(std::span<const NodeDemand> records) {
  std::string out = "origin_node,dest_node,trips,departure_bucket\n";
  for (const auto& d : records)
    out += csv::row(d.origin_node, d.dest_node, d.trips,
                    d.departure_bucket ? std::to_string(*d.departure_bucket) : std::string());
  return out;
}

}  // namespace roadsim
