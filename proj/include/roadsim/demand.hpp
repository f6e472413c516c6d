#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "roadsim/geo.hpp"
#include "roadsim/graph.hpp"

namespace roadsim {

struct Zone {
  ZoneId id = 0;
  double centroid_lat = 0.0;
  double centroid_lon = 0.0;
};

/// Zone-to-zone demand. `trips` is a count for the microsimulation or a rate
/// for static assignment.
struct TripRecord {
  ZoneId origin_zone = 0;
  ZoneId dest_zone = 0;
  double trips = 0.0;
  std::optional<int> departure_bucket;
};

struct NodeDemand {
  NodeId origin_node = 0;
  NodeId dest_node = 0;
  double trips = 0.0;
  std::optional<int> departure_bucket;
  friend bool operator==(const NodeDemand&, const NodeDemand&) = default;
};

/// Nearest-node lookup over a fixed graph. Distances to all nodes are computed
/// as one array expression; near-ties are re-checked with the scalar formula
/// so the result never depends on vectorization rounding.
class NodeLocator {
 public:
  explicit NodeLocator(const RoadGraph& g);
  /// Ties go to the smallest node id. Throws EmptyGraph.
  NodeId nearest(double lat, double lon) const;
  /// Distance in meters from (lat, lon) to every node, in node-index order.
  Eigen::ArrayXd distances(double lat, double lon) const;

 private:
  const RoadGraph* graph_;
  Eigen::ArrayXd sin_lat_, cos_lat_, lon_rad_;
};

NodeId nearest_node(const Zone& zone, const RoadGraph& g);

struct LinkedDemand {
  std::vector<NodeDemand> records;  // sorted by (origin, dest, bucket)
  std::size_t dropped_records = 0;  // origin and destination hit the same node
  double dropped_trips = 0.0;
};

/// Maps zones to their nearest nodes and merges records that land on the
/// same (origin, dest, bucket). Throws UnknownZone.
LinkedDemand link_demand(std::span<const TripRecord> trips, std::span<const Zone> zones,
                         const RoadGraph& g);

std::vector<Zone> read_zones_csv(const std::filesystem::path& path);
std::vector<TripRecord> read_trips_csv(const std::filesystem::path& path);
std::vector<NodeDemand> read_node_demand_csv(const std::filesystem::path& path);
std::string node_demand_csv(std::span<const NodeDemand> records);

}  // namespace roadsim
