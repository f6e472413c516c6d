#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "roadsim/demand.hpp"
#include "roadsim/graph.hpp"

namespace fixtures {

using roadsim::EdgeRecord;
using roadsim::NodeDemand;
using roadsim::NodeRecord;
using roadsim::RoadGraph;
using roadsim::RoadType;

inline constexpr double kLat0 = 37.80;
inline constexpr double kLon0 = -122.27;

/// Node placed x meters east and y meters north of a fixed origin.
NodeRecord node_at(std::int64_t id, double x, double y);

EdgeRecord edge(std::int64_t from, std::int64_t to, double length,
                RoadType type = RoadType::primary, std::optional<int> lanes = 1,
                std::optional<double> maxspeed_mph = std::nullopt, int key = 0);

/// Edge with hand-set congestion coefficients (speed in m/s).
EdgeRecord bpr_edge(std::int64_t from, std::int64_t to, int key, double t0, double capacity_vps,
                    double speed_mps = 10.0, int lanes = 1);

/// Imputes lanes and attaches BPR coefficients (alpha 0.15, beta 4).
RoadGraph enrich(const RoadGraph& g);

/// rows x cols grid, `spacing` meters apart, node ids r * cols + c + 1.
/// Streets alternate direction (even rows east, odd rows west, odd columns
/// north, even columns south) plus `extra_reverse` random reverse segments.
/// Every fourth line is primary with 2 lanes; the rest secondary with 1.
RoadGraph one_way_grid(int rows, int cols, double spacing, std::size_t extra_reverse,
                       std::uint64_t seed);

/// rows x cols grid with both directions on every segment.
RoadGraph two_way_grid(int rows, int cols, double spacing, int lanes, RoadType type);

/// n nodes on a ring (both directions unless one_way) plus random chords;
/// strongly connected by construction. Lengths 200..1200 m.
RoadGraph random_connected(std::size_t n, std::size_t chords, std::uint64_t seed);

/// Random node pairs with trips in [lo, hi].
std::vector<NodeDemand> random_demand(const RoadGraph& g, std::size_t pairs, double lo, double hi,
                                      std::uint64_t seed);

/// Writes a small city into `dir`: raw nodes.csv and edges.csv (a 6 x 6
/// two-way grid plus minor-road spurs), zones.csv, trips.csv with
/// `trips_per_pair` per zone pair, departures.csv, controls.csv and a
/// config.ini pointing at them with out_dir `dir`/out.
void write_scenario(const std::filesystem::path& dir, int trips_per_pair);

/// Fresh scratch directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

/// Whole file as a string.
std::string slurp(const std::filesystem::path& p);

}  // namespace fixtures
