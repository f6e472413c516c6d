#pragma once

#include <array>

#include "roadsim/graph.hpp"

namespace roadsim {

/// Default free-flow speeds (mph) and per-lane capacities (veh/lane/hour) by
/// road class and lane bucket {1, 2, 3, 4+}. Used only when OSM tags are
/// missing.
struct DefaultTables {
  using Row = std::array<double, 4>;
  static constexpr std::array<Row, 12> speed_mph = {{
      {50, 50, 65, 65},  // motorway
      {50, 50, 65, 65},  // motorway_link
      {45, 45, 45, 45},  // trunk
      {45, 45, 45, 45},  // trunk_link
      {30, 30, 30, 30},  // primary
      {30, 30, 30, 30},  // primary_link
      {25, 25, 25, 25},  // secondary
      {25, 25, 25, 25},  // secondary_link
      {20, 20, 20, 20},  // tertiary
      {20, 20, 20, 20},  // tertiary_link
      {20, 20, 20, 20},  // unclassified
      {30, 30, 30, 30},  // road
  }};
  static constexpr std::array<Row, 12> capacity_vplph = {{
      {1900, 2000, 2000, 2200},  // motorway
      {1900, 2000, 2000, 2200},  // motorway_link
      {1900, 2000, 2000, 2000},  // trunk
      {1900, 2000, 2000, 2000},  // trunk_link
      {1000, 1000, 1000, 1000},  // primary
      {1000, 1000, 1000, 1000},  // primary_link
      {900, 900, 900, 900},      // secondary
      {900, 900, 900, 900},      // secondary_link
      {900, 900, 900, 900},      // tertiary
      {900, 900, 900, 900},      // tertiary_link
      {800, 800, 800, 800},      // unclassified
      {900, 900, 900, 900},      // road
  }};
};

/// Column index for a lane count: min(lanes, 4) - 1.
int lane_bucket(int lanes);

/// mph. Throws UnknownRoadType for RoadType::other, NonPositiveInput for lanes < 1.
double infer_free_flow_speed(RoadType type, int lanes);

/// veh/lane/hour. Same errors as infer_free_flow_speed.
double infer_capacity(RoadType type, int lanes);

/// length / speed in seconds; throws NonPositiveInput unless both are > 0.
double free_flow_time(double length_m, double speed_mps);

/// Fills missing lane counts with the per-type median of tagged edges
/// (even counts: mean of the middle two rounded half-up), falling back to 1.
RoadGraph impute_lanes(const RoadGraph& g);

/// Attaches BprCoefficients to every edge. Requires lanes on every edge.
RoadGraph compute_bpr_coefficients(const RoadGraph& g, double alpha = 0.15, double beta = 4.0);

/// Congested travel time t0 (1 + alpha (v/c)^beta). Throws NegativeVolume.
double bpr_time(const BprCoefficients& c, double v);

/// Same curve written as a0 + a4 v^beta.
double bpr_time_polynomial(const BprCoefficients& c, double v);

}  // namespace roadsim
