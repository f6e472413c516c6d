#pragma once

#include <span>
#include <vector>

#include "roadsim/demand.hpp"
#include "roadsim/microsim/departures.hpp"
#include "roadsim/microsim/routing.hpp"
#include "roadsim/microsim/world.hpp"

namespace roadsim::sim {

/// Expands integer node demand into one trip per vehicle, in record order.
/// Records with a departure bucket draw inside that bucket; the rest draw
/// from the whole histogram. Vehicle class is drawn with cfg.truck_fraction.
/// Throws ConfigError for non-integer counts and unknown nodes.
std::vector<Trip> build_trips(const RoadGraph& g, std::span<const NodeDemand> demand,
                              const DepartureHistogram& hist, const SimConfig& cfg);

struct IterationReport {
  int iteration = 0;
  PlanStats plan;
  /// Mean of |weight - measured| / measured over edges traversed this
  /// iteration, where weight is what the routes were planned with.
  double convergence_metric = 0.0;
  std::size_t visited_edges = 0;
  std::size_t departed = 0;
  std::size_t arrived = 0;
  double mean_travel_time = 0.0;  // arrived vehicles
  double end_time = 0.0;
  std::size_t collisions = 0;
  /// Vehicles per edge index, for route-choice checks.
  std::vector<std::size_t> edge_entries;
};

struct SimulationReport {
  std::vector<IterationReport> iterations;
  std::vector<VehicleState> vehicles;  // final iteration
  std::vector<EdgeInterval> edge_series;
  std::vector<Conservation> conservation;
};

/// Plan, simulate, and feed measured edge times back into the routing
/// weights, `cfg.iterations` times. The returned vehicles and series come
/// from the last iteration.
SimulationReport run_iterations(const SimNetwork& net, std::span<const Trip> trips,
                                const SimConfig& cfg);

}  // namespace roadsim::sim
