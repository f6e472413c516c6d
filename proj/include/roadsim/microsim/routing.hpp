#pragma once

#include <random>
#include <span>
#include <vector>

#include "roadsim/microsim/network.hpp"
#include "roadsim/microsim/physics.hpp"

namespace roadsim::sim {

/// One simulated vehicle trip between node indices.
struct Trip {
  std::size_t origin = 0;
  std::size_t dest = 0;
  double departure = 0.0;
  VehicleClass cls = VehicleClass::car;
};

using Route = std::vector<std::size_t>;  // edge indices in travel order

/// sqrt(lanes) * length / speed per edge, in seconds.
std::vector<double> init_edge_weights(const SimNetwork& net);

/// Share of vehicles re-planned in a 1-based iteration: 1, 1, 1/2, then 1/4.
double reroute_fraction(int iteration);

struct PlanStats {
  int iteration = 0;
  std::size_t vehicles = 0;
  std::size_t rerouted = 0;
  bool all_pairs = false;
  double fraction() const {
    return vehicles == 0 ? 0.0 : static_cast<double>(rerouted) / static_cast<double>(vehicles);
  }
};

/// Replaces the routes of round(fraction * n) vehicles, chosen uniformly
/// without replacement, with shortest paths under `weights`. On iteration 1
/// `routes` may be empty and is filled for every trip. Throws
/// UnreachableDestination.
PlanStats plan_routes(const SimNetwork& net, std::span<const Trip> trips,
                      std::span<const double> weights, int iteration, std::mt19937_64& rng,
                      std::vector<Route>& routes, int workers = 1);

}  // namespace roadsim::sim
