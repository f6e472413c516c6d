#include "roadsim/microsim/iterations.hpp"

#include <cmath>

#include "roadsim/error.hpp"

namespace roadsim::sim {

std::vector<Trip> build_trips(const RoadGraph& g, std::span<const NodeDemand> demand,
                              const DepartureHistogram& hist, const SimConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<Trip> trips;
  for (const auto& d : demand) {
    const auto o = g.find_node(d.origin_node);
    const auto t = g.find_node(d.dest_node);
    if (!o || !t)
      throw ConfigError("demand references node " +
                        std::to_string(o ? d.dest_node : d.origin_node) + " not in the graph");
    if (d.trips < 0.0 || d.trips != std::floor(d.trips))
      throw ConfigError("vehicle demand must be a non-negative integer count");
    if (*o == *t) continue;
    for (auto k = static_cast<std::int64_t>(d.trips); k > 0; --k) {
      Trip trip;
      trip.origin = *o;
      trip.dest = *t;
      trip.departure = d.departure_bucket
                           ? hist.sample_in(static_cast<std::size_t>(*d.departure_bucket), rng)
                           : hist.sample(rng);
      trip.cls = unit_draw(rng) < cfg.truck_fraction ? VehicleClass::truck : VehicleClass::car;
      trips.push_back(trip);
    }
  }
  return trips;
}

SimulationReport run_iterations(const SimNetwork& net, std::span<const Trip> trips,
                                const SimConfig& cfg) {
  if (cfg.iterations < 1) throw ConfigError("at least one iteration is required");
  SimulationReport report;
  std::vector<double> weights = init_edge_weights(net);
  std::vector<Route> routes;
  for (int it = 1; it <= cfg.iterations; ++it) {
    std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(it)};
    std::mt19937_64 rng(seq);
    IterationReport rep;
    rep.iteration = it;
    rep.plan = plan_routes(net, trips, weights, it, rng, routes, cfg.workers);

    World world(net, trips, routes, cfg, it);
    world.run(world.default_horizon());

    const auto measured = world.measured_edge_times();
    double sum = 0.0;
    for (std::size_t e = 0; e < measured.size(); ++e) {
      if (std::isnan(measured[e])) continue;
      sum += std::abs(weights[e] - measured[e]) / measured[e];
      ++rep.visited_edges;
      weights[e] = measured[e];
    }
    rep.convergence_metric = rep.visited_edges ? sum / static_cast<double>(rep.visited_edges) : 0.0;
    rep.departed = world.departed();
    rep.arrived = world.arrived_count();
    rep.end_time = world.time();
    rep.collisions = world.collisions();
    rep.edge_entries.assign(net.edge_count(), 0);
    double total = 0.0;
    for (const auto& s : world.vehicles()) {
      for (auto e : s.route) ++rep.edge_entries[e];
      if (s.arrived()) total += s.travel_time;
    }
    rep.mean_travel_time = rep.arrived ? total / static_cast<double>(rep.arrived) : 0.0;
    report.iterations.push_back(std::move(rep));

    if (it == cfg.iterations) {
      report.vehicles = world.vehicles();
      report.edge_series = world.edge_series();
      report.conservation = world.conservation();
    }
  }
  return report;
}

}  // namespace roadsim::sim
