#include "roadsim/microsim/routing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "roadsim/error.hpp"
#include "roadsim/parallel.hpp"
#include "roadsim/shortest_path.hpp"

namespace roadsim::sim {

namespace {

// Above this many nodes a full table of trees would not fit comfortably in
// memory, so per-origin search is used regardless of the cost estimate.
constexpr std::size_t kAllPairsMaxNodes = 4096;

bool prefer_all_pairs(std::size_t origins, std::size_t v, std::size_t e) {
  if (v > kAllPairsMaxNodes || v < 2) return false;
  const double log_v = std::log2(static_cast<double>(v));
  const double per_origin = static_cast<double>(origins) * static_cast<double>(e + v) * log_v;
  const double all_pairs = static_cast<double>(v) * static_cast<double>(e) * log_v;
  return per_origin > all_pairs;
}

}  // namespace

std::vector<double> init_edge_weights(const SimNetwork& net) {
  std::vector<double> w(net.edge_count());
  for (std::size_t e = 0; e < w.size(); ++e)
    w[e] = std::sqrt(static_cast<double>(net.lanes(e))) * net.length(e) / net.speed(e);
  return w;
}

double reroute_fraction(int iteration) {
  if (iteration <= 2) return 1.0;
  if (iteration == 3) return 0.5;
  return 0.25;
}

PlanStats plan_routes(const SimNetwork& net, std::span<const Trip> trips,
                      std::span<const double> weights, int iteration, std::mt19937_64& rng,
                      std::vector<Route>& routes, int workers) {
  const std::size_t n = trips.size();
  PlanStats stats;
  stats.iteration = iteration;
  stats.vehicles = n;

  std::vector<std::size_t> selected;
  if (routes.empty()) {
    routes.assign(n, {});
    selected.resize(n);
    std::iota(selected.begin(), selected.end(), 0);
  } else {
    if (routes.size() != n) throw ConfigError("route table does not match the trip list");
    const auto count = static_cast<std::size_t>(std::llround(reroute_fraction(iteration) * n));
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::sample(all.begin(), all.end(), std::back_inserter(selected), count, rng);
  }
  stats.rerouted = selected.size();
  if (selected.empty()) return stats;

  std::map<std::size_t, std::vector<std::size_t>> by_origin;
  for (auto i : selected) by_origin[trips[i].origin].push_back(i);
  std::vector<std::size_t> origins;
  for (const auto& [o, _] : by_origin) origins.push_back(o);

  const RoadGraph& g = net.graph();
  stats.all_pairs = prefer_all_pairs(origins.size(), g.node_count(), g.edge_count());
  if (stats.all_pairs) {
    // Full table of trees, then plain lookups.
    std::vector<ShortestPathTree> table(g.node_count());
    parallel_for(table.size(), workers,
                 [&](std::size_t s) { shortest_path_tree(g, weights, s, table[s]); });
    for (auto i : selected) {
      const auto& tree = table[trips[i].origin];
      if (!tree.reached(trips[i].dest))
        throw UnreachableDestination(g.node(trips[i].origin).id, g.node(trips[i].dest).id);
      routes[i] = extract_path(g, tree, trips[i].dest);
    }
    return stats;
  }
  parallel_for(origins.size(), workers, [&](std::size_t k) {
    thread_local ShortestPathTree tree;
    shortest_path_tree(g, weights, origins[k], tree);
    for (auto i : by_origin.at(origins[k])) {
      if (!tree.reached(trips[i].dest))
        throw UnreachableDestination(g.node(trips[i].origin).id, g.node(trips[i].dest).id);
      routes[i] = extract_path(g, tree, trips[i].dest);
    }
  });
  return stats;
}

}  // namespace roadsim::sim
