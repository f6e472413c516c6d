#include "roadsim/assignment.hpp"

#include <algorithm>
#include <map>

#include "roadsim/csv.hpp"
#include "roadsim/error.hpp"
#include "roadsim/parallel.hpp"
#include "roadsim/shortest_path.hpp"

namespace roadsim {

OdMatrix::OdMatrix(const RoadGraph& g, std::span<const NodeDemand> demand, double scale) {
  std::map<std::size_t, std::map<std::size_t, double>> grouped;
  for (const auto& d : demand) {
    const auto o = g.find_node(d.origin_node);
    const auto t = g.find_node(d.dest_node);
    if (!o || !t)
      throw InvalidGraph("demand references node " +
                         std::to_string(o ? d.dest_node : d.origin_node) + " not in the graph");
    if (*o == *t) continue;
    grouped[*o][*t] += d.trips * scale;
  }
  for (const auto& [origin, dests] : grouped) {
    origins_.push_back(origin);
    for (const auto& [node, rate] : dests) {
      dests_.push_back({node, rate});
      total_ += rate;
    }
    offsets_.push_back(dests_.size());
  }
}

namespace {

constexpr std::size_t kOriginBlock = 32;

void load_origin(const RoadGraph& g, const OdMatrix& od, std::size_t k,
                 const ShortestPathTree& tree, std::vector<double>& pending,
                 Eigen::VectorXd& volumes) {
  for (const auto& dest : od.destinations(k)) {
    if (!tree.reached(dest.node))
      throw UnreachableDestination(g.node(od.origins()[k]).id, g.node(dest.node).id);
    pending[dest.node] += dest.rate;
  }
  // Push accumulated demand back up the tree, deepest nodes first.
  for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
    const std::size_t v = *it;
    if (pending[v] == 0.0) continue;
    if (v != tree.source) {
      const std::size_t e = tree.pred_edge[v];
      volumes(static_cast<Eigen::Index>(e)) += pending[v];
      pending[g.from_index(e)] += pending[v];
    }
    pending[v] = 0.0;
  }
}

}  // namespace

Eigen::VectorXd all_or_nothing(const RoadGraph& g, const OdMatrix& od,
                               const Eigen::VectorXd& times, int workers) {
  const auto m = static_cast<Eigen::Index>(g.edge_count());
  Eigen::VectorXd total = Eigen::VectorXd::Zero(m);
  const std::span<const double> weights(times.data(), static_cast<std::size_t>(times.size()));

  const std::size_t n_origins = od.origins().size();
  const std::size_t n_blocks = (n_origins + kOriginBlock - 1) / kOriginBlock;
  const std::size_t wave = static_cast<std::size_t>(std::max(workers, 1)) * 2;

  std::vector<Eigen::VectorXd> partial(std::min(wave, n_blocks));
  for (std::size_t first = 0; first < n_blocks; first += wave) {
    const std::size_t count = std::min(wave, n_blocks - first);
    parallel_for(count, workers, [&](std::size_t slot) {
      thread_local ShortestPathTree tree;
      thread_local std::vector<double> pending;
      pending.assign(g.node_count(), 0.0);
      auto& vol = partial[slot];
      vol.setZero(m);
      const std::size_t block = first + slot;
      const std::size_t end = std::min(n_origins, (block + 1) * kOriginBlock);
      for (std::size_t k = block * kOriginBlock; k < end; ++k) {
        shortest_path_tree(g, weights, od.origins()[k], tree);
        load_origin(g, od, k, tree, pending, vol);
      }
    });
    for (std::size_t slot = 0; slot < count; ++slot) total += partial[slot];
  }
  return total;
}

double line_search(const BprTable& bpr, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   double tolerance) {
  const Eigen::ArrayXd d = (y - x).array();
  if ((d == 0.0).all()) return 0.0;
  auto slope = [&](double step) {
    return (d * congested_times(bpr, x.array() + step * d)).sum();
  };
  if (slope(0.0) >= 0.0) return 0.0;
  if (slope(1.0) <= 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo >= tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double s = slope(mid);
    if (s == 0.0) return mid;
    (s < 0.0 ? lo : hi) = mid;
  }
  return lo;
}

AssignmentState frank_wolfe(const RoadGraph& g, const OdMatrix& od, const FwConfig& cfg) {
  const BprTable bpr = BprTable::from_graph(g);
  AssignmentState st;
  st.volumes = all_or_nothing(g, od, bpr.t0.matrix(), cfg.workers);
  if (cfg.keep_directions) {
    st.directions.push_back(st.volumes);
    st.direction_weights.push_back(1.0);
  }

  double best = std::numeric_limits<double>::infinity();
  for (int k = 1;; ++k) {
    st.times = congested_times(bpr, st.volumes.array()).matrix();
    const Eigen::VectorXd y = all_or_nothing(g, od, st.times, cfg.workers);
    const double current = st.volumes.dot(st.times);
    const double least = y.dot(st.times);
    const double gap = current > 0.0 ? std::max(0.0, (current - least) / current) : 0.0;
    best = std::min(best, gap);

    FwIterate it;
    it.iteration = k;
    it.relative_gap = gap;
    it.best_gap = best;
    it.objective = beckmann_objective(bpr, st.volumes.array());
    st.iterations = k;
    st.relative_gap = gap;
    st.objective = it.objective;
    if (gap < cfg.gap_tolerance || k >= cfg.max_iterations) {
      st.converged = gap < cfg.gap_tolerance;
      st.trace.push_back(it);
      break;
    }
    it.step = line_search(bpr, st.volumes, y, cfg.line_search_tolerance);
    st.trace.push_back(it);
    st.volumes = (1.0 - it.step) * st.volumes + it.step * y;
    if (cfg.keep_directions) {
      for (auto& w : st.direction_weights) w *= 1.0 - it.step;
      st.directions.push_back(y);
      st.direction_weights.push_back(it.step);
    }
  }
  return st;
}

std::string flows_csv(const RoadGraph& g, const AssignmentState& state) {
  std::string out = "from,to,key,volume_vps,congested_time_s\n";
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    const auto i = static_cast<Eigen::Index>(e);
    out += csv::row(ed.from, ed.to, ed.key, state.volumes(i), state.times(i));
  }
  return out;
}

}  // namespace roadsim
