#pragma once

#include <Eigen/Core>

#include "roadsim/error.hpp"
#include "roadsim/graph.hpp"

namespace roadsim {

/// Column-wise view of the BPR coefficients of a graph, indexed by edge.
/// alpha and beta are global per run.
struct BprTable {
  Eigen::ArrayXd t0;
  Eigen::ArrayXd capacity;
  double alpha = 0.15;
  double beta = 4.0;

  Eigen::Index size() const { return t0.size(); }

  /// Throws InvalidGraph if an edge lacks coefficients or alpha/beta differ.
  static BprTable from_graph(const RoadGraph& g) {
    BprTable table;
    const auto m = static_cast<Eigen::Index>(g.edge_count());
    table.t0.resize(m);
    table.capacity.resize(m);
    for (Eigen::Index e = 0; e < m; ++e) {
      const auto& bpr = g.edge(static_cast<std::size_t>(e)).bpr;
      if (!bpr) throw InvalidGraph("edge without BPR coefficients; run the network stage first");
      if (e == 0) {
        table.alpha = bpr->alpha;
        table.beta = bpr->beta;
      } else if (bpr->alpha != table.alpha || bpr->beta != table.beta) {
        throw InvalidGraph("alpha/beta must be uniform across edges");
      }
      table.t0(e) = bpr->t0;
      table.capacity(e) = bpr->capacity_vps;
    }
    return table;
  }
};

/// Elementwise congested times t0 (1 + alpha (v/c)^beta).
template <typename Derived>
Eigen::ArrayXd congested_times(const BprTable& bpr, const Eigen::ArrayBase<Derived>& volumes) {
  return bpr.t0 * (1.0 + bpr.alpha * (volumes.derived() / bpr.capacity).pow(bpr.beta));
}

/// Sum over edges of the integral of the BPR curve from 0 to v:
/// t0 v + t0 alpha v^(beta+1) / ((beta+1) c^beta).
template <typename Derived>
double beckmann_objective(const BprTable& bpr, const Eigen::ArrayBase<Derived>& volumes) {
  const auto& v = volumes.derived();
  const double b1 = bpr.beta + 1.0;
  return (bpr.t0 * v +
          bpr.t0 * bpr.alpha * v.pow(b1) / (b1 * bpr.capacity.pow(bpr.beta)))
      .sum();
}

}  // namespace roadsim
