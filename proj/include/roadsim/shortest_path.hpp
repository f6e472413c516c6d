#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "roadsim/graph.hpp"

namespace roadsim {

inline constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

/// Single-source shortest-path tree. Reusable across sources to avoid
/// reallocating per search.
struct ShortestPathTree {
  std::size_t source = 0;
  std::vector<double> dist;
  std::vector<std::size_t> pred_edge;  // kNoEdge for the source and unreached nodes
  std::vector<std::size_t> order;      // nodes in settle order, source first

  bool reached(std::size_t node) const {
    return dist[node] != std::numeric_limits<double>::infinity();
  }
};

/// Dijkstra over positive edge weights. Among equal-cost predecessors the one
/// with the smallest node id wins, then the smallest edge index, so trees are
/// fully deterministic.
void shortest_path_tree(const RoadGraph& g, std::span<const double> weights, std::size_t source,
                        ShortestPathTree& tree);

/// Edge indices from the tree's source to `target`, in travel order. Empty
/// when target == source or target is unreachable.
std::vector<std::size_t> extract_path(const RoadGraph& g, const ShortestPathTree& tree,
                                      std::size_t target);

}  // namespace roadsim
