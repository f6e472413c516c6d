#include "roadsim/shortest_path.hpp"

#include <algorithm>
#include <functional>
#include <utility>

namespace roadsim {

void shortest_path_tree(const RoadGraph& g, std::span<const double> weights, std::size_t source,
                        ShortestPathTree& tree) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n = g.node_count();
  tree.source = source;
  tree.dist.assign(n, kInf);
  tree.pred_edge.assign(n, kNoEdge);
  tree.order.clear();
  tree.order.reserve(n);

  using Entry = std::pair<double, std::size_t>;
  std::vector<Entry> heap;
  heap.reserve(n);
  std::vector<char> settled(n, 0);
  const auto cmp = std::greater<Entry>{};

  tree.dist[source] = 0.0;
  heap.emplace_back(0.0, source);
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const auto [d, u] = heap.back();
    heap.pop_back();
    if (settled[u]) continue;
    settled[u] = 1;
    tree.order.push_back(u);
    for (auto e : g.out_edges(u)) {
      const std::size_t v = g.to_index(e);
      const double nd = d + weights[e];
      if (nd < tree.dist[v]) {
        tree.dist[v] = nd;
        tree.pred_edge[v] = e;
        heap.emplace_back(nd, v);
        std::push_heap(heap.begin(), heap.end(), cmp);
      } else if (nd == tree.dist[v] && v != source) {
        // Positive weights: every tied predecessor is settled before v, so
        // this comparison sees all of them.
        const std::size_t cur = tree.pred_edge[v];
        const std::size_t cur_from = g.from_index(cur);
        if (u < cur_from || (u == cur_from && e < cur)) tree.pred_edge[v] = e;
      }
    }
  }
}

std::vector<std::size_t> extract_path(const RoadGraph& g, const ShortestPathTree& tree,
                                      std::size_t target) {
  std::vector<std::size_t> path;
  if (!tree.reached(target)) return path;
  for (std::size_t v = target; v != tree.source;) {
    const std::size_t e = tree.pred_edge[v];
    path.push_back(e);
    v = g.from_index(e);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace roadsim
