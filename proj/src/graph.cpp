#include "roadsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "roadsim/error.hpp"
#include "roadsim/geo.hpp"

namespace roadsim {

RoadGraph::RoadGraph(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end(),
            [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (!(n.lat >= -90.0 && n.lat <= 90.0 && n.lon >= -180.0 && n.lon <= 180.0))
      throw InvalidGraph("node " + std::to_string(n.id) + " has out-of-range coordinates");
    if (i > 0 && nodes_[i - 1].id == n.id)
      throw InvalidGraph("duplicate node id " + std::to_string(n.id));
    index_.emplace(n.id, i);
  }

  std::sort(edges_.begin(), edges_.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    return std::tie(a.from, a.to, a.key) < std::tie(b.from, b.to, b.key);
  });
  const std::size_t n = nodes_.size(), m = edges_.size();
  from_.resize(m);
  to_.resize(m);
  std::vector<std::size_t> out_deg(n, 0), in_deg(n, 0);
  for (std::size_t e = 0; e < m; ++e) {
    const auto& ed = edges_[e];
    if (e > 0) {
      const auto& prev = edges_[e - 1];
      if (prev.from == ed.from && prev.to == ed.to && prev.key == ed.key)
        throw InvalidGraph("duplicate edge " + std::to_string(ed.from) + "->" +
                           std::to_string(ed.to) + " key " + std::to_string(ed.key));
    }
    const auto fi = index_.find(ed.from);
    const auto ti = index_.find(ed.to);
    if (fi == index_.end() || ti == index_.end()) throw DanglingEdge(ed.from, ed.to);
    if (!(ed.length > 0.0))
      throw InvalidGraph("edge " + std::to_string(ed.from) + "->" + std::to_string(ed.to) +
                         " has non-positive length");
    from_[e] = fi->second;
    to_[e] = ti->second;
    ++out_deg[fi->second];
    ++in_deg[ti->second];
  }

  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    out_offsets_[i + 1] = out_offsets_[i] + out_deg[i];
    in_offsets_[i + 1] = in_offsets_[i] + in_deg[i];
  }
  // Edges are sorted by from id, so out-lists are already contiguous.
  out_list_.resize(m);
  std::iota(out_list_.begin(), out_list_.end(), std::size_t{0});
  in_list_.resize(m);
  std::vector<std::size_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t e = 0; e < m; ++e) in_list_[cursor[to_[e]]++] = e;
}

std::optional<std::size_t> RoadGraph::find_node(NodeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t RoadGraph::node_index(NodeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw InvalidGraph("unknown node id " + std::to_string(id));
  return it->second;
}

double RoadGraph::total_length() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.length;
  return total;
}

RoadGraph induced_subgraph(const RoadGraph& g, std::span<const std::size_t> node_indices) {
  std::vector<char> keep(g.node_count(), 0);
  std::vector<NodeRecord> nodes;
  nodes.reserve(node_indices.size());
  for (auto i : node_indices) {
    keep[i] = 1;
    nodes.push_back(g.node(i));
  }
  std::vector<EdgeRecord> edges;
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (keep[g.from_index(e)] && keep[g.to_index(e)]) edges.push_back(g.edge(e));
  return RoadGraph(std::move(nodes), std::move(edges));
}

RoadGraph filter_by_road_type(const RoadGraph& g, const std::set<RoadType>& keep) {
  if (keep.empty()) throw InvalidGraph("filter_by_road_type: empty keep set");
  std::vector<char> touched(g.node_count(), 0);
  std::vector<EdgeRecord> edges;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!keep.contains(g.edge(e).road_type)) continue;
    edges.push_back(g.edge(e));
    touched[g.from_index(e)] = 1;
    touched[g.to_index(e)] = 1;
  }
  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (touched[i]) nodes.push_back(g.node(i));
  return RoadGraph(std::move(nodes), std::move(edges));
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const RoadGraph& g) {
  // Iterative Tarjan.
  const std::size_t n = g.node_count();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next out-edge slot)
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, slot] = call.back();
      const auto outs = g.out_edges(v);
      if (slot < outs.size()) {
        const std::size_t w = g.to_index(outs[slot++]);
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }
  return comps;
}

RoadGraph largest_scc(const RoadGraph& g) {
  if (g.empty()) throw EmptyGraph();
  const auto comps = strongly_connected_components(g);
  // Node indices follow id order, so comp.front() is the smallest id.
  const auto best = std::min_element(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return induced_subgraph(g, *best);
}

namespace {

struct NeighborSets {
  std::vector<std::size_t> in, out;  // distinct neighbor node indices, sorted
  bool self_loop = false;
};

NeighborSets neighbors_of(const RoadGraph& g, std::size_t i) {
  NeighborSets s;
  for (auto e : g.in_edges(i)) {
    if (g.from_index(e) == i) s.self_loop = true;
    s.in.push_back(g.from_index(e));
  }
  for (auto e : g.out_edges(i)) {
    if (g.to_index(e) == i) s.self_loop = true;
    s.out.push_back(g.to_index(e));
  }
  for (auto* v : {&s.in, &s.out}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return s;
}

}  // namespace

bool is_interstitial(const RoadGraph& g, std::size_t i) {
  const std::size_t indeg = g.in_edges(i).size(), outdeg = g.out_edges(i).size();
  if (!((indeg == 1 && outdeg == 1) || (indeg == 2 && outdeg == 2))) return false;
  const auto s = neighbors_of(g, i);
  if (s.self_loop) return false;
  if (indeg == 1) return s.in.front() != s.out.front();
  return s.in.size() == 2 && s.in == s.out;
}

namespace {

std::vector<LatLon> edge_polyline(const RoadGraph& g, std::size_t e) {
  const auto& ed = g.edge(e);
  if (!ed.geometry.empty()) return ed.geometry;
  return {g.node(g.from_index(e)).position(), g.node(g.to_index(e)).position()};
}

EdgeRecord merge_chain(const RoadGraph& g, const std::vector<std::size_t>& chain) {
  EdgeRecord out;
  out.from = g.edge(chain.front()).from;
  out.to = g.edge(chain.back()).to;

  std::array<int, kRoadTypeCount> counts{};
  for (auto e : chain) {
    const auto& ed = g.edge(e);
    out.length += ed.length;
    ++counts[static_cast<std::size_t>(ed.road_type)];
    if (ed.lanes) out.lanes = out.lanes ? std::min(*out.lanes, *ed.lanes) : *ed.lanes;
    if (ed.maxspeed_mph)
      out.maxspeed_mph = out.maxspeed_mph ? std::min(*out.maxspeed_mph, *ed.maxspeed_mph)
                                          : *ed.maxspeed_mph;
  }
  const int top = *std::max_element(counts.begin(), counts.end());
  double longest = -1.0;
  for (auto e : chain) {
    const auto& ed = g.edge(e);
    if (counts[static_cast<std::size_t>(ed.road_type)] == top && ed.length > longest) {
      longest = ed.length;
      out.road_type = ed.road_type;
    }
  }

  std::vector<LatLon> geom;
  for (auto e : chain) {
    auto pts = edge_polyline(g, e);
    auto first = pts.begin();
    if (!geom.empty() && geom.back() == pts.front()) ++first;
    geom.insert(geom.end(), first, pts.end());
  }
  // Straight fills for edges without geometry may not match the recorded
  // lengths; keep the polyline only when it stays within 1%.
  if (geom.size() >= 2 && std::abs(polyline_length(geom) - out.length) <= 0.01 * out.length)
    out.geometry = std::move(geom);
  return out;
}

// One contraction sweep. Returns nullopt when no node is interstitial.
std::optional<RoadGraph> simplify_pass(const RoadGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<char> inter(n, 0);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) any |= (inter[i] = is_interstitial(g, i));
  if (!any) return std::nullopt;

  std::vector<char> used(g.edge_count(), 0);
  std::vector<std::vector<std::size_t>> chains;

  auto walk = [&](std::size_t start, std::size_t first_edge) {
    std::vector<std::size_t> chain{first_edge};
    used[first_edge] = 1;
    std::size_t prev = start, cur = g.to_index(first_edge);
    for (std::size_t guard = 0; inter[cur] && guard <= g.edge_count(); ++guard) {
      std::size_t next = static_cast<std::size_t>(-1);
      for (auto e : g.out_edges(cur))
        if (g.to_index(e) != prev) next = e;
      chain.push_back(next);
      used[next] = 1;
      prev = cur;
      cur = g.to_index(next);
    }
    chains.push_back(std::move(chain));
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (inter[i]) continue;
    for (auto e : g.out_edges(i))
      if (inter[g.to_index(e)]) walk(i, e);
  }
  // Whatever is left are rings made only of interstitial nodes; each ring
  // keeps its smallest node and collapses into self-loops on it.
  for (std::size_t i = 0; i < n; ++i) {
    if (!inter[i]) continue;
    bool pending = false;
    for (auto e : g.out_edges(i)) pending |= !used[e];
    if (!pending) continue;
    inter[i] = 0;
    for (auto e : g.out_edges(i))
      if (!used[e]) walk(i, e);
  }

  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < n; ++i)
    if (!inter[i]) nodes.push_back(g.node(i));

  std::vector<EdgeRecord> edges;
  std::map<std::pair<NodeId, NodeId>, std::set<int>> keys;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (used[e] || inter[g.from_index(e)]) continue;
    edges.push_back(g.edge(e));
    keys[{g.edge(e).from, g.edge(e).to}].insert(g.edge(e).key);
  }
  for (const auto& chain : chains) {
    auto merged = merge_chain(g, chain);
    auto& taken = keys[{merged.from, merged.to}];
    int k = 0;
    while (taken.contains(k)) ++k;
    taken.insert(k);
    merged.key = k;
    edges.push_back(std::move(merged));
  }
  return RoadGraph(std::move(nodes), std::move(edges));
}

}  // namespace

RoadGraph simplify_topology(const RoadGraph& g) {
  RoadGraph cur = g;
  while (auto next = simplify_pass(cur)) cur = std::move(*next);
  return cur;
}

}  // namespace roadsim
