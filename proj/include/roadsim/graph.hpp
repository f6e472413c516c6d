#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "roadsim/types.hpp"

namespace roadsim {

enum class SpeedSource : std::uint8_t { tagged, table };

/// Congestion-function parameters of one edge. Units: seconds, veh/s, m/s.
struct BprCoefficients {
  double free_flow_speed_mps = 0.0;
  SpeedSource speed_source = SpeedSource::table;
  double capacity_vps = 0.0;
  double t0 = 0.0;
  double alpha = 0.15;
  double beta = 4.0;
  double a0 = 0.0;  // == t0
  double a4 = 0.0;  // == t0 * alpha / capacity^beta
  friend bool operator==(const BprCoefficients&, const BprCoefficients&) = default;
};

struct NodeRecord {
  NodeId id = 0;
  double lat = 0.0;
  double lon = 0.0;
  LatLon position() const { return {lat, lon}; }
  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct EdgeRecord {
  NodeId from = 0;
  NodeId to = 0;
  int key = 0;
  RoadType road_type = RoadType::other;
  double length = 0.0;                  // meters
  std::optional<int> lanes;
  std::optional<double> maxspeed_mph;
  std::vector<LatLon> geometry;         // empty when absent
  bool lanes_imputed = false;
  std::optional<BprCoefficients> bpr;
  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

/// Directed multigraph of intersections and road segments. Self-loops and
/// parallel edges are allowed. Nodes are kept sorted by id and edges by
/// (from, to, key); the position in those orders is the node/edge index used
/// by every algorithm in the library. Immutable once built.
class RoadGraph {
 public:
  RoadGraph() = default;
  /// Validates ids, coordinates, (from,to,key) uniqueness and endpoints.
  /// Throws InvalidGraph or DanglingEdge.
  RoadGraph(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges);

  std::span<const NodeRecord> nodes() const { return nodes_; }
  std::span<const EdgeRecord> edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }

  const NodeRecord& node(std::size_t i) const { return nodes_[i]; }
  const EdgeRecord& edge(std::size_t e) const { return edges_[e]; }

  std::optional<std::size_t> find_node(NodeId id) const;
  /// Throws InvalidGraph when absent.
  std::size_t node_index(NodeId id) const;

  std::size_t from_index(std::size_t e) const { return from_[e]; }
  std::size_t to_index(std::size_t e) const { return to_[e]; }

  /// Edge indices leaving / entering node i, ascending.
  std::span<const std::size_t> out_edges(std::size_t i) const {
    return {out_list_.data() + out_offsets_[i], out_offsets_[i + 1] - out_offsets_[i]};
  }
  std::span<const std::size_t> in_edges(std::size_t i) const {
    return {in_list_.data() + in_offsets_[i], in_offsets_[i + 1] - in_offsets_[i]};
  }

  double total_length() const;

  friend bool operator==(const RoadGraph& a, const RoadGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::size_t> from_, to_;
  std::vector<std::size_t> out_offsets_{0}, out_list_;
  std::vector<std::size_t> in_offsets_{0}, in_list_;
};

/// Keeps edges whose type is in `keep` and drops nodes left with degree 0.
RoadGraph filter_by_road_type(const RoadGraph& g, const std::set<RoadType>& keep);

/// Strongly connected components as lists of node indices (each ascending).
std::vector<std::vector<std::size_t>> strongly_connected_components(const RoadGraph& g);

/// Induced subgraph on the largest SCC; ties go to the component holding the
/// smallest node id. Throws EmptyGraph.
RoadGraph largest_scc(const RoadGraph& g);

/// True when node i is a pass-through point of a one-way or two-way chain.
bool is_interstitial(const RoadGraph& g, std::size_t i);

/// Contracts chains of interstitial nodes until none remain.
RoadGraph simplify_topology(const RoadGraph& g);

/// Induced subgraph on the given node indices.
RoadGraph induced_subgraph(const RoadGraph& g, std::span<const std::size_t> node_indices);

}  // namespace roadsim
