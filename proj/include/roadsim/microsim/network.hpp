#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "roadsim/graph.hpp"

namespace roadsim::sim {

enum class Control : std::uint8_t { uncontrolled, stop, signal };

/// Per-edge quantities the simulator reads every step, plus per-node turn
/// geometry. Built once from an enriched graph.
class SimNetwork {
 public:
  /// Requires BPR coefficients on every edge. `controls` is indexed by node
  /// index; empty means all uncontrolled.
  SimNetwork(const RoadGraph& g, std::vector<Control> controls = {});

  const RoadGraph& graph() const { return *graph_; }
  std::size_t edge_count() const { return length_.size(); }
  std::size_t node_count() const { return graph_->node_count(); }

  double length(std::size_t e) const { return length_[e]; }
  int lanes(std::size_t e) const { return lanes_[e]; }
  double speed(std::size_t e) const { return speed_[e]; }
  std::size_t cells(std::size_t e) const { return cells_[e]; }
  std::size_t from(std::size_t e) const { return graph_->from_index(e); }
  std::size_t to(std::size_t e) const { return graph_->to_index(e); }
  Control control(std::size_t node) const { return control_[node]; }

  /// Position of e among the in-edges of its head node.
  std::size_t in_rank(std::size_t e) const { return in_rank_[e]; }
  /// Position of e among the out-edges of its tail node.
  std::size_t out_rank(std::size_t e) const { return out_rank_[e]; }

  /// Lane a vehicle on `in` must occupy to turn onto `out` (which must leave
  /// the head of `in`). Out-edges are ranked by turn angle, rightmost first,
  /// and spread over the lanes with lane 0 rightmost. Returns -1 when there
  /// is no choice to make.
  int required_lane(std::size_t in, std::size_t out) const;

 private:
  const RoadGraph* graph_;
  std::vector<double> length_, speed_;
  std::vector<int> lanes_;
  std::vector<std::size_t> cells_;
  std::vector<Control> control_;
  std::vector<std::size_t> in_rank_, out_rank_;
  // For each edge e, the turn rank of every out-edge of to(e), aligned with
  // graph.out_edges(to(e)).
  std::vector<std::size_t> turn_offsets_{0};
  std::vector<std::uint32_t> turn_rank_;
};

}  // namespace roadsim::sim
