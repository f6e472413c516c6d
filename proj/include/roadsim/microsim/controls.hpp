#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <vector>

#include "roadsim/microsim/network.hpp"

namespace roadsim::sim {

/// `node_id,control` with control stop|signal. Nodes absent from the file, or
/// absent from the graph, are uncontrolled. Result is indexed by node index.
std::vector<Control> read_controls_csv(const std::filesystem::path& path, const RoadGraph& g);

/// Fixed-time signal: every (inbound, outbound) pair of the node gets its own
/// phase, cycled in order.
bool signal_allows(const SimNetwork& net, std::size_t in_edge, std::size_t out_edge, double t,
                   double phase_duration);

/// One-at-a-time admission for a stop-controlled node.
class StopQueue {
 public:
  /// Adds the vehicle unless already queued or granted. Call in ascending
  /// vehicle id within a step so that ties at equal time go to the lower id.
  void enqueue(std::uint32_t vehicle);
  /// Grants the head of the queue when nobody holds the node.
  void grant_next();
  void release() { granted_.reset(); }
  std::optional<std::uint32_t> granted() const { return granted_; }
  std::size_t waiting() const { return queue_.size(); }
  bool contains(std::uint32_t vehicle) const;

 private:
  std::deque<std::uint32_t> queue_;
  std::optional<std::uint32_t> granted_;
};

}  // namespace roadsim::sim
