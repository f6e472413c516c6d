#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "roadsim/bpr.hpp"
#include "roadsim/demand.hpp"
#include "roadsim/graph.hpp"

namespace roadsim {

/// Node-to-node demand grouped by origin node index, in veh/s. Departure
/// buckets are summed; same-node pairs are ignored.
class OdMatrix {
 public:
  struct Destination {
    std::size_t node;
    double rate;
  };

  /// `scale` converts the record units to veh/s (1/3600 for veh/hour).
  OdMatrix(const RoadGraph& g, std::span<const NodeDemand> demand, double scale = 1.0);

  std::span<const std::size_t> origins() const { return origins_; }
  std::span<const Destination> destinations(std::size_t k) const {
    return {dests_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
  }
  double total() const { return total_; }

 private:
  std::vector<std::size_t> origins_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Destination> dests_;
  double total_ = 0.0;
};

/// Loads every OD rate onto its shortest path under `times`. Per-origin
/// searches run on `workers` threads; partial loads are summed in a fixed
/// origin-block order, so the result is identical for any worker count.
/// Throws UnreachableDestination.
Eigen::VectorXd all_or_nothing(const RoadGraph& g, const OdMatrix& od,
                               const Eigen::VectorXd& times, int workers = 1);

/// Step in [0, 1] minimizing the Beckmann objective along x -> y, by bisection
/// on its derivative. Returns the lower end of the final bracket, so the
/// objective never increases.
double line_search(const BprTable& bpr, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   double tolerance = 1e-10);

struct FwConfig {
  int max_iterations = 200;
  double gap_tolerance = 1e-4;
  double line_search_tolerance = 1e-10;
  int workers = 1;
  /// Keep every search direction and its convex weight (small instances only).
  bool keep_directions = false;
};

struct FwIterate {
  int iteration = 0;
  double relative_gap = 0.0;
  double best_gap = 0.0;
  double objective = 0.0;
  double step = 0.0;
};

struct AssignmentState {
  Eigen::VectorXd volumes;  // veh/s per edge
  Eigen::VectorXd times;    // seconds per edge, BPR at `volumes`
  int iterations = 0;
  double relative_gap = 0.0;
  double objective = 0.0;
  bool converged = false;
  std::vector<FwIterate> trace;
  std::vector<Eigen::VectorXd> directions;
  std::vector<double> direction_weights;
};

/// Static user equilibrium by Frank-Wolfe. Starts from all-or-nothing at
/// free-flow times; stops when the relative gap drops below the tolerance or
/// after max_iterations (not an error: the state reports the gap reached).
AssignmentState frank_wolfe(const RoadGraph& g, const OdMatrix& od, const FwConfig& cfg = {});

/// `from,to,key,volume_vps,congested_time_s`
std::string flows_csv(const RoadGraph& g, const AssignmentState& state);

}  // namespace roadsim
