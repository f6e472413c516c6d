#pragma once

#include <cstdint>
#include <optional>

#include "roadsim/microsim/physics.hpp"

namespace roadsim::sim {

enum class LaneMode : std::uint8_t { discretionary, mandatory };

/// Per-step chance of switching to mandatory mode at `dist_to_exit` meters
/// from the end of the edge: exp(-(x / lambda)^2).
double mandatory_probability(double dist_to_exit, double lambda);

struct Follower {
  double v;
  const VehicleParams* params;
};

/// Lead gap must cover s0 + T v of the changer and lag gap the follower's own
/// s0 + T v. Bounds are inclusive. Negative gaps (overlap) always fail.
bool gap_acceptance(double lead_gap, double lag_gap, double v_self, const VehicleParams& self,
                    std::optional<Follower> follower);

/// What the vehicle sees in one adjacent lane.
struct AdjacentLane {
  bool exists = false;
  double lead_gap = kNoLeader;
  bool acceptable = false;  // gap_acceptance result
};

struct LaneChangeInput {
  int lane = 0;
  int required_lane = -1;  // -1 when any lane will do
  double dist_to_exit = kNoLeader;
  LaneMode mode = LaneMode::discretionary;
  double current_lead_gap = kNoLeader;
  AdjacentLane right;  // lane - 1
  AdjacentLane left;   // lane + 1
  double draw = 1.0;   // uniform in [0, 1)
  double lambda = 300.0;
  double gain_m = 10.0;
};

struct LaneChangeResult {
  LaneMode mode;
  int lane;
};

/// Mode update followed by at most one lane move. Mandatory mode steers
/// toward the required lane; discretionary mode takes a lane whose leader is
/// at least gain_m farther away, provided it does not move away from the
/// required lane close to the exit.
LaneChangeResult lane_change_decision(const LaneChangeInput& in);

/// Counter-based uniform draw in [0, 1): a pure function of its arguments.
double hashed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace roadsim::sim
