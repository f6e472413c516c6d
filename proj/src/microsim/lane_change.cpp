#include "roadsim/microsim/lane_change.hpp"

#include <cmath>
#include <cstdlib>

namespace roadsim::sim {

double mandatory_probability(double dist_to_exit, double lambda) {
  const double x = dist_to_exit / lambda;
  return std::exp(-x * x);
}

bool gap_acceptance(double lead_gap, double lag_gap, double v_self, const VehicleParams& self,
                    std::optional<Follower> follower) {
  if (lead_gap < 0.0 || lag_gap < 0.0) return false;
  if (lead_gap < self.s0 + self.T * v_self) return false;
  if (follower && lag_gap < follower->params->s0 + follower->params->T * follower->v) return false;
  return true;
}

LaneChangeResult lane_change_decision(const LaneChangeInput& in) {
  LaneChangeResult out{in.mode, in.lane};
  const bool has_target = in.required_lane >= 0 && in.required_lane != in.lane;
  if (!has_target) out.mode = LaneMode::discretionary;
  if (has_target && out.mode == LaneMode::discretionary &&
      in.draw < mandatory_probability(in.dist_to_exit, in.lambda))
    out.mode = LaneMode::mandatory;

  if (out.mode == LaneMode::mandatory) {
    const auto& side = in.required_lane < in.lane ? in.right : in.left;
    if (side.exists && side.acceptable) out.lane = in.lane + (in.required_lane < in.lane ? -1 : 1);
    return out;
  }

  if (std::isinf(in.current_lead_gap)) return out;
  auto allowed = [&](int target) {
    if (in.required_lane < 0 || in.dist_to_exit > in.lambda) return true;
    return std::abs(target - in.required_lane) <= std::abs(in.lane - in.required_lane);
  };
  auto wants = [&](const AdjacentLane& side, int target) {
    return side.exists && side.acceptable && allowed(target) &&
           side.lead_gap >= in.current_lead_gap + in.gain_m;
  };
  const bool right = wants(in.right, in.lane - 1);
  const bool left = wants(in.left, in.lane + 1);
  if (right && (!left || in.right.lead_gap >= in.left.lead_gap)) {
    out.lane = in.lane - 1;
  } else if (left) {
    out.lane = in.lane + 1;
  }
  return out;
}

double hashed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  const std::uint64_t h = mix(mix(mix(mix(seed) ^ a) ^ b) ^ c);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace roadsim::sim
