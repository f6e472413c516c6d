#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace roadsim::sim {

enum class VehicleClass : std::uint8_t { car, truck };

std::string_view to_string(VehicleClass c);

/// Car-following parameters. Units: m/s², s, m.
struct VehicleParams {
  VehicleClass cls = VehicleClass::car;
  double a_max = 1.5;
  double b_comf = 2.0;
  double T = 1.6;
  double s0 = 2.0;
  double length = 5.0;
  /// Desired speed as a fraction of the edge's free-flow speed.
  double v0_factor = 1.0;

  static VehicleParams car() { return {}; }
  static VehicleParams truck() {
    return {VehicleClass::truck, 0.8, 1.5, 1.8, 3.0, 12.0, 0.9};
  }
};

inline constexpr double kNoLeader = std::numeric_limits<double>::infinity();

/// Intelligent Driver Model acceleration. `gap` is bumper to bumper (use
/// kNoLeader when nothing is ahead); `dv` = v - v_leader, positive when
/// closing in.
double idm_acceleration(double v, double v0, double gap, double dv, const VehicleParams& p);

/// CO emission rate in g/s for a speed in mph.
double co_emission_rate(double v_mph);

/// Fuel rate in mL/s for speed in m/s and acceleration in m/s². The power
/// terms in `a` only apply while accelerating; never below the idle rate.
double fuel_rate(double v_mps, double a_mps2);

inline constexpr double kIdleFuelRate = 0.666;

}  // namespace roadsim::sim
