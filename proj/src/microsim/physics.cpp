#include "roadsim/microsim/physics.hpp"

#include <algorithm>
#include <cmath>

#include "roadsim/types.hpp"

namespace roadsim::sim {

std::string_view to_string(VehicleClass c) { return c == VehicleClass::car ? "car" : "truck"; }

double idm_acceleration(double v, double v0, double gap, double dv, const VehicleParams& p) {
  const double free = 1.0 - std::pow(v / v0, 4);
  if (std::isinf(gap)) return p.a_max * free;
  const double desired = p.s0 + p.T * v + v * dv / (2.0 * std::sqrt(p.a_max * p.b_comf));
  const double ratio = desired / gap;
  return p.a_max * (free - ratio * ratio);
}

double co_emission_rate(double v_mph) {
  const double d = v_mph - 50.0;
  return -0.064 + 0.0056 * v_mph + 0.00026 * d * d;
}

double fuel_rate(double v, double a) {
  double power = 0.269 * v + 0.0171 * v * v + 0.000672 * v * v * v;
  if (a > 0.0) power += 1.680 * a * v + 0.79296 * a * a * v;
  return std::max(kIdleFuelRate, kIdleFuelRate + 0.072 * power);
}

}  // namespace roadsim::sim
