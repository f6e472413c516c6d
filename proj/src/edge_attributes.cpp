#include "roadsim/edge_attributes.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "roadsim/error.hpp"

namespace roadsim {

namespace {

std::size_t table_row(RoadType type) {
  if (type == RoadType::other)
    throw UnknownRoadType("no default table entry for road type `other`");
  return static_cast<std::size_t>(type);
}

}  // namespace

int lane_bucket(int lanes) {
  if (lanes < 1) throw NonPositiveInput("lane count must be >= 1, got " + std::to_string(lanes));
  return std::min(lanes, 4) - 1;
}

double infer_free_flow_speed(RoadType type, int lanes) {
  return DefaultTables::speed_mph[table_row(type)][lane_bucket(lanes)];
}

double infer_capacity(RoadType type, int lanes) {
  return DefaultTables::capacity_vplph[table_row(type)][lane_bucket(lanes)];
}

double free_flow_time(double length_m, double speed_mps) {
  if (!(length_m > 0.0) || !(speed_mps > 0.0))
    throw NonPositiveInput("free-flow time needs positive length and speed");
  return length_m / speed_mps;
}

RoadGraph impute_lanes(const RoadGraph& g) {
  std::array<std::vector<int>, kRoadTypeCount> known;
  for (const auto& e : g.edges())
    if (e.lanes) known[static_cast<std::size_t>(e.road_type)].push_back(*e.lanes);

  std::array<int, kRoadTypeCount> median{};
  for (std::size_t t = 0; t < kRoadTypeCount; ++t) {
    auto& v = known[t];
    if (v.empty()) {
      median[t] = 1;
      continue;
    }
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    median[t] = v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid] + 1) / 2;
  }

  std::vector<EdgeRecord> edges(g.edges().begin(), g.edges().end());
  for (auto& e : edges) {
    if (e.lanes) continue;
    e.lanes = median[static_cast<std::size_t>(e.road_type)];
    e.lanes_imputed = true;
  }
  return RoadGraph({g.nodes().begin(), g.nodes().end()}, std::move(edges));
}

RoadGraph compute_bpr_coefficients(const RoadGraph& g, double alpha, double beta) {
  std::vector<EdgeRecord> edges(g.edges().begin(), g.edges().end());
  for (auto& e : edges) {
    if (!e.lanes)
      throw NonPositiveInput("edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                             " has no lane count; run impute_lanes first");
    BprCoefficients c;
    c.speed_source = e.maxspeed_mph ? SpeedSource::tagged : SpeedSource::table;
    const double mph = e.maxspeed_mph ? *e.maxspeed_mph : infer_free_flow_speed(e.road_type, *e.lanes);
    c.free_flow_speed_mps = mph * kMphToMps;
    c.capacity_vps = infer_capacity(e.road_type, *e.lanes) * *e.lanes / 3600.0;
    c.t0 = free_flow_time(e.length, c.free_flow_speed_mps);
    c.alpha = alpha;
    c.beta = beta;
    c.a0 = c.t0;
    c.a4 = c.t0 * alpha / std::pow(c.capacity_vps, beta);
    e.bpr = c;
  }
  return RoadGraph({g.nodes().begin(), g.nodes().end()}, std::move(edges));
}

double bpr_time(const BprCoefficients& c, double v) {
  if (v < 0.0) throw NegativeVolume(v);
  return c.t0 * (1.0 + c.alpha * std::pow(v / c.capacity_vps, c.beta));
}

double bpr_time_polynomial(const BprCoefficients& c, double v) {
  if (v < 0.0) throw NegativeVolume(v);
  return c.a0 + c.a4 * std::pow(v, c.beta);
}

}  // namespace roadsim
