#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "roadsim/edge_attributes.hpp"
#include "roadsim/error.hpp"

using namespace roadsim;
using fixtures::edge;
using fixtures::node_at;

TEST_CASE("lane buckets saturate at four") {
  CHECK(lane_bucket(1) == 0);
  CHECK(lane_bucket(3) == 2);
  CHECK(lane_bucket(4) == 3);
  CHECK(lane_bucket(9) == 3);
  CHECK_THROWS_AS(lane_bucket(0), NonPositiveInput);
}

TEST_CASE("default speed and capacity lookups") {
  CHECK(infer_free_flow_speed(RoadType::motorway, 3) == 65.0);
  CHECK(infer_free_flow_speed(RoadType::motorway, 2) == 50.0);
  CHECK(infer_free_flow_speed(RoadType::unclassified, 6) == 20.0);
  CHECK(infer_capacity(RoadType::motorway_link, 5) == 2200.0);
  CHECK(infer_capacity(RoadType::trunk, 1) == 1900.0);
  CHECK(infer_capacity(RoadType::unclassified, 2) == 800.0);
  CHECK_THROWS_AS(infer_free_flow_speed(RoadType::other, 1), UnknownRoadType);
  CHECK_THROWS_AS(infer_capacity(RoadType::primary, 0), NonPositiveInput);
}

TEST_CASE("free-flow time") {
  CHECK(free_flow_time(100.0, 10.0) == 10.0);
  CHECK_THROWS_AS(free_flow_time(0.0, 10.0), NonPositiveInput);
  CHECK_THROWS_AS(free_flow_time(100.0, 0.0), NonPositiveInput);
}

TEST_CASE("lane imputation uses the per-type median of tagged edges") {
  std::vector<NodeRecord> nodes;
  for (int i = 1; i <= 6; ++i) nodes.push_back(node_at(i, 100.0 * i, 0));
  const RoadGraph g(nodes, {edge(1, 2, 10, RoadType::primary, 2), edge(2, 3, 10, RoadType::primary, 3),
                            edge(3, 4, 10, RoadType::primary, std::nullopt),
                            edge(4, 5, 10, RoadType::tertiary, std::nullopt),
                            edge(5, 6, 10, RoadType::secondary, 1),
                            edge(6, 1, 10, RoadType::secondary, 4),
                            edge(6, 5, 10, RoadType::secondary, 4),
                            edge(5, 4, 10, RoadType::secondary, std::nullopt)});
  const auto out = impute_lanes(g);
  auto find = [&](NodeId a, NodeId b) {
    for (const auto& e : out.edges())
      if (e.from == a && e.to == b) return e;
    FAIL("edge missing");
    return EdgeRecord{};
  };
  // {2, 3}: mean of the middle pair rounded half-up.
  CHECK(find(3, 4).lanes == 3);
  CHECK(find(3, 4).lanes_imputed);
  CHECK_FALSE(find(1, 2).lanes_imputed);
  // No tagged tertiary edge: fall back to one lane.
  CHECK(find(4, 5).lanes == 1);
  // {1, 4, 4}: odd count takes the middle value.
  CHECK(find(5, 4).lanes == 4);
}

TEST_CASE("BPR coefficients from tags and tables") {
  const RoadGraph g({node_at(1, 0, 0), node_at(2, 1000, 0)},
                    {edge(1, 2, 1000, RoadType::motorway, 3), edge(2, 1, 1000, RoadType::primary, 2, 25.0)});
  const auto out = compute_bpr_coefficients(g, 0.15, 4.0);
  const auto& m = *out.edge(0).bpr;
  CHECK(m.speed_source == SpeedSource::table);
  CHECK(m.free_flow_speed_mps == 65.0 * 0.44704);
  CHECK(m.capacity_vps == 2000.0 * 3 / 3600.0);
  CHECK(m.t0 == 1000.0 / (65.0 * 0.44704));
  CHECK(m.a0 == m.t0);
  CHECK(m.a4 == doctest::Approx(m.t0 * 0.15 / std::pow(m.capacity_vps, 4)).epsilon(1e-14));
  const auto& p = *out.edge(1).bpr;
  CHECK(p.speed_source == SpeedSource::tagged);
  CHECK(p.free_flow_speed_mps == 25.0 * 0.44704);

  const RoadGraph missing({node_at(1, 0, 0), node_at(2, 10, 0)},
                          {edge(1, 2, 10, RoadType::primary, std::nullopt)});
  CHECK_THROWS_AS(compute_bpr_coefficients(missing), NonPositiveInput);
}

TEST_CASE("BPR curve") {
  BprCoefficients c;
  c.t0 = 20.0;
  c.capacity_vps = 0.5;
  c.a0 = 20.0;
  c.a4 = 20.0 * 0.15 / std::pow(0.5, 4);
  CHECK(bpr_time(c, 0.0) == 20.0);
  CHECK(bpr_time(c, 0.5) == doctest::Approx(23.0).epsilon(1e-14));
  CHECK(bpr_time(c, 1.0) == doctest::Approx(20.0 * (1 + 0.15 * 16)).epsilon(1e-14));
  CHECK(bpr_time_polynomial(c, 0.8) == doctest::Approx(bpr_time(c, 0.8)).epsilon(1e-13));
  CHECK_THROWS_AS(bpr_time(c, -1.0), NegativeVolume);
  CHECK_THROWS_AS(bpr_time_polynomial(c, -1.0), NegativeVolume);
}
