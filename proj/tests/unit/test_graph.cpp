#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "roadsim/csv.hpp"
#include "roadsim/error.hpp"
#include "roadsim/geo.hpp"
#include "roadsim/graph.hpp"
#include "roadsim/graph_io.hpp"

using namespace roadsim;
using fixtures::edge;
using fixtures::node_at;

namespace {

RoadGraph line_graph(std::vector<EdgeRecord> edges, int n) {
  std::vector<NodeRecord> nodes;
  for (int i = 1; i <= n; ++i) nodes.push_back(node_at(i, 100.0 * i, 0.0));
  return RoadGraph(std::move(nodes), std::move(edges));
}

// Floyd-Warshall over node ids, for the simplification oracle.
std::vector<std::vector<double>> all_pairs(const RoadGraph& g) {
  const std::size_t n = g.node_count();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto& x = d[g.from_index(e)][g.to_index(e)];
    if (g.from_index(e) != g.to_index(e)) x = std::min(x, g.edge(e).length);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace

TEST_CASE("graph sorts nodes and edges and builds adjacency") {
  std::vector<NodeRecord> nodes = {node_at(30, 0, 0), node_at(10, 100, 0), node_at(20, 200, 0)};
  std::vector<EdgeRecord> edges = {edge(20, 10, 100), edge(10, 30, 100), edge(10, 20, 100),
                                   edge(10, 20, 110, RoadType::primary, 1, std::nullopt, 1)};
  const RoadGraph g(nodes, edges);
  CHECK(g.node(0).id == 10);
  CHECK(g.node(2).id == 30);
  CHECK(g.edge(0).to == 20);
  CHECK(g.edge(1).key == 1);
  CHECK(g.edge(2).to == 30);
  CHECK(g.out_edges(g.node_index(10)).size() == 3);
  CHECK(g.in_edges(g.node_index(20)).size() == 2);
  CHECK(g.total_length() == doctest::Approx(410.0));
  CHECK_FALSE(g.find_node(99).has_value());
  CHECK_THROWS_AS(g.node_index(99), InvalidGraph);
}

TEST_CASE("graph rejects bad input") {
  std::vector<NodeRecord> nodes = {node_at(1, 0, 0), node_at(2, 100, 0)};
  CHECK_THROWS_AS(RoadGraph(nodes, {edge(1, 3, 10)}), DanglingEdge);
  CHECK_THROWS_AS(RoadGraph(nodes, {edge(1, 2, 10), edge(1, 2, 12)}), InvalidGraph);
  CHECK_THROWS_AS(RoadGraph({node_at(1, 0, 0), node_at(1, 5, 0)}, {}), InvalidGraph);
  CHECK_THROWS_AS(RoadGraph(nodes, {edge(1, 2, -1)}), InvalidGraph);
}

TEST_CASE("road type filter drops minor edges and isolated nodes") {
  const auto g = line_graph({edge(1, 2, 100, RoadType::primary), edge(2, 3, 100, RoadType::other),
                             edge(3, 4, 100, RoadType::other)},
                            4);
  const auto f = filter_by_road_type(g, {kMajorRoadTypes.begin(), kMajorRoadTypes.end()});
  CHECK(f.edge_count() == 1);
  CHECK(f.node_count() == 2);
  CHECK(f.find_node(1));
  CHECK_FALSE(f.find_node(4));
}

TEST_CASE("strongly connected components and largest component") {
  // Cycle 1-2-3, cycle 4-5-6, bridge 3->4, and a sink 7.
  const auto g = line_graph({edge(1, 2, 1), edge(2, 3, 1), edge(3, 1, 1), edge(3, 4, 1),
                             edge(4, 5, 1), edge(5, 6, 1), edge(6, 4, 1), edge(6, 7, 1)},
                            7);
  auto comps = strongly_connected_components(g);
  std::sort(comps.begin(), comps.end());
  REQUIRE(comps.size() == 3);
  CHECK(comps[0] == std::vector<std::size_t>{0, 1, 2});
  // Equal sizes: the component holding the smallest id wins.
  const auto big = largest_scc(g);
  CHECK(big.node_count() == 3);
  CHECK(big.node(0).id == 1);
  CHECK(big.edge_count() == 3);
  CHECK_THROWS_AS(largest_scc(RoadGraph{}), EmptyGraph);
}

TEST_CASE("scc handles a long path without recursion") {
  const int n = 200000;
  std::vector<EdgeRecord> edges;
  for (int i = 1; i < n; ++i) edges.push_back(edge(i, i + 1, 1));
  edges.push_back(edge(n, 1, 1));
  const auto g = line_graph(std::move(edges), n);
  CHECK(strongly_connected_components(g).size() == 1);
}

TEST_CASE("interstitial classification") {
  // 1 -> 2 -> 3 one-way; 3 <-> 4 <-> 5 two-way; 5 -> 1 closes it.
  const auto g = line_graph({edge(1, 2, 1), edge(2, 3, 1), edge(3, 4, 1), edge(4, 3, 1),
                             edge(4, 5, 1), edge(5, 4, 1), edge(5, 1, 1)},
                            5);
  CHECK(is_interstitial(g, g.node_index(2)));
  CHECK(is_interstitial(g, g.node_index(4)));
  CHECK(is_interstitial(g, g.node_index(1)));
  CHECK_FALSE(is_interstitial(g, g.node_index(3)));  // two in, one out
  CHECK_FALSE(is_interstitial(g, g.node_index(5)));
  // A dead-end stub is not a pass-through.
  const auto stub = line_graph({edge(1, 2, 1), edge(2, 1, 1)}, 2);
  CHECK_FALSE(is_interstitial(stub, 0));
}

TEST_CASE("simplification merges a one-way chain") {
  auto a = edge(1, 2, 100, RoadType::primary, 2, 40.0);
  auto b = edge(2, 3, 50, RoadType::secondary, 3, 30.0);
  auto c = edge(3, 4, 70, RoadType::secondary, std::nullopt, std::nullopt);
  auto back = edge(4, 1, 300, RoadType::primary, 1);
  auto stay = edge(1, 4, 10, RoadType::primary, 1);
  const auto g = line_graph({a, b, c, back, stay}, 4);
  const auto s = simplify_topology(g);
  CHECK(s.node_count() == 2);
  REQUIRE(s.edge_count() == 3);
  // The merged 1->4 edge takes the next free key after the existing one.
  const auto& merged = s.edge(1);
  CHECK(merged.from == 1);
  CHECK(merged.to == 4);
  CHECK(merged.key == 1);
  CHECK(merged.length == 220.0);
  CHECK(merged.road_type == RoadType::secondary);  // modal type
  CHECK(merged.lanes == 2);                        // minimum of defined counts
  CHECK(merged.maxspeed_mph == 30.0);
}

TEST_CASE("modal road type ties go to the longest constituent") {
  const auto g = line_graph({edge(1, 2, 100, RoadType::primary), edge(2, 3, 150, RoadType::tertiary),
                             edge(3, 1, 10, RoadType::primary), edge(3, 4, 10), edge(4, 3, 10),
                             edge(1, 4, 10), edge(3, 4, 12, RoadType::primary, 1, std::nullopt, 1)},
                            4);
  // Node 2 is the only interstitial node; the chain 1->2->3 has one primary
  // and one tertiary segment.
  const auto s = simplify_topology(g);
  const auto& e = s.edge(0);
  CHECK(e.from == 1);
  CHECK(e.to == 3);
  CHECK(e.road_type == RoadType::tertiary);
}

TEST_CASE("simplification merges a two-way chain into one edge per direction") {
  std::vector<EdgeRecord> edges;
  for (int i = 1; i < 5; ++i) {
    edges.push_back(edge(i, i + 1, 10.0 * i));
    edges.push_back(edge(i + 1, i, 10.0 * i));
  }
  // Make 1 and 5 intersections by giving each a third neighbour.
  for (auto [a, b] : {std::pair{1, 6}, {6, 5}, {1, 7}, {7, 5}}) {
    edges.push_back(edge(a, b, 5));
    edges.push_back(edge(b, a, 5));
  }
  const auto s = simplify_topology(line_graph(edges, 7));
  REQUIRE(s.find_node(1));
  CHECK_FALSE(s.find_node(3));
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& e : s.edges())
    if (e.length == 100.0) pairs.insert({e.from, e.to});
  CHECK(pairs == std::set<std::pair<NodeId, NodeId>>{{1, 5}, {5, 1}});
}

TEST_CASE("an interstitial ring collapses onto its smallest node") {
  const auto g = line_graph({edge(3, 1, 10), edge(1, 2, 20), edge(2, 3, 30)}, 3);
  const auto s = simplify_topology(g);
  REQUIRE(s.node_count() == 1);
  CHECK(s.node(0).id == 1);
  REQUIRE(s.edge_count() == 1);
  CHECK(s.edge(0).from == 1);
  CHECK(s.edge(0).to == 1);
  CHECK(s.edge(0).length == 60.0);
}

TEST_CASE("merged geometry is kept only when it matches the summed length") {
  const auto n1 = node_at(1, 0, 0), n2 = node_at(2, 100, 0), n3 = node_at(3, 200, 0),
             n4 = node_at(4, 200, 100);
  const double d12 = haversine(n1.position(), n2.position());
  const double d23 = haversine(n2.position(), n3.position());
  auto a = edge(1, 2, d12);
  auto b = edge(2, 3, d23);
  std::vector<EdgeRecord> edges = {a, b, edge(3, 4, 100), edge(4, 1, 250), edge(4, 3, 100),
                                   edge(1, 4, 250)};
  const auto s = simplify_topology(RoadGraph({n1, n2, n3, n4}, edges));
  const auto m = std::find_if(s.edges().begin(), s.edges().end(),
                              [](const EdgeRecord& e) { return e.from == 1 && e.to == 3; });
  REQUIRE(m != s.edges().end());
  CHECK(m->geometry.size() == 3);
  CHECK(polyline_length(m->geometry) == doctest::Approx(m->length).epsilon(0.01));

  // A recorded length far from the straight-line distance drops the geometry.
  edges[0].length = 3 * d12;
  const auto s2 = simplify_topology(RoadGraph({n1, n2, n3, n4}, edges));
  const auto m2 = std::find_if(s2.edges().begin(), s2.edges().end(),
                               [](const EdgeRecord& e) { return e.from == 1 && e.to == 3; });
  REQUIRE(m2 != s2.edges().end());
  CHECK(m2->geometry.empty());
}

TEST_CASE("simplification preserves distances between kept nodes on random graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 6 + static_cast<int>(rng() % 10);
    std::vector<EdgeRecord> edges;
    std::set<std::pair<int, int>> used;
    const int m = n + static_cast<int>(rng() % (2 * n));
    for (int k = 0; k < m; ++k) {
      const int a = 1 + static_cast<int>(rng() % n), b = 1 + static_cast<int>(rng() % n);
      if (a == b || !used.insert({a, b}).second) continue;
      const double len = 1.0 + static_cast<double>(rng() % 9);
      edges.push_back(edge(a, b, len));
      if (rng() % 2 && used.insert({b, a}).second) edges.push_back(edge(b, a, len));
    }
    const auto g = line_graph(edges, n);
    const auto s = simplify_topology(g);
    CAPTURE(trial);

    // No interstitial nodes survive and no length is lost.
    for (std::size_t i = 0; i < s.node_count(); ++i) CHECK_FALSE(is_interstitial(s, i));
    CHECK(s.total_length() == g.total_length());

    const auto dg = all_pairs(g), ds = all_pairs(s);
    for (std::size_t i = 0; i < s.node_count(); ++i)
      for (std::size_t j = 0; j < s.node_count(); ++j) {
        const auto gi = g.node_index(s.node(i).id), gj = g.node_index(s.node(j).id);
        CHECK(ds[i][j] == dg[gi][gj]);
      }
  }
}

TEST_CASE("graph files round-trip") {
  const auto dir = fixtures::scratch_dir("graph_io");
  auto g = fixtures::random_connected(20, 15, 3);
  std::vector<EdgeRecord> edges(g.edges().begin(), g.edges().end());
  edges[0].maxspeed_mph = 35.0;
  edges[1].lanes.reset();
  const auto n0 = g.node(g.from_index(0)).position(), n1 = g.node(g.to_index(0)).position();
  edges[0].geometry = {n0, n1};
  edges[0].length = haversine(n0, n1);
  g = RoadGraph({g.nodes().begin(), g.nodes().end()}, edges);

  csv::write_file(dir / "nodes.csv", nodes_csv(g));
  csv::write_file(dir / "edges.csv", edges_csv(g));
  CHECK(load_graph(dir / "nodes.csv", dir / "edges.csv") == g);

  const auto rich = fixtures::enrich(g);
  csv::write_file(dir / "edges_rich.csv", edges_csv(rich));
  const auto back = load_graph(dir / "nodes.csv", dir / "edges_rich.csv");
  CHECK(back == rich);
  CHECK(graphml(rich).find("<graphml") != std::string::npos);
}

TEST_CASE("malformed files report file and line") {
  const auto dir = fixtures::scratch_dir("graph_bad");
  csv::write_file(dir / "nodes.csv", "id,lat,lon\n1,37.8,-122.2\n2,37.81,-122.2\n");
  csv::write_file(dir / "edges.csv",
                  "from,to,key,road_type,length,lanes,maxspeed,geometry\n"
                  "1,2,0,primary,100,2,,\n"
                  "2,1,0,primary,abc,2,,\n");
  try {
    load_graph(dir / "nodes.csv", dir / "edges.csv");
    FAIL("expected MalformedRow");
  } catch (const MalformedRow& e) {
    CHECK(e.line() == 3);
    CHECK(e.file().find("edges.csv") != std::string::npos);
  }
  csv::write_file(dir / "edges2.csv",
                  "from,to,key,road_type,length,lanes,maxspeed,geometry\n1,9,0,primary,100,2,,\n");
  CHECK_THROWS_AS(load_graph(dir / "nodes.csv", dir / "edges2.csv"), DanglingEdge);
  csv::write_file(dir / "edges3.csv",
                  "from,to,key,road_type,length,lanes,maxspeed,geometry\n"
                  "1,2,0,primary,5000,2,,37.8 -122.2;37.81 -122.2\n");
  CHECK_THROWS_AS(load_graph(dir / "nodes.csv", dir / "edges3.csv"), MalformedRow);
}
