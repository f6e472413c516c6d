#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "roadsim/edge_attributes.hpp"
#include "roadsim/geo.hpp"
#include "roadsim/graph_io.hpp"

namespace fixtures {

namespace {

constexpr double kMetersPerDegree = 6371000.0 * 3.14159265358979323846 / 180.0;

double distance(const NodeRecord& a, const NodeRecord& b) {
  return roadsim::haversine(a.lat, a.lon, b.lat, b.lon);
}

}  // namespace

NodeRecord node_at(std::int64_t id, double x, double y) {
  const double lat = kLat0 + y / kMetersPerDegree;
  const double lon = kLon0 + x / (kMetersPerDegree * std::cos(kLat0 * 3.14159265358979323846 / 180.0));
  return {id, lat, lon};
}

EdgeRecord edge(std::int64_t from, std::int64_t to, double length, RoadType type,
                std::optional<int> lanes, std::optional<double> maxspeed_mph, int key) {
  EdgeRecord e;
  e.from = from;
  e.to = to;
  e.key = key;
  e.road_type = type;
  e.length = length;
  e.lanes = lanes;
  e.maxspeed_mph = maxspeed_mph;
  return e;
}

EdgeRecord bpr_edge(std::int64_t from, std::int64_t to, int key, double t0, double capacity_vps,
                    double speed_mps, int lanes) {
  EdgeRecord e = edge(from, to, t0 * speed_mps, RoadType::primary, lanes, std::nullopt, key);
  roadsim::BprCoefficients c;
  c.free_flow_speed_mps = speed_mps;
  c.capacity_vps = capacity_vps;
  c.t0 = t0;
  c.a0 = t0;
  c.a4 = t0 * 0.15 / std::pow(capacity_vps, 4.0);
  e.bpr = c;
  return e;
}

RoadGraph enrich(const RoadGraph& g) {
  return roadsim::compute_bpr_coefficients(roadsim::impute_lanes(g));
}

RoadGraph one_way_grid(int rows, int cols, double spacing, std::size_t extra_reverse,
                       std::uint64_t seed) {
  std::vector<NodeRecord> nodes;
  auto id = [&](int r, int c) { return static_cast<std::int64_t>(r) * cols + c + 1; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) nodes.push_back(node_at(id(r, c), c * spacing, r * spacing));
  auto at = [&](std::int64_t i) -> const NodeRecord& { return nodes[static_cast<std::size_t>(i - 1)]; };

  std::vector<EdgeRecord> edges;
  std::vector<std::pair<std::int64_t, std::int64_t>> segments;
  auto add = [&](std::int64_t a, std::int64_t b, bool major) {
    edges.push_back(edge(a, b, distance(at(a), at(b)), major ? RoadType::primary : RoadType::secondary,
                         major ? 2 : 1));
    segments.emplace_back(a, b);
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c) {
      const bool east = r % 2 == 0;
      add(east ? id(r, c) : id(r, c + 1), east ? id(r, c + 1) : id(r, c), r % 4 == 0);
    }
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r + 1 < rows; ++r) {
      const bool north = c % 2 == 1;
      add(north ? id(r, c) : id(r + 1, c), north ? id(r + 1, c) : id(r, c), c % 4 == 0);
    }

  std::mt19937_64 rng(seed);
  std::set<std::size_t> picked;
  std::uniform_int_distribution<std::size_t> pick(0, segments.size() - 1);
  while (picked.size() < std::min(extra_reverse, segments.size())) picked.insert(pick(rng));
  for (auto k : picked) {
    const auto [a, b] = segments[k];
    edges.push_back(edge(b, a, distance(at(a), at(b)), RoadType::tertiary, 1));
  }
  return RoadGraph(std::move(nodes), std::move(edges));
}

RoadGraph two_way_grid(int rows, int cols, double spacing, int lanes, RoadType type) {
  std::vector<NodeRecord> nodes;
  auto id = [&](int r, int c) { return static_cast<std::int64_t>(r) * cols + c + 1; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) nodes.push_back(node_at(id(r, c), c * spacing, r * spacing));
  std::vector<EdgeRecord> edges;
  auto both = [&](std::int64_t a, std::int64_t b) {
    const double len = distance(nodes[static_cast<std::size_t>(a - 1)], nodes[static_cast<std::size_t>(b - 1)]);
    edges.push_back(edge(a, b, len, type, lanes));
    edges.push_back(edge(b, a, len, type, lanes));
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) both(id(r, c), id(r, c + 1));
      if (r + 1 < rows) both(id(r, c), id(r + 1, c));
    }
  return RoadGraph(std::move(nodes), std::move(edges));
}

RoadGraph random_connected(std::size_t n, std::size_t chords, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 8000.0);
  std::uniform_real_distribution<double> len(200.0, 1200.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> lanes(1, 3);
  const RoadType types[] = {RoadType::primary, RoadType::secondary, RoadType::tertiary,
                            RoadType::trunk};
  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < n; ++i)
    nodes.push_back(node_at(static_cast<std::int64_t>(i + 1), coord(rng), coord(rng)));
  std::vector<EdgeRecord> edges;
  std::set<std::pair<std::size_t, std::size_t>> used;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b || !used.insert({a, b}).second) return;
    edges.push_back(edge(static_cast<std::int64_t>(a + 1), static_cast<std::int64_t>(b + 1),
                         len(rng), types[rng() % 4], lanes(rng)));
  };
  for (std::size_t i = 0; i < n; ++i) {
    add(i, (i + 1) % n);
    add((i + 1) % n, i);
  }
  for (std::size_t k = 0; k < chords; ++k) add(pick(rng), pick(rng));
  return RoadGraph(std::move(nodes), std::move(edges));
}

std::vector<NodeDemand> random_demand(const RoadGraph& g, std::size_t pairs, double lo, double hi,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, g.node_count() - 1);
  std::uniform_real_distribution<double> amount(lo, hi);
  std::set<std::pair<std::size_t, std::size_t>> used;
  std::vector<NodeDemand> out;
  while (out.size() < pairs) {
    const auto a = pick(rng), b = pick(rng);
    if (a == b || !used.insert({a, b}).second) continue;
    out.push_back({g.node(a).id, g.node(b).id, amount(rng), std::nullopt});
  }
  return out;
}

void write_scenario(const std::filesystem::path& dir, int trips_per_pair) {
  RoadGraph grid = two_way_grid(6, 6, 300.0, 1, RoadType::secondary);
  std::vector<NodeRecord> nodes(grid.nodes().begin(), grid.nodes().end());
  std::vector<EdgeRecord> edges(grid.edges().begin(), grid.edges().end());
  // Minor-road spurs are dropped by the road-type filter.
  for (int k = 0; k < 3; ++k) {
    const std::int64_t id = 100 + k;
    nodes.push_back(node_at(id, 1800.0 + 100.0 * k, -200.0));
    edges.push_back(edge(6, id, 250.0, RoadType::other));
    edges.push_back(edge(id, 6, 250.0, RoadType::other));
  }
  const RoadGraph g(std::move(nodes), std::move(edges));
  auto put = [&](const char* name, const std::string& text) {
    std::ofstream(dir / name, std::ios::binary) << text;
  };
  put("nodes.csv", roadsim::nodes_csv(g));
  put("edges.csv", roadsim::edges_csv(g));
  std::string zones = "zone_id,centroid_lat,centroid_lon\n";
  const std::pair<double, double> centers[] = {{310, 290}, {1190, 310}, {300, 1210}, {1220, 1190}};
  for (int z = 0; z < 4; ++z) {
    const auto n = node_at(z + 1, centers[z].first, centers[z].second);
    std::ostringstream row;
    row.precision(12);
    row << z + 1 << ',' << n.lat << ',' << n.lon << '\n';
    zones += row.str();
  }
  put("zones.csv", zones);
  std::string trips = "origin_zone,dest_zone,trips\n";
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b)
      if (a != b) trips += std::to_string(a) + ',' + std::to_string(b) + ',' + std::to_string(trips_per_pair) + '\n';
  put("trips.csv", trips);
  put("departures.csv", "bucket_start_s,bucket_end_s,frequency\n0,900,1\n900,1800,2\n");
  put("controls.csv", "node_id,control\n15,signal\n16,stop\n21,signal\n22,stop\n");
  const std::string d = dir.string() + "/";
  put("config.ini", "# generated scenario\nnodes = " + d + "nodes.csv\nedges = " + d + "edges.csv\n" +
                        "zones = " + d + "zones.csv\ntrips = " + d + "trips.csv\n" +
                        "departures = " + d + "departures.csv\ncontrols = " + d + "controls.csv\n" +
                        "out_dir = " + d + "out\n");
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("roadsim_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fixtures
