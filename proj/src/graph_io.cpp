#include "roadsim/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "roadsim/csv.hpp"
#include "roadsim/error.hpp"
#include "roadsim/geo.hpp"

namespace roadsim {

namespace {

constexpr std::string_view kNodeHeader[] = {"id", "lat", "lon"};
const std::vector<std::string_view> kEdgeColumns = {"from",  "to",    "key",      "road_type",
                                                    "length", "lanes", "maxspeed", "geometry"};
const std::vector<std::string_view> kEnrichedColumns = {
    "lanes_imputed", "free_flow_speed_mps", "capacity_vps", "t0_s", "a0", "a4"};

std::vector<LatLon> parse_geometry(const csv::Reader& r, const std::string& s) {
  std::vector<LatLon> pts;
  if (s.empty()) return pts;
  for (const auto& pair : csv::split(s, ';')) {
    const auto parts = csv::split(pair, ' ');
    if (parts.size() != 2) r.fail("geometry point `" + pair + "` is not `lat lon`");
    pts.push_back({r.to_double(parts[0], "geometry"), r.to_double(parts[1], "geometry")});
  }
  if (pts.size() < 2) r.fail("geometry needs at least two points");
  return pts;
}

std::string format_geometry(const std::vector<LatLon>& pts) {
  std::string out;
  for (const auto& p : pts) {
    if (!out.empty()) out += ';';
    out += csv::format_double(p.lat);
    out += ' ';
    out += csv::format_double(p.lon);
  }
  return out;
}

std::vector<NodeRecord> read_nodes(const std::filesystem::path& path) {
  csv::Reader r(path);
  r.expect_header_prefix({std::begin(kNodeHeader), std::end(kNodeHeader)});
  std::vector<NodeRecord> nodes;
  std::unordered_set<NodeId> seen;
  std::vector<std::string> f;
  while (r.next(f)) {
    if (f.size() != r.header().size()) r.fail("expected " + std::to_string(r.header().size()) + " fields");
    NodeRecord n{r.to_int(f[0], "id"), r.to_double(f[1], "lat"), r.to_double(f[2], "lon")};
    if (n.lat < -90 || n.lat > 90 || n.lon < -180 || n.lon > 180) r.fail("coordinates out of range");
    if (!seen.insert(n.id).second) r.fail("duplicate node id " + f[0]);
    nodes.push_back(n);
  }
  return nodes;
}

}  // namespace

RoadGraph load_graph(const std::filesystem::path& nodes_file,
                     const std::filesystem::path& edges_file, BprParameters params) {
  auto nodes = read_nodes(nodes_file);

  csv::Reader r(edges_file);
  r.expect_header_prefix(kEdgeColumns);
  bool enriched = false;
  if (r.header().size() != kEdgeColumns.size()) {
    auto full = kEdgeColumns;
    full.insert(full.end(), kEnrichedColumns.begin(), kEnrichedColumns.end());
    r.expect_header_prefix(full);
    if (r.header().size() != full.size()) throw MalformedRow(r.file(), 1, "unexpected extra columns");
    enriched = true;
  }

  std::vector<EdgeRecord> edges;
  std::vector<std::string> f;
  while (r.next(f)) {
    if (f.size() != r.header().size()) r.fail("expected " + std::to_string(r.header().size()) + " fields");
    EdgeRecord e;
    e.from = r.to_int(f[0], "from");
    e.to = r.to_int(f[1], "to");
    e.key = static_cast<int>(r.to_int(f[2], "key"));
    e.road_type = parse_road_type(f[3]);
    e.length = r.to_double(f[4], "length");
    if (!(e.length > 0)) r.fail("length must be positive");
    if (auto lanes = r.to_optional_int(f[5], "lanes")) {
      if (*lanes < 1) r.fail("lanes must be positive");
      e.lanes = static_cast<int>(*lanes);
    }
    if (auto ms = r.to_optional_double(f[6], "maxspeed")) {
      if (*ms <= 0) r.fail("maxspeed must be positive");
      e.maxspeed_mph = *ms;
    }
    e.geometry = parse_geometry(r, f[7]);
    if (!e.geometry.empty() &&
        std::abs(polyline_length(e.geometry) - e.length) > 0.01 * e.length)
      r.fail("geometry length disagrees with length by more than 1%");

    if (enriched && !f[9].empty()) {
      e.lanes_imputed = r.to_int(f[8], "lanes_imputed") != 0;
      BprCoefficients c;
      c.free_flow_speed_mps = r.to_double(f[9], "free_flow_speed_mps");
      c.speed_source = e.maxspeed_mph ? SpeedSource::tagged : SpeedSource::table;
      c.capacity_vps = r.to_double(f[10], "capacity_vps");
      c.t0 = r.to_double(f[11], "t0_s");
      c.a0 = r.to_double(f[12], "a0");
      c.a4 = r.to_double(f[13], "a4");
      c.alpha = params.alpha;
      c.beta = params.beta;
      if (c.t0 <= 0 || c.capacity_vps <= 0) r.fail("t0_s and capacity_vps must be positive");
      e.bpr = c;
    }
    edges.push_back(std::move(e));
  }
  try {
    return RoadGraph(std::move(nodes), std::move(edges));
  } catch (const InvalidGraph& ex) {
    throw MalformedRow(edges_file.string(), 0, ex.what());
  }
}

std::string nodes_csv(const RoadGraph& g) {
  std::string out = "id,lat,lon\n";
  for (const auto& n : g.nodes()) out += csv::row(n.id, n.lat, n.lon);
  return out;
}

std::string edges_csv(const RoadGraph& g) {
  const bool enriched = !g.edges().empty() &&
                        std::all_of(g.edges().begin(), g.edges().end(),
                                    [](const EdgeRecord& e) { return e.bpr.has_value(); });
  std::string out = "from,to,key,road_type,length,lanes,maxspeed,geometry";
  if (enriched) out += ",lanes_imputed,free_flow_speed_mps,capacity_vps,t0_s,a0,a4";
  out += '\n';
  for (const auto& e : g.edges()) {
    const std::string lanes = e.lanes ? std::to_string(*e.lanes) : "";
    const std::string ms = e.maxspeed_mph ? csv::format_double(*e.maxspeed_mph) : "";
    std::string line = csv::row(e.from, e.to, e.key, to_string(e.road_type), e.length, lanes, ms,
                                format_geometry(e.geometry));
    if (enriched) {
      line.pop_back();
      const auto& c = *e.bpr;
      line += ',' + csv::row(e.lanes_imputed ? 1 : 0, c.free_flow_speed_mps, c.capacity_vps, c.t0,
                             c.a0, c.a4);
    }
    out += line;
  }
  return out;
}

std::string graphml(const RoadGraph& g) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"lat\" for=\"node\" attr.name=\"lat\" attr.type=\"double\"/>\n"
      "  <key id=\"lon\" for=\"node\" attr.name=\"lon\" attr.type=\"double\"/>\n"
      "  <key id=\"key\" for=\"edge\" attr.name=\"key\" attr.type=\"int\"/>\n"
      "  <key id=\"road_type\" for=\"edge\" attr.name=\"road_type\" attr.type=\"string\"/>\n"
      "  <key id=\"length\" for=\"edge\" attr.name=\"length\" attr.type=\"double\"/>\n"
      "  <key id=\"lanes\" for=\"edge\" attr.name=\"lanes\" attr.type=\"int\"/>\n"
      "  <key id=\"maxspeed\" for=\"edge\" attr.name=\"maxspeed\" attr.type=\"double\"/>\n"
      "  <key id=\"geometry\" for=\"edge\" attr.name=\"geometry\" attr.type=\"string\"/>\n"
      "  <key id=\"free_flow_speed_mps\" for=\"edge\" attr.name=\"free_flow_speed_mps\" attr.type=\"double\"/>\n"
      "  <key id=\"capacity_vps\" for=\"edge\" attr.name=\"capacity_vps\" attr.type=\"double\"/>\n"
      "  <key id=\"t0_s\" for=\"edge\" attr.name=\"t0_s\" attr.type=\"double\"/>\n"
      "  <key id=\"a0\" for=\"edge\" attr.name=\"a0\" attr.type=\"double\"/>\n"
      "  <key id=\"a4\" for=\"edge\" attr.name=\"a4\" attr.type=\"double\"/>\n"
      "  <graph id=\"G\" edgedefault=\"directed\">\n";
  auto data = [](std::string_view key, const std::string& value) {
    return "      <data key=\"" + std::string(key) + "\">" + value + "</data>\n";
  };
  for (const auto& n : g.nodes()) {
    out += "    <node id=\"" + std::to_string(n.id) + "\">\n";
    out += data("lat", csv::format_double(n.lat));
    out += data("lon", csv::format_double(n.lon));
    out += "    </node>\n";
  }
  for (const auto& e : g.edges()) {
    out += "    <edge source=\"" + std::to_string(e.from) + "\" target=\"" + std::to_string(e.to) +
           "\">\n";
    out += data("key", std::to_string(e.key));
    out += data("road_type", std::string(to_string(e.road_type)));
    out += data("length", csv::format_double(e.length));
    if (e.lanes) out += data("lanes", std::to_string(*e.lanes));
    if (e.maxspeed_mph) out += data("maxspeed", csv::format_double(*e.maxspeed_mph));
    if (!e.geometry.empty()) out += data("geometry", format_geometry(e.geometry));
    if (e.bpr) {
      out += data("free_flow_speed_mps", csv::format_double(e.bpr->free_flow_speed_mps));
      out += data("capacity_vps", csv::format_double(e.bpr->capacity_vps));
      out += data("t0_s", csv::format_double(e.bpr->t0));
      out += data("a0", csv::format_double(e.bpr->a0));
      out += data("a4", csv::format_double(e.bpr->a4));
    }
    out += "    </edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

}  // namespace roadsim
