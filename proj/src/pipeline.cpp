#include "roadsim/pipeline.hpp"

#include <chrono>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>

#include "roadsim/csv.hpp"
#include "roadsim/demand.hpp"
#include "roadsim/edge_attributes.hpp"
#include "roadsim/error.hpp"
#include "roadsim/graph_io.hpp"
#include "roadsim/microsim/controls.hpp"
#include "roadsim/microsim/iterations.hpp"
#include "roadsim/microsim/outputs.hpp"

namespace roadsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

void vehicle_key(sim::VehicleParams& p, const std::string& key, const std::string& field,
                 const std::string& v) {
  const double x = to_double(key, v);
  if (!(x > 0.0)) throw ConfigError(key + " must be positive");
  if (field == "a_max") p.a_max = x;
  else if (field == "b_comf") p.b_comf = x;
  else if (field == "T") p.T = x;
  else if (field == "s0") p.s0 = x;
  else if (field == "length") p.length = x;
  else if (field == "v0_factor") p.v0_factor = x;
  else throw ConfigError("unknown key " + key);
}

void require_file(const fs::path& p, const char* key) {
  if (p.empty()) throw ConfigError(std::string("missing setting ") + key);
  if (!fs::is_regular_file(p)) throw ConfigError(std::string(key) + ": no such file " + p.string());
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

json stage_stats(const char* stage, const RoadGraph& g) {
  return {{"stage", stage},
          {"nodes", g.node_count()},
          {"edges", g.edge_count()},
          {"total_km", g.total_length() / 1000.0}};
}

fs::path write(const fs::path& dir, const char* name, const std::string& contents) {
  const fs::path p = dir / name;
  csv::write_file(p, contents);
  return p;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

RoadGraph load_enriched(const RunConfig& cfg) {
  RoadGraph g = load_graph(cfg.nodes, cfg.edges, {cfg.alpha, cfg.beta});
  for (const auto& e : g.edges())
    if (!e.bpr) throw ConfigError("edges file lacks BPR columns; run the network command first");
  return g;
}

// Node demand from either a node-level file or zones + zone trips.
std::vector<NodeDemand> load_node_demand(const RunConfig& cfg, const RoadGraph& g, Logger& log) {
  if (!cfg.node_demand.empty()) return read_node_demand_csv(cfg.node_demand);
  const auto zones = read_zones_csv(cfg.zones);
  const auto trips = read_trips_csv(cfg.trips);
  auto linked = link_demand(trips, zones, g);
  log.log("demand.linked", {{"records", linked.records.size()},
                            {"dropped_records", linked.dropped_records},
                            {"dropped_trips", linked.dropped_trips}});
  return std::move(linked.records);
}

void require_demand(const RunConfig& cfg) {
  if (!cfg.node_demand.empty()) {
    require_file(cfg.node_demand, "node_demand");
  } else {
    require_file(cfg.zones, "zones");
    require_file(cfg.trips, "trips");
  }
}

}  // namespace

Settings read_settings(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  Settings out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": expected key = value");
    out[trim(std::string_view(body).substr(0, eq))] = trim(std::string_view(body).substr(eq + 1));
  }
  return out;
}

std::pair<std::string, std::string> parse_setting(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + text + "'");
  return {trim(std::string_view(text).substr(0, eq)), trim(std::string_view(text).substr(eq + 1))};
}

RunConfig make_config(const Settings& settings) {
  RunConfig c;
  const std::map<std::string, fs::path*> paths = {
      {"nodes", &c.nodes},           {"edges", &c.edges},     {"zones", &c.zones},
      {"trips", &c.trips},           {"node_demand", &c.node_demand},
      {"departures", &c.departures}, {"controls", &c.controls},
      {"vehicles", &c.vehicles},     {"out_dir", &c.out_dir}};
  const std::map<std::string, double*> reals = {
      {"alpha", &c.alpha},
      {"beta", &c.beta},
      {"fw.gap_tolerance", &c.fw.gap_tolerance},
      {"fw.line_search_tolerance", &c.fw.line_search_tolerance},
      {"sim.dt", &c.sim.dt},
      {"sim.lambda", &c.sim.lambda},
      {"sim.phase_duration", &c.sim.phase_duration},
      {"sim.lookahead_m", &c.sim.lookahead_m},
      {"sim.stop_zone_m", &c.sim.stop_zone_m},
      {"sim.gain_m", &c.sim.gain_m},
      {"sim.horizon_s", &c.sim.horizon_s},
      {"sim.drain_s", &c.sim.drain_s},
      {"sim.truck_fraction", &c.sim.truck_fraction}};

  for (const auto& [key, value] : settings) {
    if (auto it = paths.find(key); it != paths.end()) {
      *it->second = value;
    } else if (auto r = reals.find(key); r != reals.end()) {
      *r->second = to_double(key, value);
    } else if (key == "demand_units") {
      if (value != "vph" && value != "vps") throw ConfigError("demand_units must be vph or vps");
      c.demand_units = value;
    } else if (key == "fw.max_iterations") {
      c.fw.max_iterations = to_int<int>(key, value);
    } else if (key == "fw.keep_directions") {
      c.fw.keep_directions = to_bool(key, value);
    } else if (key == "sim.iterations") {
      c.sim.iterations = to_int<int>(key, value);
    } else if (key == "seed") {
      c.seed = to_int<std::uint64_t>(key, value);
    } else if (key == "workers") {
      c.workers = to_int<int>(key, value);
    } else if (key.starts_with("car.")) {
      vehicle_key(c.sim.car, key, key.substr(4), value);
    } else if (key.starts_with("truck.")) {
      vehicle_key(c.sim.truck, key, key.substr(6), value);
    } else {
      throw ConfigError("unknown key " + key);
    }
  }

  if (!(c.alpha >= 0.0) || !(c.beta > 0.0)) throw ConfigError("alpha must be >= 0 and beta > 0");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  if (c.fw.max_iterations < 1) throw ConfigError("fw.max_iterations must be >= 1");
  if (!(c.sim.dt > 0.0) || !(c.sim.lambda > 0.0) || !(c.sim.phase_duration > 0.0) ||
      !(c.sim.lookahead_m > 0.0))
    throw ConfigError("sim.dt, sim.lambda, sim.phase_duration and sim.lookahead_m must be positive");
  if (c.sim.iterations < 1) throw ConfigError("sim.iterations must be >= 1");
  if (c.sim.truck_fraction < 0.0 || c.sim.truck_fraction > 1.0)
    throw ConfigError("sim.truck_fraction must be in [0, 1]");
  if (c.sim.truck.length <= c.sim.car.length || c.sim.truck.a_max >= c.sim.car.a_max)
    throw ConfigError("trucks must be longer than cars and accelerate more slowly");
  c.fw.workers = c.workers;
  c.sim.workers = c.workers;
  if (c.seed) c.sim.seed = *c.seed;
  if (c.vehicles.empty()) c.vehicles = c.out_dir / "vehicles.csv";
  return c;
}

void Logger::log(const std::string& event, json fields) {
  if (!out_) return;
  fields["event"] = event;
  *out_ << fields.dump() << '\n';
  out_->flush();
}

std::vector<fs::path> cmd_network(const RunConfig& cfg, Logger& log) {
  require_file(cfg.nodes, "nodes");
  require_file(cfg.edges, "edges");
  auto clock = std::chrono::steady_clock::now();
  json stages = json::array();
  auto stage = [&](const char* name, const RoadGraph& g) {
    stages.push_back(stage_stats(name, g));
    auto entry = stages.back();
    entry["elapsed_ms"] = elapsed_ms(clock);
    log.log("network.stage", entry);
    clock = std::chrono::steady_clock::now();
  };

  RoadGraph g = load_graph(cfg.nodes, cfg.edges);
  stage("loaded", g);
  g = filter_by_road_type(g, std::set<RoadType>(kMajorRoadTypes.begin(), kMajorRoadTypes.end()));
  stage("filtered", g);
  g = largest_scc(g);
  stage("largest_scc", g);
  g = simplify_topology(g);
  stage("simplified", g);
  g = impute_lanes(g);
  g = compute_bpr_coefficients(g, cfg.alpha, cfg.beta);
  stage("enriched", g);

  std::size_t imputed = 0;
  for (const auto& e : g.edges()) imputed += e.lanes_imputed ? 1 : 0;
  const json stats = {{"stages", stages},
                      {"lanes_imputed", imputed},
                      {"alpha", cfg.alpha},
                      {"beta", cfg.beta}};
  return {write(cfg.out_dir, "nodes.csv", nodes_csv(g)),
          write(cfg.out_dir, "edges.csv", edges_csv(g)),
          write(cfg.out_dir, "graph.graphml", graphml(g)),
          write(cfg.out_dir, "network_stats.json", dump(stats))};
}

std::vector<fs::path> cmd_link_demand(const RunConfig& cfg, Logger& log) {
  require_file(cfg.nodes, "nodes");
  require_file(cfg.edges, "edges");
  require_file(cfg.zones, "zones");
  require_file(cfg.trips, "trips");
  const RoadGraph g = load_graph(cfg.nodes, cfg.edges, {cfg.alpha, cfg.beta});
  const auto zones = read_zones_csv(cfg.zones);
  const auto trips = read_trips_csv(cfg.trips);
  const auto linked = link_demand(trips, zones, g);
  const json summary = {{"records", linked.records.size()},
                        {"dropped_records", linked.dropped_records},
                        {"dropped_trips", linked.dropped_trips}};
  log.log("demand.linked", summary);
  return {write(cfg.out_dir, "node_demand.csv", node_demand_csv(linked.records)),
          write(cfg.out_dir, "link_summary.json", dump(summary))};
}

std::vector<fs::path> cmd_assign(const RunConfig& cfg, Logger& log) {
  require_file(cfg.nodes, "nodes");
  require_file(cfg.edges, "edges");
  require_demand(cfg);
  const auto start = std::chrono::steady_clock::now();
  const RoadGraph g = load_enriched(cfg);
  const auto demand = load_node_demand(cfg, g, log);
  const double scale = cfg.demand_units == "vph" ? 1.0 / 3600.0 : 1.0;
  const OdMatrix od(g, demand, scale);
  log.log("assign.start", {{"edges", g.edge_count()},
                           {"origins", od.origins().size()},
                           {"demand_vps", od.total()}});
  const auto state = frank_wolfe(g, od, cfg.fw);
  const double wall = elapsed_ms(start);
  log.log("assign.done", {{"iterations", state.iterations},
                          {"relative_gap", state.relative_gap},
                          {"elapsed_ms", wall}});

  std::string trace = "iteration,relative_gap,objective,step\n";
  for (const auto& it : state.trace)
    trace += csv::row(it.iteration, it.relative_gap, it.objective, it.step);
  const json summary = {{"iterations", state.iterations},
                        {"relative_gap", state.relative_gap},
                        {"converged", state.converged},
                        {"objective", state.objective},
                        {"demand_vps", od.total()},
                        {"wall_time_ms", wall}};
  return {write(cfg.out_dir, "flows.csv", flows_csv(g, state)),
          write(cfg.out_dir, "assign_trace.csv", trace),
          write(cfg.out_dir, "assign_summary.json", dump(summary))};
}

std::vector<fs::path> cmd_microsim(const RunConfig& cfg, Logger& log) {
  if (!cfg.seed) throw ConfigError("microsim runs need an explicit seed");
  require_file(cfg.nodes, "nodes");
  require_file(cfg.edges, "edges");
  require_file(cfg.node_demand, "node_demand");
  require_file(cfg.departures, "departures");
  if (!cfg.controls.empty()) require_file(cfg.controls, "controls");

  const RoadGraph g = load_enriched(cfg);
  const auto demand = read_node_demand_csv(cfg.node_demand);
  const auto hist = sim::read_departures_csv(cfg.departures);
  auto controls = cfg.controls.empty() ? std::vector<sim::Control>{}
                                       : sim::read_controls_csv(cfg.controls, g);
  const sim::SimNetwork net(g, std::move(controls));
  const auto trips = sim::build_trips(g, demand, hist, cfg.sim);
  log.log("microsim.start", {{"vehicles", trips.size()}, {"iterations", cfg.sim.iterations}});

  const auto start = std::chrono::steady_clock::now();
  const auto report = sim::run_iterations(net, trips, cfg.sim);
  json iterations = json::array();
  for (const auto& it : report.iterations) {
    const json row = {{"iteration", it.iteration},
                      {"rerouted", it.plan.rerouted},
                      {"reroute_fraction", it.plan.fraction()},
                      {"all_pairs", it.plan.all_pairs},
                      {"convergence_metric", it.convergence_metric},
                      {"visited_edges", it.visited_edges},
                      {"departed", it.departed},
                      {"arrived", it.arrived},
                      {"mean_travel_time_s", it.mean_travel_time},
                      {"end_time_s", it.end_time},
                      {"collisions", it.collisions}};
    log.log("microsim.iteration", row);
    iterations.push_back(row);
  }
  log.log("microsim.done", {{"elapsed_ms", elapsed_ms(start)}});

  const auto rows = sim::to_rows(report.vehicles);
  std::vector<fs::path> out = {
      write(cfg.out_dir, "vehicles.csv", sim::vehicles_csv(report.vehicles)),
      write(cfg.out_dir, "edge_timeseries.csv", sim::edge_series_csv(report.edge_series)),
      write(cfg.out_dir, "conservation.csv", sim::conservation_csv(report.conservation)),
      write(cfg.out_dir, "microsim_summary.json",
            dump({{"vehicles", trips.size()}, {"seed", *cfg.seed}, {"iterations", iterations}}))};
  sim::write_histograms(cfg.out_dir, rows);
  for (const auto& fam : sim::kHistogramFamilies) out.push_back(cfg.out_dir / fam.file);
  return out;
}

std::vector<fs::path> cmd_report(const RunConfig& cfg, Logger& log) {
  require_file(cfg.vehicles, "vehicles");
  const auto rows = sim::read_vehicles_csv(cfg.vehicles);
  if (rows.empty()) throw ConfigError("vehicles file has no rows");
  json families = json::object();
  double fuel = 0.0, co = 0.0, distance = 0.0;
  std::size_t trucks = 0;
  for (const auto& r : rows) {
    fuel += r.fuel_ml;
    co += r.co_g;
    distance += r.distance_m;
    trucks += r.cls == "truck" ? 1 : 0;
  }
  std::vector<fs::path> out;
  sim::write_histograms(cfg.out_dir, rows);
  for (const auto& fam : sim::kHistogramFamilies) {
    out.push_back(cfg.out_dir / fam.file);
    families[fam.file] = {{"bin_width", fam.width}};
  }
  const json summary = {{"vehicles", rows.size()},
                        {"trucks", trucks},
                        {"total_fuel_mL", fuel},
                        {"total_co_g", co},
                        {"total_distance_m", distance},
                        {"histograms", families}};
  log.log("report.done", {{"vehicles", rows.size()}});
  out.push_back(write(cfg.out_dir, "report.json", dump(summary)));
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const MalformedRow*>(&e) ||
      dynamic_cast<const DanglingEdge*>(&e) || dynamic_cast<const InvalidGraph*>(&e) ||
      dynamic_cast<const UnknownZone*>(&e) || dynamic_cast<const UnknownRoadType*>(&e) ||
      dynamic_cast<const NonPositiveInput*>(&e))
    return 1;
  return 2;
}

}  // namespace roadsim
