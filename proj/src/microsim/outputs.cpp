#include "roadsim/microsim/outputs.hpp"

#include <algorithm>
#include <cmath>

#include "roadsim/csv.hpp"
#include "roadsim/error.hpp"

namespace roadsim::sim {

std::vector<VehicleRow> to_rows(std::span<const VehicleState> vehicles) {
  std::vector<VehicleRow> rows;
  rows.reserve(vehicles.size());
  for (const auto& s : vehicles) {
    rows.push_back({s.id, std::string(to_string(s.cls)), s.departure, s.travel_time,
                    s.cum_distance, s.cum_fuel, s.cum_co, s.route.size()});
  }
  return rows;
}

std::string vehicles_csv(std::span<const VehicleState> vehicles) {
  std::string out = "id,class,departure_s,travel_time_s,distance_m,fuel_mL,co_g,n_edges\n";
  for (const auto& r : to_rows(vehicles))
    out += csv::row(r.id, r.cls, r.departure_s, r.travel_time_s, r.distance_m, r.fuel_ml, r.co_g,
                    r.n_edges);
  return out;
}

std::string edge_series_csv(std::span<const EdgeInterval> series) {
  std::string out = "edge,interval_start_s,utilization,mean_speed_mps\n";
  for (const auto& s : series)
    out += csv::row(s.edge, s.interval_start, s.utilization, s.mean_speed);
  return out;
}

std::string conservation_csv(std::span<const Conservation> samples) {
  std::string out = "t_s,departed,arrived,active\n";
  for (const auto& c : samples) out += csv::row(c.t, c.departed, c.arrived, c.active);
  return out;
}

std::vector<HistogramBin> histogram(std::span<const double> values, double width) {
  if (values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double base = std::floor(*lo / width);
  const auto n = static_cast<std::size_t>(std::floor(*hi / width) - base) + 1;
  std::vector<HistogramBin> bins(n);
  for (std::size_t i = 0; i < n; ++i) {
    bins[i].start = (base + static_cast<double>(i)) * width;
    bins[i].end = bins[i].start + width;
  }
  for (double v : values) ++bins[static_cast<std::size_t>(std::floor(v / width) - base)].count;
  return bins;
}

std::string histogram_csv(std::span<const HistogramBin> bins) {
  std::string out = "bin_start,bin_end,count\n";
  for (const auto& b : bins) out += csv::row(b.start, b.end, b.count);
  return out;
}

std::vector<VehicleRow> read_vehicles_csv(const std::filesystem::path& path) {
  csv::Reader in(path);
  in.expect_header_prefix(
      {"id", "class", "departure_s", "travel_time_s", "distance_m", "fuel_mL", "co_g", "n_edges"});
  std::vector<VehicleRow> rows;
  std::vector<std::string> f;
  while (in.next(f)) {
    if (f.size() != 8) in.fail("expected 8 columns");
    VehicleRow r;
    r.id = static_cast<std::uint32_t>(in.to_int(f[0], "id"));
    r.cls = f[1];
    if (r.cls != "car" && r.cls != "truck") in.fail("class must be car or truck");
    r.departure_s = in.to_double(f[2], "departure_s");
    r.travel_time_s = in.to_double(f[3], "travel_time_s");
    r.distance_m = in.to_double(f[4], "distance_m");
    r.fuel_ml = in.to_double(f[5], "fuel_mL");
    r.co_g = in.to_double(f[6], "co_g");
    const auto edges = in.to_int(f[7], "n_edges");
    if (r.distance_m < 0 || r.fuel_ml < 0 || r.co_g < 0 || r.travel_time_s < 0 || edges < 1)
      in.fail("negative or empty per-vehicle quantity");
    r.n_edges = static_cast<std::size_t>(edges);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_histograms(const std::filesystem::path& dir, std::span<const VehicleRow> rows) {
  std::vector<double> values[4];
  for (const auto& r : rows) {
    values[0].push_back(r.departure_s);
    values[1].push_back(static_cast<double>(r.n_edges));
    values[2].push_back(r.distance_m);
    values[3].push_back(r.fuel_ml);
  }
  for (int i = 0; i < 4; ++i) {
    const auto& fam = kHistogramFamilies[i];
    csv::write_file(dir / fam.file, histogram_csv(histogram(values[i], fam.width)));
  }
}

}  // namespace roadsim::sim
