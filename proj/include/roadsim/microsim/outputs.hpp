#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "roadsim/microsim/world.hpp"

namespace roadsim::sim {

/// `id,class,departure_s,travel_time_s,distance_m,fuel_mL,co_g,n_edges`
std::string vehicles_csv(std::span<const VehicleState> vehicles);

/// `edge,interval_start_s,utilization,mean_speed_mps`; only intervals in
/// which the edge carried vehicles.
std::string edge_series_csv(std::span<const EdgeInterval> series);

/// `t_s,departed,arrived,active`
std::string conservation_csv(std::span<const Conservation> samples);

struct HistogramBin {
  double start = 0.0;
  double end = 0.0;
  std::size_t count = 0;
};

/// Fixed-width bins from floor(min / width) * width through the maximum.
std::vector<HistogramBin> histogram(std::span<const double> values, double width);

/// `bin_start,bin_end,count`
std::string histogram_csv(std::span<const HistogramBin> bins);

/// One row of a per-vehicle output file.
struct VehicleRow {
  std::uint32_t id = 0;
  std::string cls;
  double departure_s = 0.0;
  double travel_time_s = 0.0;
  double distance_m = 0.0;
  double fuel_ml = 0.0;
  double co_g = 0.0;
  std::size_t n_edges = 0;
};

/// Reads and validates a per-vehicle CSV. Throws MalformedRow.
std::vector<VehicleRow> read_vehicles_csv(const std::filesystem::path& path);

/// Histogram families written by the simulator and the report command.
struct HistogramFamily {
  const char* file;
  double width;
};
inline constexpr HistogramFamily kHistogramFamilies[] = {
    {"hist_departure_s.csv", 900.0},
    {"hist_edges_per_path.csv", 5.0},
    {"hist_distance_m.csv", 1000.0},
    {"hist_fuel_mL.csv", 100.0},
};

/// Writes the four histogram files into `dir`.
void write_histograms(const std::filesystem::path& dir, std::span<const VehicleRow> rows);

std::vector<VehicleRow> to_rows(std::span<const VehicleState> vehicles);

}  // namespace roadsim::sim
