#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "roadsim/assignment.hpp"
#include "roadsim/microsim/world.hpp"

namespace roadsim {

/// Raw `key = value` settings. Later sources override earlier ones.
using Settings = std::map<std::string, std::string>;

/// Parses a config file: one `key = value` per line, `#` starts a comment.
/// Throws ConfigError.
Settings read_settings(const std::filesystem::path& path);
/// Parses one `key=value` override. Throws ConfigError.
std::pair<std::string, std::string> parse_setting(const std::string& text);

struct RunConfig {
  std::filesystem::path nodes, edges, zones, trips, node_demand, departures, controls, vehicles;
  std::filesystem::path out_dir = "out";
  double alpha = 0.15;
  double beta = 4.0;
  /// Rate units of static demand: "vph" (divided by 3600) or "vps".
  std::string demand_units = "vph";
  FwConfig fw;
  sim::SimConfig sim;
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

/// Typed view of the settings. Unknown keys and unparsable values throw
/// ConfigError. Every key is listed in the README.
RunConfig make_config(const Settings& settings);

/// Structured JSON-lines logger.
class Logger {
 public:
  explicit Logger(std::ostream* out) : out_(out) {}
  void log(const std::string& event, nlohmann::json fields = nlohmann::json::object());

 private:
  std::ostream* out_;
};

/// Each command validates its inputs before writing anything and returns the
/// paths it wrote.
std::vector<std::filesystem::path> cmd_network(const RunConfig& cfg, Logger& log);
std::vector<std::filesystem::path> cmd_link_demand(const RunConfig& cfg, Logger& log);
std::vector<std::filesystem::path> cmd_assign(const RunConfig& cfg, Logger& log);
std::vector<std::filesystem::path> cmd_microsim(const RunConfig& cfg, Logger& log);
std::vector<std::filesystem::path> cmd_report(const RunConfig& cfg, Logger& log);

/// 1 for bad configuration or malformed input, 2 for failures while running.
int exit_code_for(const std::exception& e);

}  // namespace roadsim
