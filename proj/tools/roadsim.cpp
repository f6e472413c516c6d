// Command-line front end: network, link-demand, assign, microsim, report.

#include <iostream>

#include <CLI11.hpp>

#include "roadsim/error.hpp"
#include "roadsim/pipeline.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "key = value settings file");
  cmd->add_option("--seed", c.seed, "random seed (required by microsim)");
  cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--set", c.sets, "override one setting, key=value (repeatable)");
}

roadsim::RunConfig resolve(const Common& c) {
  roadsim::Settings s;
  if (!c.config.empty()) s = roadsim::read_settings(c.config);
  for (const auto& kv : c.sets) {
    auto [k, v] = roadsim::parse_setting(kv);
    s[k] = v;
  }
  if (c.seed) s["seed"] = std::to_string(*c.seed);
  if (c.workers) s["workers"] = std::to_string(*c.workers);
  return roadsim::make_config(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Road network assignment and traffic microsimulation"};
  app.require_subcommand(1);
  Common common;
  using Command = std::vector<std::filesystem::path> (*)(const roadsim::RunConfig&, roadsim::Logger&);
  const std::pair<const char*, std::pair<const char*, Command>> commands[] = {
      {"network", {"build the enriched road graph", roadsim::cmd_network}},
      {"link-demand", {"map zone trips onto graph nodes", roadsim::cmd_link_demand}},
      {"assign", {"static user-equilibrium assignment", roadsim::cmd_assign}},
      {"microsim", {"iterative per-vehicle simulation", roadsim::cmd_microsim}},
      {"report", {"histograms from a per-vehicle file", roadsim::cmd_report}},
  };
  Command chosen = nullptr;
  for (const auto& [name, info] : commands) {
    auto* cmd = app.add_subcommand(name, info.first);
    add_common(cmd, common);
    cmd->callback([&chosen, fn = info.second] { chosen = fn; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  roadsim::Logger log(&std::cerr);
  try {
    const auto cfg = resolve(common);
    for (const auto& p : chosen(cfg, log)) std::cout << p.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    const int rc = roadsim::exit_code_for(e);
    log.log("error", {{"message", e.what()}, {"exit_code", rc}});
    return rc;
  }
}
