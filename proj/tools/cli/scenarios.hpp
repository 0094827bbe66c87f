#pragma once

#include <map>
#include <string>
#include <vector>

#include "cli/report.hpp"
#include "lqcp/nulldist.hpp"

namespace lqcp::cli {

struct ScenarioOptions {
  unsigned threads = 0;
  NullTableCache cache{std::filesystem::path()};
  double work_budget = RunOptions{}.work_budget;
};

/// Registered scenario names, in registry order.
std::vector<std::string> scenario_names();

/// Default key=value settings of a scenario. Throws UnknownScenario.
std::map<std::string, std::string> scenario_defaults(const std::string& name);

/// Runs a simulation scenario. `overrides` may set any key listed by
/// scenario_defaults; a missing seed is sampled and recorded in the report.
/// Throws UnknownScenario, InvalidConfig.
RunReport run_scenario(const std::string& name, const std::map<std::string, std::string>& overrides,
                       const ScenarioOptions& opts = {});

/// Null table through the cache when one is configured.
NullTable calibrated_table(const NullSpec& spec, const ScenarioOptions& opts);

/// Parses "2,6" into a QSet.
QSet parse_orders(const std::string& text);

}  // namespace lqcp::cli
