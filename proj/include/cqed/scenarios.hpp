#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/core.hpp"

namespace cqed {

inline const char* version() { return "0.1.0"; }

struct ScenarioInfo {
  std::string name;
  std::string subcommand;
  std::string description;
  nlohmann::json default_config;
};

// Built-in figure-reproduction presets.
const std::vector<ScenarioInfo>& list_scenarios();

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::string> output_files;
  std::vector<std::string> warnings;
  nlohmann::json error;  // non-null on failure
};

// Executes one scenario; writes CSV/JSON outputs plus manifest.json under
// out_dir. Configs use Hz and seconds; conversion to angular units is
// internal. Outputs are bit-identical for identical (config, seed).
RunOutcome run_scenario(const std::string& subcommand, const nlohmann::json& config,
                        const std::string& out_dir, uint64_t seed, int threads);

uint64_t config_hash(const nlohmann::json& config);

}  // namespace cqed
