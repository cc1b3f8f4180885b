#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqed/scenarios.hpp"

namespace {

int run_subcommand(const std::string& name, const std::string& config_path, const std::string& out_dir,
                   uint64_t seed, int threads) {
  std::ifstream in(config_path);
  if (!in) {
    std::cout << nlohmann::json{{"error",
                                 {{"module", "cli"},
                                  {"kind", "config"},
                                  {"message", "cannot open config file " + config_path}}}}
                     .dump(2)
              << std::endl;
    return 1;
  }
  nlohmann::json config;
  try {
    in >> config;
  } catch (const std::exception& e) {
    std::cout << nlohmann::json{{"error",
                                 {{"module", "cli"}, {"kind", "config"}, {"message", e.what()}}}}
                     .dump(2)
              << std::endl;
    return 1;
  }

  auto outcome = cqed::run_scenario(name, config, out_dir, seed, threads);
  if (outcome.exit_code != 0) {
    std::cout << nlohmann::json{{"error", outcome.error}}.dump(2) << std::endl;
    return outcome.exit_code;
  }
  nlohmann::json ok;
  ok["outputs"] = outcome.output_files;
  ok["warnings"] = outcome.warnings;
  std::cout << ok.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cqed: circuit QED simulations and figure reproductions"};
  app.require_subcommand(1);

  int threads = 1;
  if (const char* env = std::getenv("CQED_THREADS")) threads = std::max(1, std::atoi(env));

  struct SubArgs {
    std::string config;
    std::string out = ".";
    uint64_t seed = 1;
    int threads = 0;
  };
  std::map<std::string, SubArgs> args;
  for (const char* name : {"spectrum", "evolve", "readout", "gate", "code", "phasespace"}) {
    auto* sub = app.add_subcommand(name, std::string("run a ") + name + " scenario");
    auto& a = args[name];
    sub->add_option("--config", a.config, "JSON scenario config")->required();
    sub->add_option("--out", a.out, "output directory");
    sub->add_option("--seed", a.seed, "random seed");
    sub->add_option("--threads", a.threads, "worker threads for parameter sweeps");
  }
  auto* list = app.add_subcommand("list", "list built-in figure-reproduction scenarios");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    nlohmann::json catalog = nlohmann::json::array();
    for (const auto& s : cqed::list_scenarios())
      catalog.push_back({{"name", s.name},
                         {"subcommand", s.subcommand},
                         {"description", s.description},
                         {"default_config", s.default_config}});
    std::cout << catalog.dump(2) << std::endl;
    return 0;
  }
  for (auto& [name, a] : args) {
    if (app.get_subcommand(name)->parsed())
      return run_subcommand(name, a.config, a.out, a.seed, a.threads > 0 ? a.threads : threads);
  }
  return 1;
}
