// Scenario runner: folia_run --config scenario.json [--seed N] [--step H] [--out DIR] [--format csv|json]

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "folia/models.hpp"
#include "folia/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Run foliated Lie system scenarios and report property checks"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> step;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  bool list_models = false;
  app.add_option("--config", config_path, "scenario JSON file");
  app.add_option("--seed", seed, "RNG seed (overrides the config)");
  app.add_option("--step", step, "RK4 step (overrides the config)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--list-models", list_models, "print the registered models and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list_models) {
    for (const auto& m : folia::model_registry()) std::cout << m.name << "  " << m.description << "\n";
    return 0;
  }
  if (config_path.empty()) {
    std::cerr << "error: --config is required\n";
    return 2;
  }

  try {
    folia::ScenarioConfig cfg = folia::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (step) cfg.step = *step;
    if (out_dir) cfg.out_dir = *out_dir;
    if (format) cfg.format = *format;
    const folia::ScenarioResult result = folia::run(cfg);
    folia::print_table(std::cout, result.reports);
    std::cout << "report: " << result.report_path << "\ntrajectory: " << result.trajectory_path << "\n";
    return folia::exit_code(result.reports);
  } catch (const folia::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
