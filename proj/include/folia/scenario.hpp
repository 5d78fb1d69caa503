#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "folia/types.hpp"

namespace folia {

/// Invalid scenario configuration (exit code 2 in the CLI).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ScenarioConfig {
  std::string model;
  int n = 2;
  std::string H = "sum_cos";
  std::string omega2 = "1+0.1*sin(t)";
  double c1 = 1.0;
  double c2 = 1.0;
  /// Riccati coefficients as expressions in t.
  std::string a0 = "1", a1 = "0", a2 = "-1";
  /// Initial state; drawn from the model's sampling box with `seed` if empty.
  std::vector<double> x0;
  double t0 = 0.0;
  double t1 = 2.0;
  double step = 1e-3;
  std::vector<std::string> checks;
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  std::string format = "json";
};

/// Known check names in report order.
const std::vector<std::string>& known_checks();

/// Parses JSON text. Integration settings may sit at top level or inside an
/// "integration" object; output settings at top level or inside "output".
/// Throws ConfigError on malformed input or unknown keys.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);
/// Throws ConfigError describing the first violated rule.
void validate(const ScenarioConfig& cfg);

struct CheckReport {
  std::string check;
  std::string model;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  double runtime_s = 0.0;
  std::uint64_t seed = 0;
  /// Error text when the check aborted.
  std::string detail;
};

struct ScenarioResult {
  std::vector<CheckReport> reports;
  std::string trajectory_path;
  std::string report_path;
};

/// Validates, runs the requested checks, writes trajectory.csv and
/// report.<format> into out_dir. Checks that throw are reported as failures.
ScenarioResult run(const ScenarioConfig& cfg);

/// Sorted by check name, then model.
std::vector<CheckReport> ordered(std::vector<CheckReport> reports);
std::string render_json(const std::vector<CheckReport>& reports);
std::string render_csv(const std::vector<CheckReport>& reports);
void print_table(std::ostream& os, const std::vector<CheckReport>& reports);
/// Throws Error when the file cannot be written.
std::string write_report(const std::vector<CheckReport>& reports, const std::string& dir, const std::string& format);
/// 0 when every report passed, 1 otherwise.
int exit_code(const std::vector<CheckReport>& reports);

}  // namespace folia
