#include "folia/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "folia/expression.hpp"
#include "folia/models.hpp"
#include "folia/poisson.hpp"

namespace folia {

namespace {

using json = nlohmann::json;

const std::map<std::string, std::set<std::string>>& availability() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"riccati", {"foliated", "leaf_drift", "superposition", "convergence"}},
      {"hamilton_jacobi", {"foliated", "leaf_drift", "superposition", "automorphic", "convergence"}},
      {"lax", {"foliated", "leaf_drift", "superposition", "automorphic", "poisson", "spectrum", "convergence"}},
      {"ermakov", {"foliated", "leaf_drift", "automorphic", "lewis", "convergence"}},
      {"sl2_adjoint", {"foliated", "leaf_drift", "poisson", "convergence"}},
  };
  return table;
}

std::string expression_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw ConfigError("'" + key + "' must be a string or a number");
}

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + key + "' has the wrong type");
  }
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> checks = {"foliated", "leaf_drift", "superposition", "automorphic",
                                                  "poisson",  "spectrum",   "lewis",         "convergence"};
  return checks;
}

ScenarioConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("configuration must be a JSON object");

  ScenarioConfig cfg;
  auto apply = [&cfg](const std::string& key, const json& v) {
    if (key == "model") cfg.model = get_as<std::string>(v, key);
    else if (key == "n") cfg.n = get_as<int>(v, key);
    else if (key == "H") cfg.H = expression_text(v, key);
    else if (key == "omega2") cfg.omega2 = expression_text(v, key);
    else if (key == "c1") cfg.c1 = get_as<double>(v, key);
    else if (key == "c2") cfg.c2 = get_as<double>(v, key);
    else if (key == "a0") cfg.a0 = expression_text(v, key);
    else if (key == "a1") cfg.a1 = expression_text(v, key);
    else if (key == "a2") cfg.a2 = expression_text(v, key);
    else if (key == "x0") cfg.x0 = get_as<std::vector<double>>(v, key);
    else if (key == "t0") cfg.t0 = get_as<double>(v, key);
    else if (key == "t1") cfg.t1 = get_as<double>(v, key);
    else if (key == "step") cfg.step = get_as<double>(v, key);
    else if (key == "checks") cfg.checks = get_as<std::vector<std::string>>(v, key);
    else if (key == "seed") cfg.seed = get_as<std::uint64_t>(v, key);
    else if (key == "out" || key == "path" || key == "dir") cfg.out_dir = get_as<std::string>(v, key);
    else if (key == "format") cfg.format = get_as<std::string>(v, key);
    else throw ConfigError("unknown key '" + key + "'");
  };
  for (const auto& [key, value] : root.items()) {
    if (key == "integration" || key == "output" || key == "params") {
      if (!value.is_object()) throw ConfigError("'" + key + "' must be an object");
      for (const auto& [inner, v] : value.items()) apply(inner, v);
    } else {
      apply(key, value);
    }
  }
  if (cfg.model.empty()) throw ConfigError("missing 'model'");
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ScenarioConfig& cfg) {
  if (!is_registered(cfg.model)) throw ConfigError("unknown model '" + cfg.model + "'");
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) throw ConfigError("step must be positive");
  if (!(cfg.t1 > cfg.t0)) throw ConfigError("t1 must exceed t0");
  if (cfg.step > cfg.t1 - cfg.t0) throw ConfigError("step exceeds the integration span");
  if (cfg.n < 1 || cfg.n > 16) throw ConfigError("n must lie in [1, 16]");
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("format must be csv or json");
  const auto& allowed = availability().at(cfg.model);
  for (const auto& c : cfg.checks) {
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
      throw ConfigError("unknown check '" + c + "'");
    if (!allowed.count(c)) throw ConfigError("check '" + c + "' is not available for model '" + cfg.model + "'");
  }
  try {
    if (cfg.model == "riccati")
      for (const auto* a : {&cfg.a0, &cfg.a1, &cfg.a2}) Expression::parse(*a, 0);
    if (cfg.model == "hamilton_jacobi" || cfg.model == "lax") Expression::parse(expand_preset(cfg.H, cfg.n), cfg.n);
    if (cfg.model == "ermakov") Expression::parse(cfg.omega2, 0, true);
  } catch (const ExpressionError& e) {
    throw ConfigError(e.what());
  }
  if (cfg.model == "ermakov" && std::count(cfg.checks.begin(), cfg.checks.end(), "automorphic") &&
      (cfg.c1 != 0.0 || cfg.c2 != 0.0))
    throw ConfigError("ermakov automorphic check needs c1 = c2 = 0 (linear sl(2) action)");
}

namespace {

struct Check {
  double value;
  double tolerance;
};

HamiltonJacobiSpec hj_spec(const ScenarioConfig& cfg) {
  const Expression H = Expression::parse(expand_preset(cfg.H, cfg.n), cfg.n);
  return HamiltonJacobiSpec{cfg.n, [H](double t, const Vector& P) { return H(t, P); },
                            [H](double t, const Vector& P) { return H.gradient_P(t, P); }};
}

ErmakovSpec ermakov_spec(const ScenarioConfig& cfg) {
  const Expression w = Expression::parse(cfg.omega2, 0, true);
  ErmakovSpec spec;
  spec.omega2 = [w](double t, double I) { return w(t, Vector(0), I); };
  spec.c1 = cfg.c1;
  spec.c2 = cfg.c2;
  return spec;
}

RiccatiSpec riccati_spec(const ScenarioConfig& cfg) {
  auto fn = [](const std::string& text) {
    const Expression e = Expression::parse(text, 0);
    return TimeFunction([e](double t) { return e(t, Vector(0)); });
  };
  return RiccatiSpec{fn(cfg.a0), fn(cfg.a1), fn(cfg.a2)};
}

// Everything a scenario needs from one model.
struct Scenario {
  std::optional<FoliatedSystem> system;
  std::optional<GroupAction> action;
  LeafRepresentative representative;
  std::optional<SuperpositionRule> rule;
  LeafSampler sampler;
  std::function<double(const Trajectory&)> invariant_drift;
  std::function<Check()> poisson;
};

Scenario build(const ScenarioConfig& cfg) {
  Scenario s;
  if (cfg.model == "riccati") {
    RiccatiModel m = riccati_system(riccati_spec(cfg));
    s.sampler = distinct_point_sampler(m.system.domain(), 0.1);
    s.rule = std::move(m.rule);
    s.system = std::move(m.system);
  } else if (cfg.model == "hamilton_jacobi" || cfg.model == "lax") {
    const HamiltonJacobiSpec hj = hj_spec(cfg);
    AbelianModel m = cfg.model == "lax" ? lax_system(lax_spec_from_hamiltonian(hj)) : hj_system(hj);
    s.action = std::move(m.action);
    s.representative = std::move(m.representative);
    s.rule = std::move(m.rule);
    s.system = std::move(m.system);
    s.sampler = chart_leaf_sampler(*s.system);
    if (cfg.model == "lax") {
      const int n = cfg.n;
      const std::uint64_t seed = cfg.seed;
      s.poisson = [n, seed] {
        const auto samples = sample_points(aff_domain(n), 100, seed);
        double worst = 0.0;
        for (const auto& c : check_rmatrix_hamiltonian(n, samples)) worst = std::max(worst, c.residual);
        return Check{worst, 1e-8};
      };
    }
  } else if (cfg.model == "ermakov") {
    const ErmakovSpec spec = ermakov_spec(cfg);
    s.system = ermakov_system(spec);
    s.action = ermakov_matrix_action(spec);
    s.representative = ermakov_representative(spec);
    const ScalarField I = lewis_field(spec);
    s.invariant_drift = [I](const Trajectory& traj) {
      const double start = I(traj.states.front());
      double worst = 0.0;
      for (const auto& x : traj.states) worst = std::max(worst, std::abs(I(x) - start));
      return worst / std::max(std::abs(start), 1e-300);
    };
  } else if (cfg.model == "sl2_adjoint") {
    AdjointModel m = sl2_adjoint_system();
    const std::uint64_t seed = cfg.seed;
    const FoliatedSystem fs = m.system;
    s.poisson = [fs, m, seed] {
      const PoissonBivector L = kirillov_bivector(fs.realized.algebra, m.metric);
      const auto samples = sample_points(fs.domain(), 100, seed);
      const auto report = is_foliated_lie_hamilton(fs, L, m.hamiltonians, samples);
      double worst = 0.0;
      for (const auto& c : report.checks) worst = std::max(worst, c.residual);
      return Check{report.value ? worst : std::numeric_limits<double>::infinity(), 1e-8};
    };
    const FoliationChart chart = m.system.chart;
    s.invariant_drift = [chart](const Trajectory& traj) { return leaf_drift(traj, chart, true); };
    s.system = std::move(m.system);
  }
  return s;
}

Vector initial_state(const ScenarioConfig& cfg, const FoliatedSystem& fs) {
  if (!cfg.x0.empty()) {
    if (static_cast<int>(cfg.x0.size()) != fs.dim())
      throw ConfigError("x0 must have " + std::to_string(fs.dim()) + " entries");
    Vector x(fs.dim());
    for (int i = 0; i < x.size(); ++i) x[i] = cfg.x0[static_cast<std::size_t>(i)];
    if (!fs.domain().contains(x)) throw ConfigError("x0 lies outside the model domain");
    return x;
  }
  std::mt19937_64 rng(cfg.seed);
  return fs.domain().sample(rng);
}

Check run_check(const std::string& name, const ScenarioConfig& cfg, const Scenario& s, const Vector& x0,
                const Trajectory& base) {
  const FoliatedSystem& fs = *s.system;
  const double inf = std::numeric_limits<double>::infinity();
  if (name == "foliated") {
    const FoliatedReport r = verify_foliated(fs, 100, cfg.seed);
    return {r.rank_ok ? std::max(r.com_residual, r.chart_residual) : inf, 1e-6};
  }
  if (name == "leaf_drift") {
    if (s.invariant_drift) return {s.invariant_drift(base), 1e-6};
    return {leaf_drift(base, fs.chart), 0.0};
  }
  if (name == "lewis") return {s.invariant_drift(base), 1e-6};
  if (name == "superposition") {
    const RuleVerification v =
        verify_rule(*s.rule, assemble(fs), s.sampler, cfg.t0, cfg.t1, 5, cfg.seed, cfg.step);
    return {v.max_reconstruction_error, 1e-8};
  }
  if (name == "automorphic") {
    const double tol = cfg.model == "ermakov" ? 1e-6 : 1e-8;
    return {reconstruction_error(fs, *s.action, s.representative, x0, cfg.t0, cfg.t1, cfg.step), tol};
  }
  if (name == "poisson") return s.poisson();
  if (name == "spectrum") return {spectrum_drift(cfg.n, base), 1e-12};
  if (name == "convergence") {
    const double order = convergence_order(assemble(fs), x0, cfg.t0, cfg.t1, (cfg.t1 - cfg.t0) / 100.0);
    return {std::abs(order - 4.0), 0.5};
  }
  throw ConfigError("unknown check '" + name + "'");
}

std::string format_double(double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

ScenarioResult run(const ScenarioConfig& cfg) {
  validate(cfg);
  const Scenario s = build(cfg);
  const Vector x0 = initial_state(cfg, *s.system);

  std::filesystem::create_directories(cfg.out_dir);
  ScenarioResult result;
  Trajectory base;
  try {
    base = integrate(assemble(*s.system), x0, cfg.t0, cfg.t1, cfg.step);
  } catch (const IntegrationError& e) {
    base = e.partial();
  }
  result.trajectory_path = (std::filesystem::path(cfg.out_dir) / "trajectory.csv").string();
  base.write_csv(result.trajectory_path);

  for (const auto& name : cfg.checks) {
    CheckReport rep;
    rep.check = name;
    rep.model = cfg.model;
    rep.seed = cfg.seed;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Check c = run_check(name, cfg, s, x0, base);
      rep.value = c.value;
      rep.tolerance = c.tolerance;
      rep.passed = c.value <= c.tolerance;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      rep.value = std::numeric_limits<double>::quiet_NaN();
      rep.passed = false;
      rep.detail = e.what();
    }
    rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.reports.push_back(std::move(rep));
  }
  result.reports = ordered(std::move(result.reports));
  result.report_path = write_report(result.reports, cfg.out_dir, cfg.format);
  return result;
}

std::vector<CheckReport> ordered(std::vector<CheckReport> reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const CheckReport& a, const CheckReport& b) {
    return std::tie(a.check, a.model) < std::tie(b.check, b.model);
  });
  return reports;
}

std::string render_json(const std::vector<CheckReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json row = {{"check", r.check},         {"status", r.passed ? "pass" : "fail"},
                {"value", r.value},         {"tolerance", r.tolerance},
                {"runtime_s", r.runtime_s}, {"seed", r.seed},
                {"model", r.model}};
    if (!r.detail.empty()) row["detail"] = r.detail;
    arr.push_back(std::move(row));
  }
  return json{{"reports", arr}}.dump(2) + "\n";
}

std::string render_csv(const std::vector<CheckReport>& reports) {
  std::string out = "check,model,status,value,tolerance,runtime_s,seed\n";
  for (const auto& r : reports)
    out += r.check + "," + r.model + "," + (r.passed ? "pass" : "fail") + "," + format_double(r.value) + "," +
           format_double(r.tolerance) + "," + format_double(r.runtime_s) + "," + std::to_string(r.seed) + "\n";
  return out;
}

void print_table(std::ostream& os, const std::vector<CheckReport>& reports) {
  os << std::left << std::setw(16) << "check" << std::setw(18) << "model" << std::setw(7) << "status"
     << std::setw(26) << "value" << std::setw(12) << "tolerance" << "runtime_s\n";
  for (const auto& r : reports) {
    os << std::setw(16) << r.check << std::setw(18) << r.model << std::setw(7) << (r.passed ? "PASS" : "FAIL")
       << std::setw(26) << format_double(r.value) << std::setw(12) << format_double(r.tolerance, "%.3g")
       << format_double(r.runtime_s, "%.3g") << "\n";
    if (!r.detail.empty()) os << "    " << r.detail << "\n";
  }
}

std::string write_report(const std::vector<CheckReport>& reports, const std::string& dir, const std::string& format) {
  const std::string path = (std::filesystem::path(dir) / ("report." + format)).string();
  std::ofstream out(path);
  if (!out) throw Error("cannot write report to " + path);
  out << (format == "csv" ? render_csv(reports) : render_json(reports));
  if (!out) throw Error("failed writing report to " + path);
  return path;
}

int exit_code(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; }) ? 0 : 1;
}

}  // namespace folia
