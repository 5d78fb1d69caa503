#include "folia/superposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace folia {

SuperpositionRule::SuperpositionRule(std::string name, int m, int state_dim, int param_dim, int vg_dim, Map psi,
                                     std::optional<FoliationChart> chart)
    : name_(std::move(name)),
      m_(m),
      state_dim_(state_dim),
      param_dim_(param_dim),
      vg_dim_(vg_dim),
      psi_(std::move(psi)),
      chart_(std::move(chart)) {
  if (m_ < 1 || state_dim_ < 1 || param_dim_ < 1) throw DimensionError("rule sizes must be positive");
  if (m_ * param_dim_ < vg_dim_)
    throw InvariantError("rule violates m * dim O >= dim V (" + std::to_string(m_) + " * " +
                         std::to_string(param_dim_) + " < " + std::to_string(vg_dim_) + ")");
}

Vector SuperpositionRule::apply(std::span<const Vector> solutions, const Vector& k) const {
  if (static_cast<int>(solutions.size()) != m_) throw DimensionError("rule expects m particular solutions");
  for (const auto& s : solutions)
    if (s.size() != state_dim_) throw DimensionError("particular solution has wrong dimension");
  if (k.size() != param_dim_) throw DimensionError("parameter has wrong dimension");
  return psi_(solutions, k);
}

namespace {

constexpr double kTranslationTol = 1e-6;

// d/de to_adapted(x + e X(x)) at e = 0
Vector pushforward(const FoliationChart& chart, const VectorField& X, const Vector& x) {
  const Vector v = X(x);
  const double h = fd_step(x);
  return (chart.to_adapted(x + h * v) - chart.to_adapted(x - h * v)) / (2.0 * h);
}

}  // namespace

SuperpositionRule derive_abelian_rule(const FoliatedSystem& fs, int trials, std::uint64_t seed) {
  const auto& alg = fs.realized.algebra;
  if (!alg.is_abelian())
    throw InapplicableError("abelian derivation inapplicable: Vessiot-Guldberg algebra is not abelian");
  if (!fs.chart.has_adapted()) throw InapplicableError("abelian derivation inapplicable: no adapted chart");

  const int n = fs.dim();
  const int s = fs.chart.leaf_dim();
  const int r = alg.dim();
  const auto samples = sample_points(fs.domain(), trials, seed);
  Matrix translation(s, r);
  for (std::size_t k = 0; k < samples.size(); ++k)
    for (int a = 0; a < r; ++a) {
      const Vector push = pushforward(fs.chart, fs.realized.fields[static_cast<std::size_t>(a)], samples[k]);
      if (n > s && push.tail(n - s).cwiseAbs().maxCoeff() > kTranslationTol)
        throw InapplicableError("abelian derivation inapplicable: field is not tangent to the leaves");
      if (k == 0) {
        translation.col(a) = push.head(s);
      } else if ((push.head(s) - translation.col(a)).cwiseAbs().maxCoeff() > kTranslationTol) {
        throw InapplicableError("abelian derivation inapplicable: field is not a constant translation");
      }
    }

  const int m = minimal_particular_solutions(fs.realized, 5, seed);
  const FoliationChart chart = fs.chart;
  auto psi = [chart, s](std::span<const Vector> sols, const Vector& k) {
    Vector y = chart.to_adapted(sols[0]);
    y.head(s) += k;
    return chart.from_adapted(y);
  };
  return SuperpositionRule("abelian-translation", m, n, s, r, std::move(psi), fs.chart);
}

double first_integral_residual(const FoliatedSystem& fs, std::span<const ScalarField> candidates, int m,
                               std::span<const Vector> samples) {
  const auto prolonged = diagonal_prolongation(fs.realized.fields, m + 1);
  double worst = 0.0;
  for (const auto& z : samples)
    for (const auto& X : prolonged)
      for (const auto& psi : candidates) worst = std::max(worst, std::abs(directional_derivative(X, psi, z)));
  return worst;
}

double leaf_preservation_defect(const SuperpositionRule& rule, const FoliatedSystem& fs, int trials,
                                std::uint64_t seed) {
  if (!rule.leaf_preserving()) throw InapplicableError("rule carries no foliation chart");
  const auto sampler = chart_leaf_sampler(fs);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> param(-2.0, 2.0);
  const auto& chart = *rule.chart();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto sols = sampler(rng, rule.m());
    Vector k(rule.param_dim());
    for (int i = 0; i < k.size(); ++i) k[i] = param(rng);
    const Vector out = rule.apply(sols, k);
    worst = std::max(worst, (chart.leaf_of(out) - chart.leaf_of(sols.front())).cwiseAbs().maxCoeff());
  }
  return worst;
}

LeafSampler chart_leaf_sampler(const FoliatedSystem& fs) {
  const FoliationChart chart = fs.chart;
  if (!chart.has_adapted()) throw InapplicableError("same-leaf sampling needs an adapted chart");
  const Domain domain = fs.domain();
  return [chart, domain](std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    const Vector base = chart.to_adapted(domain.sample(rng));
    std::vector<Vector> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
      if (++attempts > 10000) throw DomainError("cannot sample points on the leaf inside the domain");
      Vector y = base;
      for (int i = 0; i < chart.leaf_dim(); ++i) y[i] += shift(rng);
      const Vector x = chart.from_adapted(y);
      if (domain.contains(x)) out.push_back(x);
    }
    return out;
  };
}

LeafSampler distinct_point_sampler(Domain domain, double min_separation) {
  return [domain, min_separation](std::mt19937_64& rng, int count) {
    std::vector<Vector> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
      if (++attempts > 10000) throw DomainError("cannot draw well-separated points");
      const Vector x = domain.sample(rng);
      const bool far = std::all_of(out.begin(), out.end(), [&](const Vector& y) {
        return (x - y).cwiseAbs().maxCoeff() >= min_separation;
      });
      if (far) out.push_back(x);
    }
    return out;
  };
}

namespace {

constexpr int kMultistarts = 8;
constexpr int kMaxIterations = 200;
constexpr double kConverged = 1e-10;
constexpr double kAccept = 1e-8;

double residual_norm(const SuperpositionRule& rule, std::span<const Vector> sols, const Vector& target,
                     const Vector& k, Vector* r_out = nullptr) {
  try {
    Vector r = rule.apply(sols, k) - target;
    if (!r.allFinite()) return std::numeric_limits<double>::infinity();
    const double norm = r.norm();
    if (r_out) *r_out = std::move(r);
    return norm;
  } catch (const SingularConfigurationError&) {
    return std::numeric_limits<double>::infinity();
  }
}

ParameterSolve gauss_newton(const SuperpositionRule& rule, std::span<const Vector> sols, const Vector& target,
                            Vector k) {
  const int p = rule.param_dim();
  Vector r;
  double norm = residual_norm(rule, sols, target, k, &r);
  double damping = 1e-3;
  for (int it = 0; it < kMaxIterations && std::isfinite(norm) && norm > kConverged; ++it) {
    const double h = fd_step(k);
    Matrix J(rule.state_dim(), p);
    bool singular = false;
    for (int j = 0; j < p && !singular; ++j) {
      Vector kp = k, km = k;
      kp[j] += h;
      km[j] -= h;
      Vector rp, rm;
      if (!std::isfinite(residual_norm(rule, sols, target, kp, &rp)) ||
          !std::isfinite(residual_norm(rule, sols, target, km, &rm))) {
        singular = true;
        break;
      }
      J.col(j) = (rp - rm) / (2.0 * h);
    }
    if (singular) break;
    const Matrix JtJ = J.transpose() * J;
    const Vector Jtr = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      const Matrix A = JtJ + damping * Matrix::Identity(p, p);
      const Vector step = A.ldlt().solve(-Jtr);
      const Vector candidate = k + step;
      Vector rc;
      const double nc = residual_norm(rule, sols, target, candidate, &rc);
      if (nc < norm) {
        k = candidate;
        r = std::move(rc);
        norm = nc;
        damping = std::max(damping / 3.0, 1e-15);
        improved = true;
        break;
      }
      damping *= 4.0;
    }
    if (!improved) break;
  }
  return {k, norm};
}

}  // namespace

ParameterSolve solve_parameters(const SuperpositionRule& rule, std::span<const Vector> solutions,
                                const Vector& target, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> start(-2.0, 2.0);
  ParameterSolve best{Vector::Zero(rule.param_dim()), std::numeric_limits<double>::infinity()};
  for (int s = 0; s < kMultistarts; ++s) {
    Vector k0(rule.param_dim());
    // start magnitudes cycle through 1, 10, 100, 1000
    const double scale = std::pow(10.0, s % 4);
    for (int i = 0; i < k0.size(); ++i) k0[i] = scale * start(rng);
    ParameterSolve trial = gauss_newton(rule, solutions, target, std::move(k0));
    if (trial.residual < best.residual) best = std::move(trial);
    if (best.residual <= kConverged) break;
  }
  if (!(best.residual <= kAccept)) throw SolveError("no parameter found");
  return best;
}

RuleVerification verify_rule(const SuperpositionRule& rule, const TDependentVectorField& system,
                             const LeafSampler& sampler, double t0, double t1, int trials, std::uint64_t seed,
                             double h) {
  if (trials < 1) throw Error("trials must be positive");
  if (system.dim() != rule.state_dim()) throw DimensionError("rule and system dimensions differ");
  std::mt19937_64 master(seed);
  RuleVerification report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(master());
    const auto initial = sampler(rng, rule.m() + 1);
    std::vector<Trajectory> particular;
    for (int a = 0; a < rule.m(); ++a)
      particular.push_back(integrate(system, initial[static_cast<std::size_t>(a)], t0, t1, h));
    const Trajectory target = integrate(system, initial.back(), t0, t1, h);

    std::vector<Vector> at(static_cast<std::size_t>(rule.m()));
    for (int a = 0; a < rule.m(); ++a) at[static_cast<std::size_t>(a)] = particular[static_cast<std::size_t>(a)].states[0];
    const ParameterSolve solve = solve_parameters(rule, at, target.states[0], rng);
    report.param_solve_residual = std::max(report.param_solve_residual, solve.residual);

    for (std::size_t i = 0; i < target.size(); ++i) {
      for (int a = 0; a < rule.m(); ++a) at[static_cast<std::size_t>(a)] = particular[static_cast<std::size_t>(a)].states[i];
      const double err = (rule.apply(at, solve.k) - target.states[i]).cwiseAbs().maxCoeff();
      report.max_reconstruction_error = std::max(report.max_reconstruction_error, err);
    }
  }
  return report;
}

RuleVerification verify_rule(const SuperpositionRule& rule, const FoliatedSystem& fs, double t0, double t1,
                             int trials, std::uint64_t seed, double h) {
  return verify_rule(rule, assemble(fs), chart_leaf_sampler(fs), t0, t1, trials, seed, h);
}

}  // namespace folia
