#include "folia/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace folia {

// ---------------------------------------------------------------- Riccati

LieAlgebra riccati_algebra() {
  StructureConstants c(3);
  c.set_bracket(0, 1, std::array{1.0, 0.0, 0.0});
  c.set_bracket(0, 2, std::array{0.0, 2.0, 0.0});
  c.set_bracket(1, 2, std::array{0.0, 0.0, 1.0});
  return LieAlgebra({"X0", "X1", "X2"}, std::move(c));
}

double riccati_rule(double u1, double u2, double u3, double k) {
  const double den = (u3 - u2) + k * (u3 - u1);
  const double scale = std::max({1.0, std::abs(u1), std::abs(u2), std::abs(u3)}) * std::max(1.0, std::abs(k));
  if (std::abs(den) <= 1e-14 * scale) throw SingularConfigurationError("riccati rule denominator vanishes");
  return (u1 * (u3 - u2) + k * u2 * (u3 - u1)) / den;
}

double cross_ratio(double x1, double x2, double x3, double x4) {
  const double den = (x1 - x3) * (x2 - x4);
  if (den == 0.0 || x1 == x2 || x3 == x4) throw SingularConfigurationError("cross-ratio needs distinct points");
  return (x1 - x2) * (x3 - x4) / den;
}

RiccatiModel riccati_system(const RiccatiSpec& spec) {
  const Domain domain(1);
  std::vector<VectorField> fields;
  for (int p = 0; p < 3; ++p)
    fields.emplace_back(
        domain, [p](const Vector& x) { return Vector::Constant(1, std::pow(x[0], p)); },
        [p](const Vector& x) { return Matrix::Constant(1, 1, p == 0 ? 0.0 : p * std::pow(x[0], p - 1)); });
  std::vector<Coefficient> coeffs;
  for (const auto& a : {spec.a0, spec.a1, spec.a2}) coeffs.emplace_back([a](double t, const Vector&) { return a(t); });
  FoliatedSystem fs(RealizedAlgebra(riccati_algebra(), std::move(fields)), std::move(coeffs),
                    FoliationChart::coordinate(domain, {0}));
  auto field = assemble(fs);
  auto psi = [](std::span<const Vector> u, const Vector& k) {
    return Vector::Constant(1, riccati_rule(u[0][0], u[1][0], u[2][0], k[0]));
  };
  SuperpositionRule rule("riccati", 3, 1, 1, 3, psi);
  return RiccatiModel{std::move(fs), std::move(field), std::move(rule)};
}

double cross_ratio_drift(const TDependentVectorField& field, const std::vector<double>& x0, double t0, double t1,
                         double h) {
  if (x0.size() != 4) throw DimensionError("cross-ratio drift needs four initial conditions");
  std::vector<Trajectory> runs;
  for (double x : x0) runs.push_back(integrate(field, Vector::Constant(1, x), t0, t1, h));
  auto at = [&](std::size_t i) {
    return cross_ratio(runs[0].states[i][0], runs[1].states[i][0], runs[2].states[i][0], runs[3].states[i][0]);
  };
  const double start = at(0);
  double worst = 0.0;
  for (std::size_t i = 0; i < runs[0].size(); ++i) worst = std::max(worst, std::abs(at(i) - start));
  return worst;
}

// ------------------------------------------------------- Hamilton-Jacobi

Vector hamiltonian_gradient(const HamiltonJacobiSpec& spec, double t, const Vector& P) {
  if (spec.dH) return spec.dH(t, P);
  const double h = fd_step(P);
  Vector g(P.size());
  for (int i = 0; i < P.size(); ++i) {
    Vector p = P, m = P;
    p[i] += h;
    m[i] -= h;
    g[i] = (spec.H(t, p) - spec.H(t, m)) / (2.0 * h);
  }
  return g;
}

double hamiltonian_gradient_consistency(const HamiltonJacobiSpec& spec, int samples, std::uint64_t seed) {
  HamiltonJacobiSpec numeric{spec.n, spec.H, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double t = 2.0 * u(rng);
    Vector P(spec.n);
    for (int i = 0; i < spec.n; ++i) P[i] = 2.0 * u(rng);
    const Vector exact = hamiltonian_gradient(spec, t, P);
    const Vector fd = hamiltonian_gradient(numeric, t, P);
    worst = std::max(worst, (exact - fd).cwiseAbs().maxCoeff() / std::max(1.0, exact.cwiseAbs().maxCoeff()));
  }
  return worst;
}

namespace {

// Abelian algebra of constant fields scale * d/dx^i, i < n, on R^{2n}.
std::vector<VectorField> translation_fields(const Domain& domain, int n, double scale) {
  std::vector<VectorField> fields;
  for (int i = 0; i < n; ++i)
    fields.emplace_back(
        domain,
        [i, n, scale](const Vector&) {
          Vector v = Vector::Zero(2 * n);
          v[i] = scale;
          return v;
        },
        [n](const Vector&) { return Matrix::Zero(2 * n, 2 * n); });
  return fields;
}

GroupAction translation_action(const Domain& domain, int n, double scale) {
  return GroupAction::abelian(n, domain, [n, scale](const Matrix& g, const Vector& x) {
    Vector y = x;
    y.head(n) -= scale * g.col(0);
    return y;
  });
}

AbelianModel abelian_model(FoliatedSystem fs, GroupAction action) {
  const int n = fs.dim() / 2;
  LeafRepresentative rep = [n](const Vector& k) {
    Vector x = Vector::Zero(2 * n);
    x.tail(n) = k;
    return x;
  };
  auto rule = derive_abelian_rule(fs);
  return AbelianModel{std::move(fs), std::move(action), std::move(rep), std::move(rule)};
}

std::vector<int> head_indices(int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  return idx;
}

}  // namespace

AbelianModel hj_system(const HamiltonJacobiSpec& spec) {
  const int n = spec.n;
  if (n < 1) throw DimensionError("n must be positive");
  const Domain domain(2 * n);
  std::vector<Coefficient> coeffs;
  for (int i = 0; i < n; ++i)
    coeffs.emplace_back(
        [spec, i, n](double t, const Vector& x) { return -hamiltonian_gradient(spec, t, x.tail(n))[i]; });
  FoliatedSystem fs(RealizedAlgebra(LieAlgebra::abelian(n), translation_fields(domain, n, 1.0)), std::move(coeffs),
                    FoliationChart::coordinate(domain, head_indices(n)));
  return abelian_model(std::move(fs), translation_action(domain, n, 1.0));
}

// -------------------------------------------------------------------- Lax

Matrix lax_matrix(int n, const Vector& v) {
  if (v.size() != 2 * n) throw DimensionError("lax state must have 2n entries");
  Matrix V = Matrix::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    V(2 * a, 2 * a) = 2.0 * v[n + a];
    V(2 * a, 2 * a + 1) = v[a];
  }
  return V;
}

Matrix lax_m(const LaxSpec& spec, double t, const Vector& v) {
  const int n = spec.n;
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  const Vector p = v.tail(n);
  for (int a = 0; a < n; ++a) m(2 * a, 2 * a + 1) = -spec.f[static_cast<std::size_t>(a)](t, p);
  return m;
}

Vector lax_commutator_rate(const LaxSpec& spec, double t, const Vector& v) {
  const int n = spec.n;
  const Matrix V = lax_matrix(n, v);
  const Matrix m = lax_m(spec, t, v);
  const Matrix C = V * m - m * V;
  Vector rate(2 * n);
  for (int a = 0; a < n; ++a) {
    rate[a] = C(2 * a, 2 * a + 1);
    rate[n + a] = C(2 * a, 2 * a) / 2.0;
  }
  return rate;
}

std::vector<double> spectrum(int n, const Vector& v) {
  const Eigen::EigenSolver<Matrix> solver(lax_matrix(n, v), false);
  std::vector<double> out;
  for (const auto& z : solver.eigenvalues()) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

double spectrum_drift(int n, const Trajectory& traj) {
  if (traj.size() == 0) return 0.0;
  const auto start = spectrum(n, traj.states.front());
  double worst = 0.0;
  for (const auto& s : traj.states) {
    const auto now = spectrum(n, s);
    for (std::size_t i = 0; i < now.size(); ++i) worst = std::max(worst, std::abs(now[i] - start[i]));
  }
  return worst;
}

namespace {

Domain lax_domain(const LaxSpec& spec) {
  const int n = spec.n;
  Domain domain(2 * n);
  Vector lo(2 * n), hi(2 * n);
  lo.head(n).setConstant(-1.0);
  hi.head(n).setConstant(1.0);
  lo.tail(n).setConstant(0.5);
  hi.tail(n).setConstant(2.0);
  domain.sampling_box(lo, hi);
  if (spec.leaf_guard > 0.0)
    for (int a = 0; a < n; ++a) domain.exclude_band(n + a, spec.leaf_guard);
  return domain;
}

void check_lax_spec(const LaxSpec& spec) {
  if (spec.n < 1) throw DimensionError("n must be positive");
  if (static_cast<int>(spec.f.size()) != spec.n) throw DimensionError("lax model needs n coefficient maps");
}

}  // namespace

AbelianModel lax_system(const LaxSpec& spec) {
  check_lax_spec(spec);
  const int n = spec.n;
  const Domain domain = lax_domain(spec);
  std::vector<Coefficient> coeffs;
  for (int a = 0; a < n; ++a)
    coeffs.emplace_back([spec, a](double t, const Vector& v) { return 0.5 * lax_commutator_rate(spec, t, v)[a]; });
  FoliatedSystem fs(RealizedAlgebra(LieAlgebra::abelian(n), translation_fields(domain, n, 2.0)), std::move(coeffs),
                    FoliationChart::coordinate(domain, head_indices(n)));
  return abelian_model(std::move(fs), translation_action(domain, n, 2.0));
}

LaxAdjointModel lax_adjoint_system(const LaxSpec& spec) {
  check_lax_spec(spec);
  const int n = spec.n;
  Domain domain = lax_domain(spec);
  for (int a = 0; a < n; ++a) domain.exclude_band(n + a, std::max(spec.leaf_guard, 1e-6));
  std::vector<VectorField> fields;
  for (int a = 0; a < n; ++a)
    fields.emplace_back(
        domain,
        [a, n](const Vector& v) {
          Vector out = Vector::Zero(2 * n);
          out[a] = 2.0 * v[n + a];
          return out;
        },
        [a, n](const Vector&) {
          Matrix J = Matrix::Zero(2 * n, 2 * n);
          J(a, n + a) = 2.0;
          return J;
        });
  std::vector<Coefficient> coeffs;
  for (int a = 0; a < n; ++a)
    coeffs.emplace_back([spec, a, n](double t, const Vector& v) {
      return -spec.f[static_cast<std::size_t>(a)](t, v.tail(n));
    });
  FoliatedSystem fs(RealizedAlgebra(LieAlgebra::abelian(n), std::move(fields)), std::move(coeffs),
                    FoliationChart::coordinate(domain, head_indices(n)));

  std::vector<Matrix> gens;
  for (int a = 0; a < n; ++a) {
    Matrix e = Matrix::Zero(2 * n, 2 * n);
    e(2 * a, 2 * a + 1) = 1.0;
    gens.push_back(std::move(e));
  }
  auto act = [n](const Matrix& g, const Vector& v) {
    const Matrix W = g * lax_matrix(n, v) * g.inverse();
    Vector out(2 * n);
    for (int a = 0; a < n; ++a) {
      out[a] = W(2 * a, 2 * a + 1);
      out[n + a] = W(2 * a, 2 * a) / 2.0;
    }
    return out;
  };
  GroupAction action = GroupAction::matrix(MatrixRealization(LieAlgebra::abelian(n), std::move(gens)), domain, act);
  LeafRepresentative rep = [n](const Vector& k) {
    Vector v = Vector::Zero(2 * n);
    v.tail(n) = k;
    return v;
  };
  return LaxAdjointModel{std::move(fs), std::move(action), std::move(rep)};
}

LaxSpec lax_spec_from_hamiltonian(const HamiltonJacobiSpec& hj) {
  LaxSpec spec;
  spec.n = hj.n;
  spec.leaf_guard = 1e-6;
  for (int a = 0; a < hj.n; ++a)
    spec.f.emplace_back([hj, a](double t, const Vector& p) { return hamiltonian_gradient(hj, t, p)[a] / p[a]; });
  return spec;
}

EquivalenceReport hj_lax_equivalence(const HamiltonJacobiSpec& hj, const Vector& x0_hj, const Vector& v0_lax,
                                     double t0, double t1, double h, std::uint64_t seed) {
  const int n = hj.n;
  if (x0_hj.size() != 2 * n || v0_lax.size() != 2 * n) throw DimensionError("states must have 2n entries");
  if ((x0_hj.tail(n) - v0_lax.tail(n)).cwiseAbs().maxCoeff() > 0.0)
    throw DomainError("leaf mismatch between the HJ and Lax initial conditions");

  const AbelianModel hjm = hj_system(hj);
  const AbelianModel lax = lax_system(lax_spec_from_hamiltonian(hj));
  const AutomorphicSystem a_hj = reduce(hjm.system, hjm.action, hjm.representative, 100, seed);
  const AutomorphicSystem a_lax = reduce(lax.system, lax.action, lax.representative, 100, seed);

  EquivalenceReport report;
  const Vector k0 = x0_hj.tail(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> time(t0, t1);
  const Domain& leaves = lax.system.domain();
  for (int s = 0; s < 50; ++s) {
    const double t = time(rng);
    const Vector k = s == 0 ? k0 : Vector(leaves.sample(rng).tail(n));
    report.shared_coeff_residual = std::max(
        report.shared_coeff_residual, (a_hj.generator_at(t, k) - a_lax.generator_at(t, k)).cwiseAbs().maxCoeff());
  }

  const GroupCurve lambda = solve_abelian(a_hj, k0, t0, t1, h);
  const Trajectory direct_hj = integrate(assemble(hjm.system), x0_hj, t0, t1, h);
  const Trajectory direct_lax = integrate(assemble(lax.system), v0_lax, t0, t1, h);
  report.hj_error = max_deviation(reconstruct(hjm.action, lambda, x0_hj), direct_hj);
  report.lax_error = max_deviation(reconstruct(lax.action, lambda, v0_lax), direct_lax);

  for (std::size_t i = 0; i < direct_hj.size(); ++i) {
    const Vector dq = direct_hj.states[i].head(n) - x0_hj.head(n);
    const Vector dv = direct_lax.states[i].head(n) - v0_lax.head(n);
    report.identification_residual =
        std::max(report.identification_residual, (dv - 2.0 * dq).cwiseAbs().maxCoeff());
    const Vector p = direct_lax.states[i].tail(n);
    const Vector dH = hamiltonian_gradient(hj, direct_lax.times[i], p);
    const Vector alternative = 4.0 * p.cwiseProduct(dH);
    report.alternative_rate_residual =
        std::max(report.alternative_rate_residual, (alternative + 2.0 * dH).cwiseAbs().maxCoeff());
  }
  return report;
}

// ---------------------------------------------------------------- Ermakov

LieAlgebra ermakov_algebra() {
  StructureConstants c(3);
  c.set_bracket(0, 1, std::array{1.0, 0.0, 0.0});
  c.set_bracket(0, 2, std::array{0.0, 2.0, 0.0});
  c.set_bracket(1, 2, std::array{0.0, 0.0, 1.0});
  return LieAlgebra({"X1", "X2", "X3"}, std::move(c));
}

double lewis(const ErmakovSpec& spec, const Vector& s) {
  const double x = s[0], y = s[1], vx = s[2], vy = s[3];
  const double L = x * vy - y * vx;
  return 0.5 * L * L + spec.c1 * x / y + spec.c2 * y / x;
}

namespace {

Vector lewis_gradient(const ErmakovSpec& spec, const Vector& s) {
  const double x = s[0], y = s[1], vx = s[2], vy = s[3];
  const double L = x * vy - y * vx;
  Vector g(4);
  g[0] = L * vy + spec.c1 / y - spec.c2 * y / (x * x);
  g[1] = -L * vx - spec.c1 * x / (y * y) + spec.c2 / x;
  g[2] = -L * y;
  g[3] = L * x;
  return g;
}

Domain ermakov_domain(const ErmakovSpec& spec) {
  Domain domain(4);
  domain.exclude_band(0, spec.eps).exclude_band(1, spec.eps);
  Vector lo(4), hi(4);
  lo << 0.5, 0.5, -1.0, -1.0;
  hi << 1.5, 1.5, 1.0, 1.0;
  domain.sampling_box(lo, hi);
  return domain;
}

}  // namespace

ScalarField lewis_field(const ErmakovSpec& spec) {
  return ScalarField([spec](const Vector& s) { return lewis(spec, s); },
                     [spec](const Vector& s) { return lewis_gradient(spec, s); });
}

ScalarField ermakov_coefficient(const ErmakovSpec& spec, double t) {
  return ScalarField([spec, t](const Vector& s) { return spec.omega2(t, lewis(spec, s)); },
                     [spec, t](const Vector& s) {
                       const double I = lewis(spec, s);
                       const double h = 1e-6 * std::max(1.0, std::abs(I));
                       const double d = (spec.omega2(t, I + h) - spec.omega2(t, I - h)) / (2.0 * h);
                       return Vector(d * lewis_gradient(spec, s));
                     });
}

FoliatedSystem ermakov_system(const ErmakovSpec& spec) {
  const Domain domain = ermakov_domain(spec);
  const double c1 = spec.c1, c2 = spec.c2;
  std::vector<VectorField> fields;
  fields.emplace_back(domain, [c1, c2](const Vector& s) {
    Vector out(4);
    out << s[2], s[3], c2 / (s[0] * s[0] * s[1]), c1 / (s[0] * s[1] * s[1]);
    return out;
  });
  fields.emplace_back(domain, [](const Vector& s) {
    Vector out(4);
    out << 0.5 * s[0], 0.5 * s[1], -0.5 * s[2], -0.5 * s[3];
    return out;
  });
  fields.emplace_back(domain, [](const Vector& s) {
    Vector out(4);
    out << 0.0, 0.0, -s[0], -s[1];
    return out;
  });
  std::vector<Coefficient> coeffs;
  coeffs.emplace_back([](double, const Vector&) { return 1.0; });
  coeffs.emplace_back([](double, const Vector&) { return 0.0; });
  coeffs.emplace_back([spec](double t, const Vector& s) { return spec.omega2(t, lewis(spec, s)); });
  return FoliatedSystem(RealizedAlgebra(ermakov_algebra(), std::move(fields)), std::move(coeffs),
                        FoliationChart::labels_only(domain, 3, {lewis_field(spec)}), 0.0, 5.0);
}

GroupAction ermakov_matrix_action(const ErmakovSpec& spec) {
  Matrix A1(2, 2), A2(2, 2), A3(2, 2);
  A1 << 0, -1, 0, 0;
  A2 << -0.5, 0, 0, 0.5;
  A3 << 0, 0, 1, 0;
  return GroupAction::matrix(MatrixRealization(ermakov_algebra(), {A1, A2, A3}), ermakov_domain(spec),
                             [](const Matrix& g, const Vector& s) {
                               Vector out(4);
                               const Eigen::Vector2d px = g * Eigen::Vector2d(s[0], s[2]);
                               const Eigen::Vector2d py = g * Eigen::Vector2d(s[1], s[3]);
                               out << px[0], py[0], px[1], py[1];
                               return out;
                             });
}

LeafRepresentative ermakov_representative(const ErmakovSpec& spec) {
  return [spec](const Vector& k) {
    const double excess = k[0] - spec.c1 - spec.c2;
    if (excess < 0.0) throw DomainError("no representative with x = y = 1 on this leaf");
    Vector s(4);
    s << 1.0, 1.0, 0.0, std::sqrt(2.0 * excess);
    return s;
  };
}

// ------------------------------------------------------- sl(2) adjoint

AdjointModel sl2_adjoint_system() {
  const LieAlgebra alg = LieAlgebra::sl2();
  const InvariantMetric metric = InvariantMetric::killing(alg);
  const Matrix K = metric.g();
  Domain domain(3);
  std::vector<VectorField> fields;
  for (int b = 0; b < 3; ++b) {
    const Matrix M = -alg.adjoint_matrix(b);
    fields.emplace_back(domain, [M](const Vector& v) { return Vector(M * v); }, [M](const Vector&) { return M; });
  }
  const ScalarField casimir([K](const Vector& v) { return v.dot(K * v); },
                            [K](const Vector& v) { return Vector(2.0 * K * v); });
  std::vector<Coefficient> coeffs;
  coeffs.emplace_back([](double t, const Vector&) { return 1.0 + 0.5 * std::sin(t); });
  coeffs.emplace_back([](double t, const Vector&) { return 0.3 * std::cos(t); });
  coeffs.emplace_back([K](double, const Vector& v) { return 0.1 * v.dot(K * v); });
  std::vector<ScalarField> hams;
  for (int b = 0; b < 3; ++b) {
    const Vector row = K.row(b).transpose();
    hams.emplace_back([row](const Vector& v) { return row.dot(v); }, [row](const Vector&) { return row; });
  }
  FoliatedSystem fs(RealizedAlgebra(alg, std::move(fields)), std::move(coeffs),
                    FoliationChart::labels_only(domain, 2, {casimir}));
  return AdjointModel{std::move(fs), metric, std::move(hams)};
}

// --------------------------------------------------------------- registry

const std::vector<ModelInfo>& model_registry() {
  static const std::vector<ModelInfo> registry = {
      {"riccati", "dx/dt = a0 + a1 x + a2 x^2 (defaults a = (1, 0, -1))"},
      {"hamilton_jacobi", "dQ/dt = -dH/dP, dP/dt = 0 (defaults n = 2, H = sum_cos)"},
      {"lax", "dv/dt = [v, m] on gl(P)-type blocks (defaults n = 2, H = sum_cos)"},
      {"ermakov", "generalized Ermakov system with Lewis invariant (defaults omega2 = 1+0.1*sin(t), c1 = c2 = 1)"},
      {"sl2_adjoint", "adjoint-orbit foliated system on sl(2) with the Kirillov bracket"},
  };
  return registry;
}

bool is_registered(const std::string& name) {
  const auto& reg = model_registry();
  return std::any_of(reg.begin(), reg.end(), [&](const ModelInfo& m) { return m.name == name; });
}

}  // namespace folia
