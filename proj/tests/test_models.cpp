#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "folia/models.hpp"

using namespace folia;

namespace {

HamiltonJacobiSpec cos_hamiltonian(int n) {
  return HamiltonJacobiSpec{n, [](double t, const Vector& P) { return (t * P.array()).cos().sum(); }, {}};
}

LaxSpec unit_lax() {
  LaxSpec spec;
  spec.n = 1;
  spec.f = {[](double, const Vector&) { return 1.0; }};
  return spec;
}

ErmakovSpec default_ermakov() {
  ErmakovSpec spec;
  spec.omega2 = [](double t, double) { return 1.0 + 0.1 * std::sin(t); };
  return spec;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

// ---------------------------------------------------------------- Riccati

TEST(Riccati, BracketOfX0AndX2) {
  const RiccatiModel m = riccati_system({[](double) { return 1.0; }, [](double) { return 0.0; },
                                         [](double) { return -1.0; }});
  const auto& X = m.system.realized.fields;
  EXPECT_NEAR(lie_bracket_at(X[0], X[2], vec({1.0}))[0], 2.0, 1e-8);
  EXPECT_LE(bracket_residual(m.system.realized, sample_points(m.system.domain(), 50, 1)), 1e-6);
  EXPECT_EQ(minimal_particular_solutions(m.system.realized), 3);
  EXPECT_EQ(m.rule.m(), 3);
}

TEST(Riccati, TanhSolution) {
  const RiccatiModel m = riccati_system({[](double) { return 1.0; }, [](double) { return 0.0; },
                                         [](double) { return -1.0; }});
  const Trajectory traj = integrate(m.field, vec({0.0}), 0.0, 2.0, 1e-3);
  EXPECT_NEAR(traj.final_state()[0], std::tanh(2.0), 1e-11);
}

TEST(Riccati, RuleValues) {
  EXPECT_NEAR(riccati_rule(1, 2, 3, 1), 5.0 / 3.0, 1e-15);
  EXPECT_NEAR(riccati_rule(0, 1, 2, 1), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(riccati_rule(0.3, 1.1, 2.5, 0.0), 0.3);
  EXPECT_THROW(riccati_rule(1, 1, 1, 1), SingularConfigurationError);
  EXPECT_THROW(cross_ratio(1, 1, 2, 3), SingularConfigurationError);
  EXPECT_DOUBLE_EQ(cross_ratio(0, 1, 2, 3), (0.0 - 1.0) * (2.0 - 3.0) / ((0.0 - 2.0) * (1.0 - 3.0)));
}

TEST(Riccati, CrossRatioConserved) {
  const RiccatiModel m = riccati_system({[](double) { return 1.0; }, [](double) { return 0.0; },
                                         [](double) { return -1.0; }});
  EXPECT_LE(cross_ratio_drift(m.field, {-0.5, 0.0, 0.4, 0.9}, 0.0, 2.0), 1e-6);
}

TEST(Riccati, TimeDependentRuleVerifies) {
  const RiccatiModel m = riccati_system({[](double t) { return 1.0 + 0.2 * std::cos(t); },
                                         [](double t) { return 0.1 * t; }, [](double) { return -1.0; }});
  Domain d(1);
  d.bound(0, -0.9, 0.9);
  const RuleVerification v = verify_rule(m.rule, m.field, distinct_point_sampler(d, 0.2), 0.0, 1.0, 3);
  EXPECT_LE(v.max_reconstruction_error, 1e-8);
}

TEST(Riccati, NotAbelian) {
  const RiccatiModel m = riccati_system({[](double) { return 1.0; }, [](double) { return 0.0; },
                                         [](double) { return -1.0; }});
  try {
    derive_abelian_rule(m.system);
    FAIL();
  } catch (const InapplicableError& e) {
    EXPECT_NE(std::string(e.what()).find("abelian derivation inapplicable"), std::string::npos);
  }
}

// ------------------------------------------------------- Hamilton-Jacobi

TEST(HamiltonJacobi, AssembledField) {
  const AbelianModel m = hj_system(cos_hamiltonian(1));
  const double t = 0.7, P = 1.3;
  const Vector v = assemble(m.system)(t, vec({0.2, P}));
  EXPECT_NEAR(v[0], t * std::sin(t * P), 1e-9);
  EXPECT_EQ(v[1], 0.0);
}

TEST(HamiltonJacobi, LeafLabelsAreMomenta) {
  const AbelianModel m = hj_system(cos_hamiltonian(2));
  EXPECT_EQ(m.system.chart.leaf_of(vec({1, 2, 3, 4})), vec({3, 4}));
}

TEST(HamiltonJacobi, GradientConsistency) {
  const HamiltonJacobiSpec analytic{2, cos_hamiltonian(2).H, [](double t, const Vector& P) {
                                      return Vector(-t * (t * P.array()).sin());
                                    }};
  EXPECT_LE(hamiltonian_gradient_consistency(analytic), 1e-8);
  const HamiltonJacobiSpec wrong{2, cos_hamiltonian(2).H, [](double t, const Vector& P) {
                                   return Vector(t * (t * P.array()).sin());
                                 }};
  EXPECT_GT(hamiltonian_gradient_consistency(wrong), 1e-3);
}

TEST(HamiltonJacobi, FoliatedForSmallN) {
  for (int n = 1; n <= 3; ++n) {
    const AbelianModel m = hj_system(cos_hamiltonian(n));
    const FoliatedReport r = verify_foliated(m.system, 100);
    EXPECT_TRUE(r.passed()) << "n=" << n;
    EXPECT_EQ(minimal_particular_solutions(m.system.realized), 1);
  }
}

TEST(HamiltonJacobi, RuleAndLeafDrift) {
  const AbelianModel m = hj_system(cos_hamiltonian(2));
  EXPECT_LE(verify_rule(m.rule, m.system, 0.0, 2.0, 5).max_reconstruction_error, 1e-8);
  const Trajectory traj = integrate(assemble(m.system), vec({0.1, -0.2, 0.8, 1.4}), 0.0, 2.0);
  EXPECT_EQ(leaf_drift(traj, m.system.chart), 0.0);
}

// -------------------------------------------------------------------- Lax

TEST(Lax, UnitCoefficientField) {
  const AbelianModel m = lax_system(unit_lax());
  const Vector v = assemble(m.system)(0.0, vec({5, 3}));
  EXPECT_DOUBLE_EQ(v[0], -6.0);
  EXPECT_EQ(v[1], 0.0);
  EXPECT_EQ(m.system.chart.leaf_of(vec({5, 3})), vec({3}));
}

TEST(Lax, RuleIsTranslation) {
  const AbelianModel m = lax_system(unit_lax());
  EXPECT_EQ(m.rule.m(), 1);
  const std::vector<Vector> s{vec({5, 3})};
  EXPECT_EQ(m.rule.apply(s, vec({4})), vec({9, 3}));
}

TEST(Lax, MatrixAndSpectrum) {
  Matrix expected(2, 2);
  expected << 6, 5, 0, 0;
  EXPECT_EQ(lax_matrix(1, vec({5, 3})), expected);
  const auto sigma = spectrum(1, vec({5, 3}));
  ASSERT_EQ(sigma.size(), 2u);
  EXPECT_NEAR(sigma[0], 0.0, 1e-15);
  EXPECT_NEAR(sigma[1], 6.0, 1e-15);
}

TEST(Lax, IsospectralAndLeafPreserving) {
  const LaxSpec spec = lax_spec_from_hamiltonian(cos_hamiltonian(2));
  const AbelianModel m = lax_system(spec);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::mt19937_64 rng(seed);
    const Trajectory traj = integrate(assemble(m.system), m.system.domain().sample(rng), 0.0, 2.0);
    EXPECT_LE(spectrum_drift(2, traj), 1e-12);
    EXPECT_EQ(leaf_drift(traj, m.system.chart), 0.0);
  }
}

TEST(Lax, FoliatedForSmallN) {
  for (int n = 1; n <= 3; ++n) {
    const AbelianModel m = lax_system(lax_spec_from_hamiltonian(cos_hamiltonian(n)));
    EXPECT_TRUE(verify_foliated(m.system, 100).passed()) << "n=" << n;
    EXPECT_EQ(minimal_particular_solutions(m.system.realized), 1);
  }
}

TEST(Lax, RuleVerifies) {
  const AbelianModel m = lax_system(lax_spec_from_hamiltonian(cos_hamiltonian(2)));
  EXPECT_LE(verify_rule(m.rule, m.system, 0.0, 2.0, 5).max_reconstruction_error, 1e-8);
}

TEST(Lax, QuadraticHamiltonianReconstruction) {
  const HamiltonJacobiSpec quad{1, [](double, const Vector& P) { return 0.5 * P.squaredNorm(); },
                                [](double, const Vector& P) { return P; }};
  const AbelianModel m = lax_system(lax_spec_from_hamiltonian(quad));
  const AutomorphicSystem asys = reduce(m.system, m.action, m.representative);
  const GroupCurve lambda = solve_abelian(asys, vec({3}), 0.0, 1.0);
  EXPECT_NEAR(lambda.elements.back()(0, 0), 3.0, 1e-12);
  const Trajectory rec = reconstruct(m.action, lambda, vec({5, 3}));
  EXPECT_NEAR(rec.final_state()[0], -1.0, 1e-12);
  const Trajectory direct = integrate(assemble(m.system), vec({5, 3}), 0.0, 1.0);
  EXPECT_NEAR(direct.final_state()[0], -1.0, 1e-10);
}

TEST(Lax, AdjointPathMatchesTranslationPath) {
  const LaxSpec spec = lax_spec_from_hamiltonian(cos_hamiltonian(2));
  const AbelianModel trans = lax_system(spec);
  const LaxAdjointModel adj = lax_adjoint_system(spec);
  for (const auto& v : sample_points(trans.system.domain(), 20, 9))
    EXPECT_LE((assemble(trans.system)(0.9, v) - assemble(adj.system)(0.9, v)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Lax, RejectsBadSpec) {
  LaxSpec spec;
  spec.n = 2;
  spec.f = {[](double, const Vector&) { return 1.0; }};
  EXPECT_THROW(lax_system(spec), DimensionError);
}

// ------------------------------------------------------------ equivalence

TEST(Equivalence, SharedReductionForCosine) {
  const Vector x0 = vec({0.3, -0.1, 0.9, 1.6});
  Vector v0 = vec({-0.4, 0.2, 0.9, 1.6});
  const EquivalenceReport r = hj_lax_equivalence(cos_hamiltonian(2), x0, v0, 0.0, 2.0);
  EXPECT_LE(r.shared_coeff_residual, 1e-12);
  EXPECT_LE(r.hj_error, 1e-8);
  EXPECT_LE(r.lax_error, 1e-8);
  EXPECT_LE(r.identification_residual, 1e-8);
  EXPECT_TRUE(std::isfinite(r.alternative_rate_residual));
}

TEST(Equivalence, ConstantHamiltonian) {
  const HamiltonJacobiSpec constant{1, [](double, const Vector&) { return 2.0; }, {}};
  const EquivalenceReport r = hj_lax_equivalence(constant, vec({0.5, 1.0}), vec({0.2, 1.0}), 0.0, 1.0);
  EXPECT_LE(r.shared_coeff_residual, 1e-12);
  EXPECT_LE(r.hj_error, 1e-12);
  EXPECT_LE(r.lax_error, 1e-12);
}

TEST(Equivalence, LeafMismatch) {
  EXPECT_THROW(hj_lax_equivalence(cos_hamiltonian(1), vec({0, 1}), vec({0, 1.5}), 0.0, 1.0), DomainError);
}

TEST(Equivalence, QuarterTurnCosine) {
  const AbelianModel m = hj_system(cos_hamiltonian(1));
  const Trajectory traj = integrate(assemble(m.system), vec({0.0, 1.0}), 0.0, std::numbers::pi);
  EXPECT_NEAR(traj.final_state()[0], std::numbers::pi, 1e-8);
}

// ---------------------------------------------------------------- Ermakov

TEST(Ermakov, LewisValues) {
  const ErmakovSpec spec = default_ermakov();
  EXPECT_DOUBLE_EQ(lewis(spec, vec({1, 1, 0, 1})), 2.5);
  EXPECT_DOUBLE_EQ(lewis(spec, vec({1, 1, 0, 0})), 2.0);
  const ScalarField I = lewis_field(spec);
  for (const auto& s : sample_points(ermakov_system(spec).domain(), 20, 2)) {
    const double h = 1e-6;
    for (int i = 0; i < 4; ++i) {
      Vector sp = s, sm = s;
      sp[i] += h;
      sm[i] -= h;
      EXPECT_NEAR(I.gradient(s)[i], (I(sp) - I(sm)) / (2 * h), 1e-6);
    }
  }
}

TEST(Ermakov, BracketRelations) {
  const FoliatedSystem fs = ermakov_system(default_ermakov());
  EXPECT_LE(bracket_residual(fs.realized, sample_points(fs.domain(), 100, kDefaultSeed)), 1e-6);
}

TEST(Ermakov, LewisIsCommonFirstIntegral) {
  const ErmakovSpec spec = default_ermakov();
  const FoliatedSystem fs = ermakov_system(spec);
  const ScalarField I = lewis_field(spec);
  double worst = 0.0;
  for (const auto& s : sample_points(fs.domain(), 100, kDefaultSeed))
    for (const auto& X : fs.realized.fields) worst = std::max(worst, std::abs(directional_derivative(X, I, s)));
  EXPECT_LE(worst, 1e-8);
  const FoliatedReport r = verify_foliated(fs, 100);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.com_residual, 1e-8);
}

TEST(Ermakov, InvariantConservedOverFiveSeconds) {
  const ErmakovSpec spec = default_ermakov();
  const FoliatedSystem fs = ermakov_system(spec);
  const Trajectory traj = integrate(assemble(fs), vec({1.0, 1.2, 0.1, -0.3}), 0.0, 5.0, 1e-3);
  EXPECT_LE(leaf_drift(traj, fs.chart, true), 1e-6);
}

TEST(Ermakov, FourthOrderConvergence) {
  const FoliatedSystem fs = ermakov_system(default_ermakov());
  const double p = convergence_order(assemble(fs), vec({1.0, 1.2, 0.1, -0.3}), 0.0, 2.0, 0.01);
  EXPECT_GE(p, 3.5);
  EXPECT_LE(p, 4.5);
}

TEST(Ermakov, DomainGuard) {
  const FoliatedSystem fs = ermakov_system(default_ermakov());
  EXPECT_FALSE(fs.domain().contains(vec({0.0, 1.0, 0.0, 0.0})));
  EXPECT_FALSE(fs.domain().contains(vec({1.0, 5e-7, 0.0, 0.0})));
  EXPECT_TRUE(fs.domain().contains(vec({-1.0, 2.0, 0.0, 0.0})));
}

TEST(Ermakov, Representative) {
  const ErmakovSpec spec = default_ermakov();
  const auto rep = ermakov_representative(spec);
  EXPECT_NEAR(lewis(spec, rep(vec({3.7}))), 3.7, 1e-14);
  EXPECT_THROW(rep(vec({1.0})), DomainError);
}

// ------------------------------------------------------- sl(2) adjoint

TEST(Sl2Adjoint, FoliatedWithCasimirLeaves) {
  const AdjointModel m = sl2_adjoint_system();
  EXPECT_TRUE(verify_foliated(m.system, 100).passed());
  const Trajectory traj = integrate(assemble(m.system), vec({0.3, -0.2, 0.5}), 0.0, 2.0);
  EXPECT_LE(leaf_drift(traj, m.system.chart, true), 1e-9);
}

// --------------------------------------------------------------- registry

TEST(Registry, KnownModels) {
  for (const auto* name : {"riccati", "hamilton_jacobi", "lax", "ermakov", "sl2_adjoint"})
    EXPECT_TRUE(is_registered(name)) << name;
  EXPECT_FALSE(is_registered("kepler"));
}
