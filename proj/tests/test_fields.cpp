#include <gtest/gtest.h>

#include <cmath>

#include "folia/fields.hpp"

using namespace folia;
using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {

VectorField power_field(int p) {
  return VectorField(1, [p](const Vector& x) { return Vector::Constant(1, std::pow(x[0], p)); });
}

RealizedAlgebra riccati_like() {
  StructureConstants c(3);
  c.set_bracket(0, 1, std::array{1.0, 0.0, 0.0});
  c.set_bracket(0, 2, std::array{0.0, 2.0, 0.0});
  c.set_bracket(1, 2, std::array{0.0, 0.0, 1.0});
  return RealizedAlgebra(LieAlgebra({"X0", "X1", "X2"}, c), {power_field(0), power_field(1), power_field(2)});
}

}  // namespace

TEST(Domain, BoundsAndBands) {
  Domain d(2);
  d.bound(0, 0.0, 1.0).exclude_band(1, 0.1);
  EXPECT_TRUE(d.contains(Vector2d(0.5, 0.2)));
  EXPECT_FALSE(d.contains(Vector2d(0.0, 0.2)));  // open bound
  EXPECT_FALSE(d.contains(Vector2d(0.5, 0.05)));
  EXPECT_FALSE(d.contains(Vector2d(0.5, NAN)));
  EXPECT_FALSE(d.contains(Vector(3)));
}

TEST(Domain, SamplingIsSeededAndInside) {
  Domain d(3);
  d.exclude_band(0, 0.5);
  const auto a = sample_points(d, 20, 7);
  const auto b = sample_points(d, 20, 7);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_TRUE(d.contains(a[i]));
  }
  EXPECT_NE(sample_points(d, 1, 8)[0], a[0]);
}

TEST(Domain, EmptyIntersectionThrows) {
  Domain d(1);
  d.bound(0, 5.0, 6.0);
  std::mt19937_64 rng(1);
  EXPECT_THROW(d.sample(rng), DomainError);
}

TEST(LieBracket, RiccatiRelations) {
  const auto X0 = power_field(0), X1 = power_field(1), X2 = power_field(2);
  const Vector x = Vector::Constant(1, 1.0);
  EXPECT_NEAR(lie_bracket_at(X0, X2, x)[0], 2.0, 1e-8);
  EXPECT_NEAR(lie_bracket_at(X0, X1, x)[0], 1.0, 1e-8);
  const Vector y = Vector::Constant(1, -0.7);
  EXPECT_NEAR(lie_bracket_at(X1, X2, y)[0], 0.49, 1e-8);
}

TEST(LieBracket, Antisymmetric) {
  const VectorField X(2, [](const Vector& x) { return Vector2d(std::sin(x[1]), x[0] * x[0]); });
  const VectorField Y(2, [](const Vector& x) { return Vector2d(x[0] * x[1], std::cos(x[0])); });
  for (const auto& p : sample_points(Domain(2), 10, 3))
    EXPECT_LE((lie_bracket_at(X, Y, p) + lie_bracket_at(Y, X, p)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LieBracket, OutsideDomainThrows) {
  Domain d(1);
  d.bound(0, 0.0, 1.0);
  const VectorField X(d, [](const Vector& x) { return x; });
  EXPECT_THROW(lie_bracket_at(X, X, Vector::Constant(1, 2.0)), DomainError);
  const VectorField planar(2, [](const Vector& x) { return x; });
  EXPECT_THROW(lie_bracket_at(X, planar, Vector::Constant(1, 0.5)), DimensionError);
}

TEST(BracketResidual, RiccatiRealization) {
  const auto ra = riccati_like();
  EXPECT_LE(bracket_residual(ra, sample_points(ra.domain(), 50, kDefaultSeed)), 1e-6);
}

TEST(Prolongation, CopiesFieldOnEachFactor) {
  const auto Z = diagonal_prolongation(power_field(2), 3);
  Vector x(3);
  x << 1, 2, -3;
  EXPECT_EQ(Z(x), Vector3d(1, 4, 9));
  EXPECT_EQ(Z.dim(), 3);
  const auto samples = sample_points(Domain(3), 10, 1);
  EXPECT_EQ(diagonality_defect(Z, 1, samples), 0.0);
}

TEST(Prolongation, DetectsNonDiagonalField) {
  const VectorField Z(2, [](const Vector& x) { return Vector2d(x[1], x[0]); });
  EXPECT_GT(diagonality_defect(Z, 1, sample_points(Domain(2), 10, 1)), 1e-3);
  EXPECT_THROW(diagonality_defect(Z, 1, sample_points(Domain(2), 1, 1)), Error);
}

TEST(Prolongation, BracketCommutesWithProlongation) {
  // [X^[m], Y^[m]] = [X, Y]^[m]
  const auto X = power_field(1), Y = power_field(2);
  const auto Xm = diagonal_prolongation(X, 2), Ym = diagonal_prolongation(Y, 2);
  for (const auto& z : sample_points(Domain(2), 10, 5)) {
    const Vector lhs = lie_bracket_at(Xm, Ym, z);
    for (int a = 0; a < 2; ++a)
      EXPECT_NEAR(lhs[a], lie_bracket_at(X, Y, Vector::Constant(1, z[a]))[0], 1e-8);
  }
}

TEST(Rank, NumericalRank) {
  Matrix m(3, 2);
  m << 1, 2, 2, 4, 3, 6;
  EXPECT_EQ(numerical_rank(m), 1);
  EXPECT_EQ(numerical_rank(Matrix::Zero(2, 2)), 0);
  EXPECT_EQ(numerical_rank(Matrix::Identity(3, 3)), 3);
}

TEST(MinimalSolutions, RiccatiNeedsThree) {
  EXPECT_EQ(minimal_particular_solutions(riccati_like()), 3);
}

TEST(MinimalSolutions, TranslationsNeedOne) {
  const VectorField dx(2, [](const Vector&) { return Vector2d(1, 0); });
  RealizedAlgebra ra(LieAlgebra::abelian(1), {dx});
  EXPECT_EQ(minimal_particular_solutions(ra), 1);
}

TEST(MinimalSolutions, ZeroFieldIsRankDeficient) {
  const VectorField zero(1, [](const Vector&) { return Vector::Zero(1); });
  RealizedAlgebra ra(LieAlgebra::abelian(1), {zero});
  EXPECT_THROW(minimal_particular_solutions(ra), SolveError);
}

TEST(Jacobian, SuppliedMatchesFiniteDifferences) {
  const VectorField X(
      2, [](const Vector& x) { return Vector2d(x[0] * x[1], std::sin(x[0])); },
      [](const Vector& x) {
        Matrix J(2, 2);
        J << x[1], x[0], std::cos(x[0]), 0;
        return J;
      });
  EXPECT_LE(jacobian_consistency(X, sample_points(Domain(2), 20, 2)), 1e-8);
}

TEST(ScalarField, DirectionalDerivative) {
  const ScalarField f([](const Vector& x) { return x[0] * x[0] + 3 * x[1]; });
  const VectorField X(2, [](const Vector&) { return Vector2d(1, 1); });
  EXPECT_NEAR(directional_derivative(X, f, Vector2d(2, 0)), 7.0, 1e-8);
}
