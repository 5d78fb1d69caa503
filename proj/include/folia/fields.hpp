#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "folia/algebra.hpp"
#include "folia/types.hpp"

namespace folia {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Central finite-difference step used throughout: 1e-6 * max(1, |x|_inf).
double fd_step(const Vector& x);

/// Open subset of R^N described by coordinate bounds and excluded bands
/// |x_i| < eps, plus a bounded box used to draw "generic" sample points.
class Domain {
 public:
  /// All of R^N, sampled from [-1, 1]^N.
  explicit Domain(int dim);

  int dim() const { return static_cast<int>(lower_.size()); }

  Domain& bound(int i, double lo, double hi);
  Domain& exclude_band(int i, double eps);
  Domain& sampling_box(Vector lo, Vector hi);

  bool contains(const Vector& x) const;
  /// Rejection-samples the sampling box until a point lies in the domain.
  Vector sample(std::mt19937_64& rng) const;
  /// The product domain on (R^N)^m.
  Domain power(int m) const;

  const Vector& sample_lower() const { return sample_lo_; }
  const Vector& sample_upper() const { return sample_hi_; }

 private:
  Vector lower_, upper_, band_;
  Vector sample_lo_, sample_hi_;
};

std::vector<Vector> sample_points(const Domain& domain, int count, std::uint64_t seed);

/// Autonomous vector field on R^N with an optional analytic Jacobian.
class VectorField {
 public:
  using Eval = std::function<Vector(const Vector&)>;
  using Jacobian = std::function<Matrix(const Vector&)>;

  VectorField(int dim, Eval eval, Jacobian jacobian = {});
  VectorField(Domain domain, Eval eval, Jacobian jacobian = {});

  int dim() const { return domain_.dim(); }
  const Domain& domain() const { return domain_; }
  bool has_jacobian() const { return static_cast<bool>(jacobian_); }

  Vector operator()(const Vector& x) const { return eval_(x); }
  /// Supplied Jacobian, or central differences with fd_step.
  Matrix jacobian(const Vector& x) const;

 private:
  Domain domain_;
  Eval eval_;
  Jacobian jacobian_;
};

/// Scalar function with an optional analytic gradient.
class ScalarField {
 public:
  using Eval = std::function<double(const Vector&)>;
  using Gradient = std::function<Vector(const Vector&)>;

  ScalarField(Eval eval, Gradient gradient = {});

  double operator()(const Vector& x) const { return eval_(x); }
  bool has_gradient() const { return static_cast<bool>(gradient_); }
  Vector gradient(const Vector& x) const;

 private:
  Eval eval_;
  Gradient gradient_;
};

/// x -> (t, x) -> R^N.
class TDependentVectorField {
 public:
  using Eval = std::function<Vector(double, const Vector&)>;

  TDependentVectorField(Domain domain, Eval eval);

  int dim() const { return domain_.dim(); }
  const Domain& domain() const { return domain_; }
  Vector operator()(double t, const Vector& x) const { return eval_(t, x); }

 private:
  Domain domain_;
  Eval eval_;
};

/// A Lie algebra together with vector fields X_1..X_r realizing it.
struct RealizedAlgebra {
  LieAlgebra algebra;
  std::vector<VectorField> fields;

  RealizedAlgebra(LieAlgebra algebra, std::vector<VectorField> fields);
  int ambient_dim() const { return fields.front().dim(); }
  const Domain& domain() const { return fields.front().domain(); }
};

/// [X, Y](x) = J_Y(x) X(x) - J_X(x) Y(x).
Vector lie_bracket_at(const VectorField& X, const VectorField& Y, const Vector& x);

/// X^{[m]} on (R^N)^m: block a at (x_1..x_m) is X(x_a).
VectorField diagonal_prolongation(const VectorField& X, int m);
std::vector<VectorField> diagonal_prolongation(std::span<const VectorField> fields, int m);

/// Measures how far Z on (R^N)^m is from being a diagonal prolongation. With
/// Y(y) the first block of Z(y, ..., y), returns max over samples and blocks
/// of |Z(x)_a - Y(x_a)|_inf, which vanishes exactly when Z = Y^{[m]}.
double diagonality_defect(const VectorField& Z, int base_dim, std::span<const Vector> samples);

/// grad f(x) . X(x).
double directional_derivative(const VectorField& X, const ScalarField& f, const Vector& x);

/// Numerical rank of the singular values of the matrix above kRankTolerance
/// times the largest one. Zero matrices have rank 0.
int numerical_rank(const Matrix& m, double rel_tol = kRankTolerance);

/// Rank of the N x r matrix of field values at x.
int rank_at(std::span<const VectorField> fields, const Vector& x);

/// Smallest m whose m-fold prolongations reach rank dim(algebra) at generic
/// points (majority over trials). Throws SolveError("rank deficiency") when
/// no m <= cap qualifies.
int minimal_particular_solutions(const RealizedAlgebra& ra, int trials = 5, std::uint64_t seed = kDefaultSeed,
                                 int cap = 10);

/// max over samples and (a, b) of |[X_a, X_b](x) - sum_g c_ab^g X_g(x)|_inf.
double bracket_residual(const RealizedAlgebra& ra, std::span<const Vector> samples);

/// max over samples of the relative deviation between the supplied Jacobian
/// and central differences.
double jacobian_consistency(const VectorField& X, std::span<const Vector> samples);

}  // namespace folia
