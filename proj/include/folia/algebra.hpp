#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "folia/types.hpp"

namespace folia {

/// Dense r x r x r tensor of structure constants c_{ab}^g, stored with the
/// upper index fastest: index (a * r + b) * r + g.
class StructureConstants {
 public:
  explicit StructureConstants(int dim);

  int dim() const { return dim_; }
  double operator()(int a, int b, int g) const { return data_[index(a, b, g)]; }
  double& operator()(int a, int b, int g) { return data_[index(a, b, g)]; }

  /// Sets [e_a, e_b] = sum_g value[g] e_g and [e_b, e_a] = -[e_a, e_b].
  void set_bracket(int a, int b, std::span<const double> value);

 private:
  std::size_t index(int a, int b, int g) const {
    return (static_cast<std::size_t>(a) * dim_ + b) * dim_ + g;
  }

  int dim_;
  std::vector<double> data_;
};

/// Maximum absolute Jacobi sum over all index tuples. Works on raw tensors so
/// that corrupted constants can be diagnosed.
double jacobi_residual(const StructureConstants& c);

/// Maximum |c_{ab}^g + c_{ba}^g|.
double antisymmetry_residual(const StructureConstants& c);

/// A finite-dimensional real Lie algebra on a labeled basis. The label order
/// is the coordinate order.
class LieAlgebra {
 public:
  /// Throws InvariantError unless the constants are exactly antisymmetric and
  /// satisfy Jacobi within 1e-12 (scaled by the largest constant squared).
  LieAlgebra(std::vector<std::string> labels, StructureConstants constants);

  static LieAlgebra sl2();
  static LieAlgebra abelian(int n);
  /// R^n semidirect R^n with basis e_1..e_n, h_1..h_n and [h_i, e_j] = 2 delta_ij e_j.
  static LieAlgebra glp(int n);
  /// Resolves "sl2", "abelian:<n>" and "glp:<n>".
  static LieAlgebra from_name(std::string_view name);

  int dim() const { return constants_.dim(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const StructureConstants& constants() const { return constants_; }
  double c(int a, int b, int g) const { return constants_(a, b, g); }
  int index_of(std::string_view label) const;
  bool is_abelian() const;

  double jacobi_residual() const { return folia::jacobi_residual(constants_); }

  Vector bracket(const Vector& u, const Vector& v) const;
  /// Column b of ad_{e_a} holds the coordinates of [e_a, e_b].
  Matrix adjoint_matrix(int a) const;
  /// ad_u for an arbitrary element u.
  Matrix adjoint_matrix(const Vector& u) const;
  /// K(e_a, e_b) = tr(ad_a ad_b). Possibly degenerate.
  Matrix killing_form() const;

 private:
  std::vector<std::string> labels_;
  StructureConstants constants_;
};

/// Matrices A_1..A_r intended to satisfy [A_a, A_b] = sum_g c_{ab}^g A_g.
/// Construction only checks shapes; use realization_residual to validate.
class MatrixRealization {
 public:
  MatrixRealization(LieAlgebra algebra, std::vector<Matrix> matrices);

  static MatrixRealization sl2();
  static MatrixRealization abelian(int n);
  /// Block-diagonal 2n x 2n realization, e_i -> [[0,1],[0,0]], h_i -> [[2,0],[0,0]].
  static MatrixRealization glp(int n);

  const LieAlgebra& algebra() const { return algebra_; }
  int size() const { return size_; }
  const std::vector<Matrix>& matrices() const { return matrices_; }
  const Matrix& matrix(int a) const { return matrices_.at(static_cast<std::size_t>(a)); }

  /// sum_a coords[a] A_a.
  Matrix element(const Vector& coords) const;
  /// Least-squares coordinates of a matrix in the span of the A_a.
  Vector coordinates(const Matrix& m) const;

 private:
  LieAlgebra algebra_;
  int size_;
  std::vector<Matrix> matrices_;
};

double realization_residual(const MatrixRealization& real);

/// Symmetric, nondegenerate, ad-invariant bilinear form on a Lie algebra.
class InvariantMetric {
 public:
  /// Throws InvariantError when g is not symmetric, has smallest singular
  /// value below 1e-10 times the largest, or fails ad-invariance by more than
  /// 1e-12 (relative to the largest entry).
  InvariantMetric(const LieAlgebra& algebra, Matrix g);

  static InvariantMetric killing(const LieAlgebra& algebra);

  const Matrix& g() const { return g_; }
  const Matrix& g_inv() const { return g_inv_; }

 private:
  Matrix g_;
  Matrix g_inv_;
};

/// max over basis triples of |g([x,y],z) + g(y,[x,z])|.
double invariance_residual(const LieAlgebra& algebra, const Matrix& g);

}  // namespace folia
