#include "folia/algebra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace folia {

StructureConstants::StructureConstants(int dim) : dim_(dim) {
  if (dim < 1) throw DimensionError("Lie algebra dimension must be positive");
  data_.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
}

void StructureConstants::set_bracket(int a, int b, std::span<const double> value) {
  if (static_cast<int>(value.size()) != dim_) throw DimensionError("bracket value has wrong length");
  for (int g = 0; g < dim_; ++g) {
    (*this)(a, b, g) = value[static_cast<std::size_t>(g)];
    (*this)(b, a, g) = -value[static_cast<std::size_t>(g)];
  }
}

double jacobi_residual(const StructureConstants& c) {
  const int r = c.dim();
  double worst = 0.0;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int g = 0; g < r; ++g)
        for (int n = 0; n < r; ++n) {
          double sum = 0.0;
          for (int m = 0; m < r; ++m)
            sum += c(a, b, m) * c(m, g, n) + c(b, g, m) * c(m, a, n) + c(g, a, m) * c(m, b, n);
          worst = std::max(worst, std::abs(sum));
        }
  return worst;
}

double antisymmetry_residual(const StructureConstants& c) {
  const int r = c.dim();
  double worst = 0.0;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int g = 0; g < r; ++g) worst = std::max(worst, std::abs(c(a, b, g) + c(b, a, g)));
  return worst;
}

LieAlgebra::LieAlgebra(std::vector<std::string> labels, StructureConstants constants)
    : labels_(std::move(labels)), constants_(std::move(constants)) {
  if (static_cast<int>(labels_.size()) != constants_.dim())
    throw DimensionError("basis label count differs from algebra dimension");
  if (antisymmetry_residual(constants_) != 0.0)
    throw InvariantError("structure constants are not antisymmetric");
  double scale = 0.0;
  const int r = constants_.dim();
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int g = 0; g < r; ++g) scale = std::max(scale, std::abs(constants_(a, b, g)));
  if (folia::jacobi_residual(constants_) > 1e-12 * std::max(1.0, scale * scale))
    throw InvariantError("structure constants violate the Jacobi identity");
}

LieAlgebra LieAlgebra::sl2() {
  // basis (e, h, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h
  StructureConstants c(3);
  c.set_bracket(1, 0, std::vector<double>{2, 0, 0});
  c.set_bracket(1, 2, std::vector<double>{0, 0, -2});
  c.set_bracket(0, 2, std::vector<double>{0, 1, 0});
  return LieAlgebra({"e", "h", "f"}, std::move(c));
}

LieAlgebra LieAlgebra::abelian(int n) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("x" + std::to_string(i));
  return LieAlgebra(std::move(labels), StructureConstants(n));
}

LieAlgebra LieAlgebra::glp(int n) {
  if (n < 1) throw DimensionError("glp requires n >= 1");
  StructureConstants c(2 * n);
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("e" + std::to_string(i));
  for (int i = 1; i <= n; ++i) labels.push_back("h" + std::to_string(i));
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(static_cast<std::size_t>(2 * n), 0.0);
    v[static_cast<std::size_t>(i)] = 2.0;
    c.set_bracket(n + i, i, v);
  }
  return LieAlgebra(std::move(labels), std::move(c));
}

namespace {

int parse_suffix(std::string_view name, std::string_view prefix) {
  const std::string_view digits = name.substr(prefix.size());
  int n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || n < 1)
    throw Error("invalid built-in algebra name: " + std::string(name));
  return n;
}

}  // namespace

LieAlgebra LieAlgebra::from_name(std::string_view name) {
  if (name == "sl2") return sl2();
  if (name.starts_with("abelian:")) return abelian(parse_suffix(name, "abelian:"));
  if (name.starts_with("glp:")) return glp(parse_suffix(name, "glp:"));
  throw Error("unknown built-in algebra: " + std::string(name));
}

int LieAlgebra::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error("unknown basis label: " + std::string(label));
  return static_cast<int>(it - labels_.begin());
}

bool LieAlgebra::is_abelian() const {
  const int r = dim();
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int g = 0; g < r; ++g)
        if (constants_(a, b, g) != 0.0) return false;
  return true;
}

Vector LieAlgebra::bracket(const Vector& u, const Vector& v) const {
  const int r = dim();
  if (u.size() != r || v.size() != r) throw DimensionError("bracket operands must have algebra dimension");
  Vector w = Vector::Zero(r);
  for (int a = 0; a < r; ++a) {
    if (u[a] == 0.0) continue;
    for (int b = 0; b < r; ++b) {
      if (v[b] == 0.0) continue;
      for (int g = 0; g < r; ++g) w[g] += constants_(a, b, g) * u[a] * v[b];
    }
  }
  return w;
}

Matrix LieAlgebra::adjoint_matrix(int a) const {
  const int r = dim();
  if (a < 0 || a >= r) throw DimensionError("basis index out of range");
  Matrix ad(r, r);
  for (int b = 0; b < r; ++b)
    for (int g = 0; g < r; ++g) ad(g, b) = constants_(a, b, g);
  return ad;
}

Matrix LieAlgebra::adjoint_matrix(const Vector& u) const {
  const int r = dim();
  if (u.size() != r) throw DimensionError("element must have algebra dimension");
  Matrix ad = Matrix::Zero(r, r);
  for (int a = 0; a < r; ++a)
    if (u[a] != 0.0) ad += u[a] * adjoint_matrix(a);
  return ad;
}

Matrix LieAlgebra::killing_form() const {
  const int r = dim();
  std::vector<Matrix> ads;
  for (int a = 0; a < r; ++a) ads.push_back(adjoint_matrix(a));
  Matrix k(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      k(a, b) = (ads[static_cast<std::size_t>(a)] * ads[static_cast<std::size_t>(b)]).trace();
  return k;
}

MatrixRealization::MatrixRealization(LieAlgebra algebra, std::vector<Matrix> matrices)
    : algebra_(std::move(algebra)), size_(0), matrices_(std::move(matrices)) {
  if (static_cast<int>(matrices_.size()) != algebra_.dim())
    throw DimensionError("realization needs one matrix per basis element");
  size_ = static_cast<int>(matrices_.front().rows());
  for (const auto& m : matrices_)
    if (m.rows() != size_ || m.cols() != size_) throw DimensionError("realization matrices must be square and equal-sized");
}

MatrixRealization MatrixRealization::sl2() {
  Matrix e{{0, 1}, {0, 0}};
  Matrix h{{1, 0}, {0, -1}};
  Matrix f{{0, 0}, {1, 0}};
  return MatrixRealization(LieAlgebra::sl2(), {e, h, f});
}

MatrixRealization MatrixRealization::abelian(int n) {
  std::vector<Matrix> ms;
  for (int i = 0; i < n; ++i) {
    Matrix m = Matrix::Zero(n, n);
    m(i, i) = 1.0;
    ms.push_back(m);
  }
  return MatrixRealization(LieAlgebra::abelian(n), std::move(ms));
}

MatrixRealization MatrixRealization::glp(int n) {
  std::vector<Matrix> ms;
  for (int i = 0; i < n; ++i) {
    Matrix m = Matrix::Zero(2 * n, 2 * n);
    m(2 * i, 2 * i + 1) = 1.0;
    ms.push_back(m);
  }
  for (int i = 0; i < n; ++i) {
    Matrix m = Matrix::Zero(2 * n, 2 * n);
    m(2 * i, 2 * i) = 2.0;
    ms.push_back(m);
  }
  return MatrixRealization(LieAlgebra::glp(n), std::move(ms));
}

Matrix MatrixRealization::element(const Vector& coords) const {
  if (coords.size() != algebra_.dim()) throw DimensionError("coordinate vector has wrong length");
  Matrix m = Matrix::Zero(size_, size_);
  for (int a = 0; a < algebra_.dim(); ++a)
    if (coords[a] != 0.0) m += coords[a] * matrices_[static_cast<std::size_t>(a)];
  return m;
}

Vector MatrixRealization::coordinates(const Matrix& m) const {
  if (m.rows() != size_ || m.cols() != size_) throw DimensionError("matrix has wrong size");
  const int r = algebra_.dim();
  Matrix basis(size_ * size_, r);
  for (int a = 0; a < r; ++a)
    basis.col(a) = matrices_[static_cast<std::size_t>(a)].reshaped();
  return basis.colPivHouseholderQr().solve(m.reshaped().eval());
}

double realization_residual(const MatrixRealization& real) {
  const auto& alg = real.algebra();
  const int r = alg.dim();
  double worst = 0.0;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      const Matrix& A = real.matrix(a);
      const Matrix& B = real.matrix(b);
      Matrix diff = A * B - B * A;
      for (int g = 0; g < r; ++g) diff -= alg.c(a, b, g) * real.matrix(g);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  return worst;
}

double invariance_residual(const LieAlgebra& algebra, const Matrix& g) {
  const int r = algebra.dim();
  double worst = 0.0;
  for (int x = 0; x < r; ++x)
    for (int y = 0; y < r; ++y)
      for (int z = 0; z < r; ++z) {
        // g([x,y],z) + g(y,[x,z]) = sum_m c_xy^m g_mz + c_xz^m g_ym
        double sum = 0.0;
        for (int m = 0; m < r; ++m) sum += algebra.c(x, y, m) * g(m, z) + algebra.c(x, z, m) * g(y, m);
        worst = std::max(worst, std::abs(sum));
      }
  return worst;
}

InvariantMetric::InvariantMetric(const LieAlgebra& algebra, Matrix g) : g_(std::move(g)) {
  const int r = algebra.dim();
  if (g_.rows() != r || g_.cols() != r) throw DimensionError("metric must be r x r");
  if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() != 0.0) throw InvariantError("metric is not symmetric");
  Eigen::JacobiSVD<Matrix> svd(g_);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0 || sv[sv.size() - 1] < kRankTolerance * sv[0])
    throw InvariantError("metric is degenerate");
  const double scale = g_.cwiseAbs().maxCoeff();
  if (invariance_residual(algebra, g_) > 1e-12 * std::max(1.0, scale))
    throw InvariantError("metric is not ad-invariant");
  g_inv_ = g_.inverse();
}

InvariantMetric InvariantMetric::killing(const LieAlgebra& algebra) {
  return InvariantMetric(algebra, algebra.killing_form());
}

}  // namespace folia
