#include "folia/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace folia {

double fd_step(const Vector& x) {
  const double scale = x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
  return 1e-6 * std::max(1.0, scale);
}

Domain::Domain(int dim)
    : lower_(Vector::Constant(dim, -std::numeric_limits<double>::infinity())),
      upper_(Vector::Constant(dim, std::numeric_limits<double>::infinity())),
      band_(Vector::Zero(dim)),
      sample_lo_(Vector::Constant(dim, -1.0)),
      sample_hi_(Vector::Constant(dim, 1.0)) {
  if (dim < 1) throw DimensionError("domain dimension must be positive");
}

Domain& Domain::bound(int i, double lo, double hi) {
  lower_[i] = lo;
  upper_[i] = hi;
  return *this;
}

Domain& Domain::exclude_band(int i, double eps) {
  band_[i] = eps;
  return *this;
}

Domain& Domain::sampling_box(Vector lo, Vector hi) {
  if (lo.size() != dim() || hi.size() != dim()) throw DimensionError("sampling box has wrong dimension");
  sample_lo_ = std::move(lo);
  sample_hi_ = std::move(hi);
  return *this;
}

bool Domain::contains(const Vector& x) const {
  if (x.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (!std::isfinite(x[i])) return false;
    if (!(x[i] > lower_[i] && x[i] < upper_[i])) return false;
    if (std::abs(x[i]) < band_[i]) return false;
  }
  return true;
}

Vector Domain::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vector x(dim());
    for (int i = 0; i < dim(); ++i) x[i] = sample_lo_[i] + (sample_hi_[i] - sample_lo_[i]) * unit(rng);
    if (contains(x)) return x;
  }
  throw DomainError("sampling box does not intersect the domain");
}

Domain Domain::power(int m) const {
  const int n = dim();
  Domain out(n * m);
  Vector lo(n * m), hi(n * m);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i) {
      out.bound(a * n + i, lower_[i], upper_[i]);
      out.exclude_band(a * n + i, band_[i]);
      lo[a * n + i] = sample_lo_[i];
      hi[a * n + i] = sample_hi_[i];
    }
  out.sampling_box(std::move(lo), std::move(hi));
  return out;
}

std::vector<Vector> sample_points(const Domain& domain, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pts.push_back(domain.sample(rng));
  return pts;
}

VectorField::VectorField(int dim, Eval eval, Jacobian jacobian)
    : VectorField(Domain(dim), std::move(eval), std::move(jacobian)) {}

VectorField::VectorField(Domain domain, Eval eval, Jacobian jacobian)
    : domain_(std::move(domain)), eval_(std::move(eval)), jacobian_(std::move(jacobian)) {}

Matrix VectorField::jacobian(const Vector& x) const {
  if (jacobian_) return jacobian_(x);
  const int n = dim();
  const double h = fd_step(x);
  Matrix J(n, n);
  Vector xp = x, xm = x;
  for (int j = 0; j < n; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    J.col(j) = (eval_(xp) - eval_(xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return J;
}

ScalarField::ScalarField(Eval eval, Gradient gradient) : eval_(std::move(eval)), gradient_(std::move(gradient)) {}

Vector ScalarField::gradient(const Vector& x) const {
  if (gradient_) return gradient_(x);
  const double h = fd_step(x);
  Vector g(x.size());
  Vector xp = x, xm = x;
  for (int j = 0; j < x.size(); ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    g[j] = (eval_(xp) - eval_(xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return g;
}

TDependentVectorField::TDependentVectorField(Domain domain, Eval eval)
    : domain_(std::move(domain)), eval_(std::move(eval)) {}

RealizedAlgebra::RealizedAlgebra(LieAlgebra alg, std::vector<VectorField> fs)
    : algebra(std::move(alg)), fields(std::move(fs)) {
  if (static_cast<int>(fields.size()) != algebra.dim())
    throw DimensionError("realization needs one vector field per basis element");
  for (const auto& f : fields)
    if (f.dim() != fields.front().dim()) throw DimensionError("realization fields live on different spaces");
}

namespace {

void require_in_domain(const VectorField& X, const Vector& x) {
  if (x.size() != X.dim()) throw DimensionError("point dimension differs from field dimension");
  if (!X.domain().contains(x)) throw DomainError("evaluation outside the domain");
}

}  // namespace

Vector lie_bracket_at(const VectorField& X, const VectorField& Y, const Vector& x) {
  if (X.dim() != Y.dim()) throw DimensionError("bracket of fields on different spaces");
  require_in_domain(X, x);
  require_in_domain(Y, x);
  return Y.jacobian(x) * X(x) - X.jacobian(x) * Y(x);
}

VectorField diagonal_prolongation(const VectorField& X, int m) {
  if (m < 1) throw DimensionError("prolongation order must be positive");
  const int n = X.dim();
  auto eval = [X, n, m](const Vector& z) {
    Vector out(n * m);
    for (int a = 0; a < m; ++a) out.segment(a * n, n) = X(z.segment(a * n, n));
    return out;
  };
  VectorField::Jacobian jac;
  if (X.has_jacobian()) {
    jac = [X, n, m](const Vector& z) {
      Matrix J = Matrix::Zero(n * m, n * m);
      for (int a = 0; a < m; ++a) J.block(a * n, a * n, n, n) = X.jacobian(z.segment(a * n, n));
      return J;
    };
  }
  return VectorField(X.domain().power(m), std::move(eval), std::move(jac));
}

std::vector<VectorField> diagonal_prolongation(std::span<const VectorField> fields, int m) {
  std::vector<VectorField> out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(diagonal_prolongation(f, m));
  return out;
}

double diagonality_defect(const VectorField& Z, int base_dim, std::span<const Vector> samples) {
  if (samples.size() < 2) throw Error("diagonality_defect needs at least two samples");
  if (base_dim < 1 || Z.dim() % base_dim != 0) throw DimensionError("field dimension is not a multiple of base_dim");
  const int m = Z.dim() / base_dim;
  auto reference = [&](const Vector& y) {
    Vector diag(Z.dim());
    for (int a = 0; a < m; ++a) diag.segment(a * base_dim, base_dim) = y;
    return Vector(Z(diag).head(base_dim));
  };
  double worst = 0.0;
  for (const auto& z : samples) {
    if (z.size() != Z.dim()) throw DimensionError("sample dimension differs from field dimension");
    const Vector value = Z(z);
    for (int a = 0; a < m; ++a) {
      const Vector expected = reference(z.segment(a * base_dim, base_dim));
      worst = std::max(worst, (value.segment(a * base_dim, base_dim) - expected).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double directional_derivative(const VectorField& X, const ScalarField& f, const Vector& x) {
  if (x.size() != X.dim()) throw DimensionError("point dimension differs from field dimension");
  return f.gradient(x).dot(X(x));
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > rel_tol * sv[0]) ++rank;
  return rank;
}

int rank_at(std::span<const VectorField> fields, const Vector& x) {
  if (fields.empty()) return 0;
  const int n = fields.front().dim();
  Matrix values(n, static_cast<int>(fields.size()));
  for (std::size_t a = 0; a < fields.size(); ++a) {
    if (fields[a].dim() != n) throw DimensionError("rank_at fields have different dimensions");
    values.col(static_cast<int>(a)) = fields[a](x);
  }
  return numerical_rank(values);
}

int minimal_particular_solutions(const RealizedAlgebra& ra, int trials, std::uint64_t seed, int cap) {
  if (trials < 1) throw Error("trials must be positive");
  const int r = ra.algebra.dim();
  std::mt19937_64 rng(seed);
  for (int m = 1; m <= cap; ++m) {
    const auto prolonged = diagonal_prolongation(ra.fields, m);
    const Domain joint = ra.domain().power(m);
    int hits = 0;
    for (int t = 0; t < trials; ++t)
      if (rank_at(prolonged, joint.sample(rng)) == r) ++hits;
    if (2 * hits > trials) return m;
  }
  throw SolveError("rank deficiency: no m <= " + std::to_string(cap) + " reaches the algebra dimension");
}

double bracket_residual(const RealizedAlgebra& ra, std::span<const Vector> samples) {
  const int r = ra.algebra.dim();
  double worst = 0.0;
  for (const auto& x : samples)
    for (int a = 0; a < r; ++a)
      for (int b = a + 1; b < r; ++b) {
        Vector diff = lie_bracket_at(ra.fields[static_cast<std::size_t>(a)], ra.fields[static_cast<std::size_t>(b)], x);
        for (int g = 0; g < r; ++g) {
          const double c = ra.algebra.c(a, b, g);
          if (c != 0.0) diff -= c * ra.fields[static_cast<std::size_t>(g)](x);
        }
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
      }
  return worst;
}

double jacobian_consistency(const VectorField& X, std::span<const Vector> samples) {
  if (!X.has_jacobian()) return 0.0;
  const VectorField numeric(X.domain(), [X](const Vector& x) { return X(x); });
  double worst = 0.0;
  for (const auto& x : samples) {
    const Matrix a = X.jacobian(x);
    const Matrix n = numeric.jacobian(x);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    worst = std::max(worst, (a - n).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

}  // namespace folia
