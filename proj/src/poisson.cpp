#include "folia/poisson.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace folia {

PoissonBivector::PoissonBivector(Domain domain, Coeffs coeffs, Derivative derivative)
    : domain_(std::move(domain)), coeffs_(std::move(coeffs)), derivative_(std::move(derivative)) {}

namespace {

Matrix mirror_upper(const Matrix& m) {
  const auto n = m.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out(i, j) = m(i, j);
      out(j, i) = -m(i, j);
    }
  return out;
}

}  // namespace

Matrix PoissonBivector::at(const Vector& x) const {
  if (!domain_.contains(x)) throw DomainError("bivector evaluated outside its domain");
  const Matrix m = coeffs_(x);
  if (m.rows() != dim() || m.cols() != dim()) throw DimensionError("bivector has wrong shape");
  return mirror_upper(m);
}

std::vector<Matrix> PoissonBivector::derivative(const Vector& x) const {
  std::vector<Matrix> out;
  if (derivative_) {
    for (const auto& d : derivative_(x)) out.push_back(mirror_upper(d));
    return out;
  }
  const double h = fd_step(x);
  for (int l = 0; l < dim(); ++l) {
    Vector p = x, m = x;
    p[l] += h;
    m[l] -= h;
    out.push_back((mirror_upper(coeffs_(p)) - mirror_upper(coeffs_(m))) / (2.0 * h));
  }
  return out;
}

PoissonBivector zero_bivector(Domain domain) {
  const int n = domain.dim();
  return PoissonBivector(
      std::move(domain), [n](const Vector&) { return Matrix::Zero(n, n); },
      [n](const Vector&) { return std::vector<Matrix>(static_cast<std::size_t>(n), Matrix::Zero(n, n)); });
}

PoissonBivector kirillov_bivector(const LieAlgebra& alg, const InvariantMetric& metric) {
  if (metric.g().rows() != alg.dim()) throw DimensionError("metric and algebra dimensions differ");
  const int r = alg.dim();
  const Matrix G = metric.g();
  const Matrix Ginv = metric.g_inv();
  auto C = [alg, r](const Vector& f) {
    Matrix c = Matrix::Zero(r, r);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int g = 0; g < r; ++g) c(a, b) += alg.c(a, b, g) * f[g];
    return c;
  };
  auto coeffs = [C, G, Ginv](const Vector& v) { return Matrix(Ginv * C(G * v) * Ginv); };
  auto derivative = [C, G, Ginv, r](const Vector&) {
    std::vector<Matrix> out;
    for (int l = 0; l < r; ++l) out.push_back(Ginv * C(G.col(l)) * Ginv);
    return out;
  };
  return PoissonBivector(Domain(r), coeffs, derivative);
}

std::vector<ScalarField> linear_coordinates(const InvariantMetric& metric) {
  std::vector<ScalarField> out;
  for (int a = 0; a < metric.g().rows(); ++a) {
    const Vector row = metric.g().row(a).transpose();
    out.emplace_back([row](const Vector& v) { return row.dot(v); }, [row](const Vector&) { return row; });
  }
  return out;
}

double poisson_bracket(const PoissonBivector& L, const ScalarField& f, const ScalarField& g, const Vector& x) {
  return f.gradient(x).dot(L.at(x) * g.gradient(x));
}

namespace {

double contract_jacobi(const Matrix& Lam, const std::vector<Matrix>& dLam, const Vector& df, const Vector& dg,
                       const Vector& dh) {
  const int n = static_cast<int>(Lam.rows());
  // T^{jk}_i = sum_l Lambda^{il} d_l Lambda^{jk}
  double total = 0.0;
  const std::array<const Vector*, 3> grads{&df, &dg, &dh};
  for (int cyc = 0; cyc < 3; ++cyc) {
    const Vector& a = *grads[static_cast<std::size_t>(cyc)];
    const Vector& b = *grads[static_cast<std::size_t>((cyc + 1) % 3)];
    const Vector& c = *grads[static_cast<std::size_t>((cyc + 2) % 3)];
    const Vector flow = Lam.transpose() * a;  // sum_i a_i Lambda^{il}
    for (int l = 0; l < n; ++l) total += flow[l] * b.dot(dLam[static_cast<std::size_t>(l)] * c);
  }
  return total;
}

}  // namespace

double jacobiator(const PoissonBivector& L, const ScalarField& f, const ScalarField& g, const ScalarField& h,
                  const Vector& x) {
  return contract_jacobi(L.at(x), L.derivative(x), f.gradient(x), g.gradient(x), h.gradient(x));
}

double coordinate_jacobiator(const PoissonBivector& L, std::span<const Vector> samples) {
  const int n = L.dim();
  double worst = 0.0;
  for (const auto& x : samples) {
    const Matrix Lam = L.at(x);
    const auto dLam = L.derivative(x);
    const Matrix I = Matrix::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
          worst = std::max(worst, std::abs(contract_jacobi(Lam, dLam, I.col(i), I.col(j), I.col(k))));
  }
  return worst;
}

VectorField hamiltonian_field(const PoissonBivector& L, const ScalarField& f) {
  return VectorField(L.domain(), [L, f](const Vector& x) { return Vector(L.at(x) * f.gradient(x)); });
}

HamiltonianCheck hamiltonian_residual(const PoissonBivector& L, const VectorField& X, const ScalarField& f,
                                      std::span<const Vector> samples, std::string name) {
  if (X.dim() != L.dim()) throw DimensionError("field and bivector dimensions differ");
  const VectorField H = hamiltonian_field(L, f);
  double plus = 0.0, minus = 0.0;
  for (const auto& x : samples) {
    const Vector xv = X(x), hv = H(x);
    plus = std::max(plus, (xv - hv).cwiseAbs().maxCoeff());
    minus = std::max(minus, (xv + hv).cwiseAbs().maxCoeff());
  }
  HamiltonianCheck check{std::move(name), plus, 1};
  if (minus < plus) {
    check.residual = minus;
    check.sign = -1;
  }
  return check;
}

Domain aff_domain(int n) {
  if (n < 1) throw DimensionError("n must be positive");
  Domain domain(2 * n);
  Vector lo(2 * n), hi(2 * n);
  for (int i = 0; i < n; ++i) {
    domain.bound(2 * i, 0.0, std::numeric_limits<double>::infinity());
    lo[2 * i] = 0.5;
    hi[2 * i] = 2.0;
    lo[2 * i + 1] = -1.0;
    hi[2 * i + 1] = 1.0;
  }
  domain.sampling_box(lo, hi);
  return domain;
}

std::vector<VectorField> aff_right_invariant_fields(int n) {
  const Domain domain = aff_domain(n);
  std::vector<VectorField> fields;
  for (int i = 0; i < n; ++i)
    fields.emplace_back(
        domain,
        [i, n](const Vector&) {
          Vector v = Vector::Zero(2 * n);
          v[2 * i + 1] = 1.0;
          return v;
        },
        [n](const Vector&) { return Matrix::Zero(2 * n, 2 * n); });
  for (int i = 0; i < n; ++i)
    fields.emplace_back(
        domain,
        [i, n](const Vector& x) {
          Vector v = Vector::Zero(2 * n);
          v[2 * i] = 2.0 * x[2 * i];
          v[2 * i + 1] = 2.0 * x[2 * i + 1];
          return v;
        },
        [i, n](const Vector&) {
          Matrix J = Matrix::Zero(2 * n, 2 * n);
          J(2 * i, 2 * i) = 2.0;
          J(2 * i + 1, 2 * i + 1) = 2.0;
          return J;
        });
  return fields;
}

PoissonBivector rmatrix_bivector_aff(int n) {
  const auto fields = aff_right_invariant_fields(n);
  auto wedge_sum = [fields, n](const Vector& x) {
    Matrix L = Matrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
      const Vector X = fields[static_cast<std::size_t>(i)](x);
      const Vector Y = fields[static_cast<std::size_t>(n + i)](x);
      L += X * Y.transpose() - Y * X.transpose();
    }
    return L;
  };
  auto derivative = [fields, n](const Vector& x) {
    std::vector<Matrix> out(static_cast<std::size_t>(2 * n), Matrix::Zero(2 * n, 2 * n));
    for (int i = 0; i < n; ++i) {
      const Vector X = fields[static_cast<std::size_t>(i)](x);
      const Matrix JY = fields[static_cast<std::size_t>(n + i)].jacobian(x);
      for (int l = 0; l < 2 * n; ++l) {
        const Vector dY = JY.col(l);
        out[static_cast<std::size_t>(l)] += X * dY.transpose() - dY * X.transpose();
      }
    }
    return out;
  };
  return PoissonBivector(aff_domain(n), wedge_sum, derivative);
}

std::vector<HamiltonianCheck> check_rmatrix_hamiltonian(int n, std::span<const Vector> samples) {
  const PoissonBivector L = rmatrix_bivector_aff(n);
  const auto fields = aff_right_invariant_fields(n);
  std::vector<HamiltonianCheck> out;
  for (int i = 0; i < n; ++i) {
    const ScalarField F([i](const Vector& x) { return -0.5 * std::log(x[2 * i]); },
                        [i, n](const Vector& x) {
                          Vector g = Vector::Zero(2 * n);
                          g[2 * i] = -0.5 / x[2 * i];
                          return g;
                        });
    out.push_back(hamiltonian_residual(L, fields[static_cast<std::size_t>(i)], F, samples,
                                       "X^R_e" + std::to_string(i + 1)));
  }
  return out;
}

LieHamiltonReport is_foliated_lie_hamilton(const FoliatedSystem& fs, const PoissonBivector& L,
                                           std::span<const ScalarField> candidates, std::span<const Vector> samples) {
  const auto& fields = fs.realized.fields;
  if (candidates.size() != fields.size()) throw DimensionError("one candidate Hamiltonian per field");
  LieHamiltonReport report;
  report.value = true;
  for (std::size_t a = 0; a < fields.size(); ++a) {
    auto check = hamiltonian_residual(L, fields[a], candidates[a], samples, fs.realized.algebra.labels()[a]);
    if (!(check.residual <= 1e-6)) report.value = false;
    report.checks.push_back(std::move(check));
  }
  return report;
}

}  // namespace folia
