#include "folia/automorphic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>

namespace folia {

GroupAction::GroupAction(GroupKind kind, int group_dim, std::optional<MatrixRealization> gens, Domain domain,
                         Act act)
    : kind_(kind), group_dim_(group_dim), generators_(std::move(gens)), domain_(std::move(domain)), act_(std::move(act)) {}

GroupAction GroupAction::abelian(int rank, Domain domain, Act act) {
  if (rank < 1) throw DimensionError("group rank must be positive");
  return GroupAction(GroupKind::abelian, rank, std::nullopt, std::move(domain), std::move(act));
}

GroupAction GroupAction::matrix(MatrixRealization generators, Domain domain, Act act) {
  const int r = generators.algebra().dim();
  return GroupAction(GroupKind::matrix, r, std::move(generators), std::move(domain), std::move(act));
}

Matrix GroupAction::identity() const {
  if (kind_ == GroupKind::abelian) return Matrix::Zero(group_dim_, 1);
  return Matrix::Identity(generators_->size(), generators_->size());
}

Matrix GroupAction::compose(const Matrix& g, const Matrix& h) const {
  return kind_ == GroupKind::abelian ? Matrix(g + h) : Matrix(g * h);
}

Matrix GroupAction::exp_generator(int a, double t) const {
  if (a < 0 || a >= group_dim_) throw DimensionError("generator index out of range");
  if (kind_ == GroupKind::abelian) {
    Matrix g = Matrix::Zero(group_dim_, 1);
    g(a, 0) = t;
    return g;
  }
  return Matrix(t * generators_->matrix(a)).exp();
}

Vector GroupAction::act(const Matrix& g, const Vector& x) const {
  if (!domain_.contains(x)) throw DomainError("action applied outside its domain");
  Vector y = act_(g, x);
  if (!domain_.contains(y)) throw DomainError("action image left the domain");
  return y;
}

Vector GroupAction::infinitesimal(int a, const Vector& x) const {
  const double h = 1e-6;
  return (act_(exp_generator(a, h), x) - act_(exp_generator(a, -h), x)) / (2.0 * h);
}

double action_identity_residual(const GroupAction& action, std::span<const Vector> samples) {
  double worst = 0.0;
  for (const auto& x : samples) worst = std::max(worst, (action.act(action.identity(), x) - x).cwiseAbs().maxCoeff());
  return worst;
}

namespace {

Matrix random_element(const GroupAction& action, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-0.3, 0.3);
  if (action.kind() == GroupKind::abelian) {
    Matrix g(action.group_dim(), 1);
    for (int a = 0; a < action.group_dim(); ++a) g(a, 0) = coef(rng);
    return g;
  }
  Vector c(action.group_dim());
  for (int a = 0; a < c.size(); ++a) c[a] = coef(rng);
  return action.generators()->element(c).exp();
}

}  // namespace

double action_composition_residual(const GroupAction& action, std::span<const Vector> samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const auto& x : samples) {
    const Matrix g = random_element(action, rng);
    const Matrix h = random_element(action, rng);
    const Vector lhs = action.act(action.compose(g, h), x);
    const Vector rhs = action.act(g, action.act(h, x));
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

AutomorphicSystem AutomorphicSystem::from_decomposition(GroupKind kind, int group_dim,
                                                          std::optional<MatrixRealization> generators,
                                                          std::vector<LeafCoefficient> decomposition,
                                                          int leaf_space_dim) {
  if (static_cast<int>(decomposition.size()) != group_dim) throw DimensionError("one coefficient per generator");
  if (kind == GroupKind::matrix) {
    if (!generators) throw Error("matrix automorphic system needs generators");
    if (realization_residual(*generators) > 1e-12)
      throw InvariantError("generators do not realize the structure constants");
  }
  std::vector<LeafCoefficient> coeffs;
  coeffs.reserve(decomposition.size());
  for (auto& f : decomposition)
    coeffs.emplace_back([f = std::move(f)](double t, const Vector& k) { return -f(t, k); });
  return AutomorphicSystem{kind, group_dim, std::move(generators), std::move(coeffs), leaf_space_dim};
}

Matrix AutomorphicSystem::generator_at(double t, const Vector& k) const {
  if (kind == GroupKind::abelian) {
    Matrix c(group_dim, 1);
    for (int a = 0; a < group_dim; ++a) c(a, 0) = coeffs[static_cast<std::size_t>(a)](t, k);
    return c;
  }
  Vector c(group_dim);
  for (int a = 0; a < group_dim; ++a) c[a] = coeffs[static_cast<std::size_t>(a)](t, k);
  return generators->element(c);
}

AutomorphicSystem reduce(const FoliatedSystem& fs, const GroupAction& action, LeafRepresentative representative,
                         int trials, std::uint64_t seed) {
  const int r = fs.realized.algebra.dim();
  if (action.group_dim() != r) throw InapplicableError("action incompatible with realization: group dimension differs");
  if (action.kind() == GroupKind::matrix && action.generators()) {
    // generators must carry the structure constants of the realized algebra
    const MatrixRealization check(fs.realized.algebra, action.generators()->matrices());
    if (realization_residual(check) > 1e-12)
      throw InapplicableError("action incompatible with realization: generator brackets differ");
  }
  for (const auto& x : sample_points(fs.domain(), trials, seed))
    for (int a = 0; a < r; ++a) {
      const Vector mismatch = action.infinitesimal(a, x) + fs.realized.fields[static_cast<std::size_t>(a)](x);
      if (mismatch.cwiseAbs().maxCoeff() > 1e-6) throw InapplicableError("action incompatible with realization");
    }
  std::vector<LeafCoefficient> decomposition;
  for (const auto& g : fs.coeffs)
    decomposition.emplace_back([g, representative](double t, const Vector& k) { return g(t, representative(k)); });
  std::optional<MatrixRealization> gens;
  if (action.kind() == GroupKind::matrix)
    gens = MatrixRealization(fs.realized.algebra, action.generators()->matrices());
  return AutomorphicSystem::from_decomposition(action.kind(), r, std::move(gens), std::move(decomposition),
                                               fs.chart.label_dim());
}

GroupCurve solve_abelian(const AutomorphicSystem& asys, const Vector& k, double t0, double t1, double h) {
  if (asys.kind != GroupKind::abelian) throw InapplicableError("solve_abelian needs an abelian group");
  const int r = asys.group_dim;
  const TDependentVectorField rhs(Domain(r), [&asys, k](double t, const Vector&) {
    return Vector(asys.generator_at(t, k).col(0));
  });
  const Trajectory traj = integrate(rhs, Vector::Zero(r), t0, t1, h);
  GroupCurve curve;
  curve.times = traj.times;
  for (const auto& s : traj.states) curve.elements.emplace_back(s);
  return curve;
}

GroupCurve solve_matrix(const AutomorphicSystem& asys, const Vector& k, double t0, double t1, double h) {
  if (asys.kind != GroupKind::matrix) throw InapplicableError("solve_matrix needs a matrix group");
  const int d = asys.generators->size();
  const TDependentVectorField rhs(Domain(d * d), [&asys, k, d](double t, const Vector& entries) {
    const Matrix g = entries.reshaped(d, d);
    return Vector((asys.generator_at(t, k) * g).reshaped());
  });
  const Trajectory traj = integrate(rhs, Matrix::Identity(d, d).reshaped(), t0, t1, h);
  GroupCurve curve;
  curve.times = traj.times;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    Matrix g = traj.states[i].reshaped(d, d);
    if (std::abs(g.determinant()) < 1e-12)
      throw DomainError("determinant collapse at t=" + std::to_string(traj.times[i]));
    curve.elements.push_back(std::move(g));
  }
  return curve;
}

GroupCurve solve(const AutomorphicSystem& asys, const Vector& k, double t0, double t1, double h) {
  return asys.kind == GroupKind::abelian ? solve_abelian(asys, k, t0, t1, h) : solve_matrix(asys, k, t0, t1, h);
}

Trajectory reconstruct(const GroupAction& action, const GroupCurve& curve, const Vector& x0) {
  Trajectory traj;
  traj.times = curve.times;
  if (curve.times.size() > 1) traj.step = curve.times[1] - curve.times[0];
  traj.states.reserve(curve.elements.size());
  for (const auto& g : curve.elements) traj.states.push_back(action.act(g, x0));
  return traj;
}

double reconstruction_error(const FoliatedSystem& fs, const GroupAction& action,
                            const LeafRepresentative& representative, const Vector& x0, double t0, double t1,
                            double h) {
  const Vector k = fs.chart.leaf_of(x0);
  const AutomorphicSystem asys = reduce(fs, action, representative);
  const Trajectory rebuilt = reconstruct(action, solve(asys, k, t0, t1, h), x0);
  const Trajectory direct = integrate(assemble(fs), x0, t0, t1, h);
  return max_deviation(rebuilt, direct);
}

double group_curve_consistency(const AutomorphicSystem& asys, const Vector& k, const GroupCurve& curve) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < curve.times.size(); ++i) {
    const double dt = curve.times[i + 1] - curve.times[i - 1];
    const Matrix rate = (curve.elements[i + 1] - curve.elements[i - 1]) / dt;
    Matrix velocity = asys.kind == GroupKind::matrix ? Matrix(rate * curve.elements[i].inverse()) : rate;
    worst = std::max(worst, (velocity - asys.generator_at(curve.times[i], k)).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace folia
