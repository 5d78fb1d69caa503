#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "folia/algebra.hpp"
#include "folia/foliated.hpp"
#include "folia/integrate.hpp"

namespace folia {

enum class GroupKind { abelian, matrix };

/// Lie group action phi : G x R^N -> R^N. Abelian groups (R^r, +) store
/// elements as r x 1 matrices; matrix groups store d x d matrices generated by
/// a MatrixRealization.
class GroupAction {
 public:
  using Act = std::function<Vector(const Matrix& g, const Vector& x)>;

  static GroupAction abelian(int rank, Domain domain, Act act);
  static GroupAction matrix(MatrixRealization generators, Domain domain, Act act);

  GroupKind kind() const { return kind_; }
  int group_dim() const { return group_dim_; }
  const std::optional<MatrixRealization>& generators() const { return generators_; }
  const Domain& domain() const { return domain_; }

  Matrix identity() const;
  Matrix compose(const Matrix& g, const Matrix& h) const;
  /// exp(t e_a).
  Matrix exp_generator(int a, double t) const;
  /// Throws DomainError when x or the image leaves the domain.
  Vector act(const Matrix& g, const Vector& x) const;
  /// d/dt act(exp(t e_a), x) at t = 0, by central differences.
  Vector infinitesimal(int a, const Vector& x) const;

 private:
  GroupAction(GroupKind kind, int group_dim, std::optional<MatrixRealization> gens, Domain domain, Act act);

  GroupKind kind_;
  int group_dim_;
  std::optional<MatrixRealization> generators_;
  Domain domain_;
  Act act_;
};

/// max |act(identity, x) - x| over samples.
double action_identity_residual(const GroupAction& action, std::span<const Vector> samples);
/// max |act(g h, x) - act(g, act(h, x))| over samples with seeded random g, h
/// near the identity.
double action_composition_residual(const GroupAction& action, std::span<const Vector> samples,
                                   std::uint64_t seed = kDefaultSeed);

using LeafCoefficient = std::function<double(double t, const Vector& k)>;
/// Maps a leaf label k to some point on that leaf.
using LeafRepresentative = std::function<Vector(const Vector& k)>;

/// g' = sum_a c_a(t, k) X^R_a(g) on G x M. The stored c_a already carry the
/// minus sign of the reduction, so for a decomposition X = sum f_a X_a the
/// coefficients are c_a = -f_a.
struct AutomorphicSystem {
  GroupKind kind;
  int group_dim;
  std::optional<MatrixRealization> generators;
  std::vector<LeafCoefficient> coeffs;
  int leaf_space_dim;

  /// Builds the system from decomposition coefficients f_a (negating them).
  /// Throws InvariantError when matrix generators miss their structure
  /// constants by more than 1e-12.
  static AutomorphicSystem from_decomposition(GroupKind kind, int group_dim,
                                              std::optional<MatrixRealization> generators,
                                              std::vector<LeafCoefficient> decomposition, int leaf_space_dim);

  /// sum_a c_a(t, k) A_a for matrix groups, (c_a(t, k))_a for abelian ones.
  Matrix generator_at(double t, const Vector& k) const;
};

/// Checks at `trials` seeded points that the action's infinitesimal
/// generators equal -X_a within 1e-6 and returns the reduced system with
/// c_a(t, k) = -g_a(t, representative(k)). Throws
/// InapplicableError("action incompatible with realization") otherwise.
AutomorphicSystem reduce(const FoliatedSystem& fs, const GroupAction& action, LeafRepresentative representative,
                         int trials = 100, std::uint64_t seed = kDefaultSeed);

struct GroupCurve {
  std::vector<double> times;
  std::vector<Matrix> elements;
};

/// lambda' = c(t, k), lambda(t0) = 0, by RK4.
GroupCurve solve_abelian(const AutomorphicSystem& asys, const Vector& k, double t0, double t1,
                         double h = kDefaultStep);
/// g' = (sum_a c_a A_a) g, g(t0) = identity, by RK4 on the entries. Throws
/// DomainError when |det g| drops below 1e-12.
GroupCurve solve_matrix(const AutomorphicSystem& asys, const Vector& k, double t0, double t1,
                        double h = kDefaultStep);
GroupCurve solve(const AutomorphicSystem& asys, const Vector& k, double t0, double t1, double h = kDefaultStep);

/// States act(g(t_i), x0).
Trajectory reconstruct(const GroupAction& action, const GroupCurve& curve, const Vector& x0);

/// sup over the grid of |reconstruct - integrate(assemble(fs))|_inf.
double reconstruction_error(const FoliatedSystem& fs, const GroupAction& action,
                            const LeafRepresentative& representative, const Vector& x0, double t0, double t1,
                            double h = kDefaultStep);

/// max over interior samples of |(g_{i+1} - g_{i-1}) / (t_{i+1} - t_{i-1}) g_i^{-1} - generator_at(t_i)|.
double group_curve_consistency(const AutomorphicSystem& asys, const Vector& k, const GroupCurve& curve);

}  // namespace folia
