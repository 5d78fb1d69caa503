#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "folia/foliated.hpp"

namespace folia {

/// Psi : N^m x O -> N. When a chart is attached the rule claims to preserve
/// its leaves; the claim is checked (leaf_preservation_defect), not enforced.
class SuperpositionRule {
 public:
  using Map = std::function<Vector(std::span<const Vector> solutions, const Vector& k)>;

  /// Throws InvariantError unless m * param_dim >= vessiot_guldberg_dim, the
  /// count every superposition rule must satisfy.
  SuperpositionRule(std::string name, int m, int state_dim, int param_dim, int vessiot_guldberg_dim, Map psi,
                    std::optional<FoliationChart> chart = std::nullopt);

  const std::string& name() const { return name_; }
  int m() const { return m_; }
  int state_dim() const { return state_dim_; }
  int param_dim() const { return param_dim_; }
  int vessiot_guldberg_dim() const { return vg_dim_; }
  bool leaf_preserving() const { return chart_.has_value(); }
  const std::optional<FoliationChart>& chart() const { return chart_; }

  /// Throws DimensionError on size mismatch and SingularConfigurationError on
  /// rule-specific singular inputs.
  Vector apply(std::span<const Vector> solutions, const Vector& k) const;

 private:
  std::string name_;
  int m_, state_dim_, param_dim_, vg_dim_;
  Map psi_;
  std::optional<FoliationChart> chart_;
};

/// Psi(x_1, k) = from_adapted(theta(x_1) + k, I(x_1)) for realizations that
/// act by constant translations along the leaves of an adapted chart. Throws
/// InapplicableError("abelian derivation inapplicable") otherwise.
SuperpositionRule derive_abelian_rule(const FoliatedSystem& fs, int trials = 16, std::uint64_t seed = kDefaultSeed);

/// max over samples, a and candidates of |X_a^{[m+1]} Psi_i| at joint points
/// of (R^N)^{m+1}.
double first_integral_residual(const FoliatedSystem& fs, std::span<const ScalarField> candidates, int m,
                               std::span<const Vector> samples);

/// max over trials of |leaf_of(Psi(x_1..x_m, k)) - leaf_of(x_1)| for
/// same-leaf inputs and random k in [-2, 2]^p.
double leaf_preservation_defect(const SuperpositionRule& rule, const FoliatedSystem& fs, int trials,
                                std::uint64_t seed = kDefaultSeed);

/// Draws `count` initial conditions lying on one common leaf.
using LeafSampler = std::function<std::vector<Vector>(std::mt19937_64& rng, int count)>;

/// Same-leaf sampler built from the adapted chart of fs: moves theta in
/// [-1, 1]^s around a random base point and keeps I fixed.
LeafSampler chart_leaf_sampler(const FoliatedSystem& fs);

/// Independent draws from the domain, pairwise at least min_separation apart
/// in the inf-norm (for systems whose leaf is the whole space).
LeafSampler distinct_point_sampler(Domain domain, double min_separation);

struct ParameterSolve {
  Vector k;
  double residual = 0.0;
};

/// Damped Gauss-Newton with 8 seeded multistarts of magnitude up to 2000 for
/// Psi(solutions, k) = target.
/// Throws SolveError("no parameter found") if the best residual exceeds 1e-8.
ParameterSolve solve_parameters(const SuperpositionRule& rule, std::span<const Vector> solutions,
                                const Vector& target, std::mt19937_64& rng);

struct RuleVerification {
  double max_reconstruction_error = 0.0;
  double param_solve_residual = 0.0;
  int trials = 0;
  /// The solver certifies local convergence only; global uniqueness of k is
  /// assumed, never established.
  std::string caveat = "parameter uniqueness not certified (local multistart solve)";
};

/// For each trial: m particular solutions and one target on a common leaf
/// are integrated over [t0, t1]; k is solved at t0 and reused on every later
/// sample of the grid.
RuleVerification verify_rule(const SuperpositionRule& rule, const TDependentVectorField& system,
                             const LeafSampler& sampler, double t0, double t1, int trials,
                             std::uint64_t seed = kDefaultSeed, double h = kDefaultStep);

RuleVerification verify_rule(const SuperpositionRule& rule, const FoliatedSystem& fs, double t0, double t1,
                             int trials, std::uint64_t seed = kDefaultSeed, double h = kDefaultStep);

}  // namespace folia
