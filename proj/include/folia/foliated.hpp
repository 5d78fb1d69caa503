#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "folia/fields.hpp"
#include "folia/integrate.hpp"

namespace folia {

/// Leaf labels for a regular foliation of an open subset of R^N. Either a
/// full adapted chart x -> (theta^1..theta^s, I^1..I^{N-s}) with its inverse,
/// or only the transverse labels I (enough for drift checks).
class FoliationChart {
 public:
  using Map = std::function<Vector(const Vector&)>;

  static FoliationChart adapted(Domain domain, int leaf_dim, Map to_adapted, Map from_adapted);
  static FoliationChart labels_only(Domain domain, int leaf_dim, std::vector<ScalarField> labels);
  /// Identity chart whose theta block is the coordinates listed in leaf_coords.
  static FoliationChart coordinate(Domain domain, std::vector<int> leaf_coords);

  int dim() const { return domain_.dim(); }
  int leaf_dim() const { return leaf_dim_; }
  int label_dim() const { return static_cast<int>(labels_.size()); }
  bool has_adapted() const { return static_cast<bool>(to_adapted_); }
  const Domain& domain() const { return domain_; }

  Vector to_adapted(const Vector& x) const;
  Vector from_adapted(const Vector& y) const;
  /// The leaf label I(x). Throws DomainError outside the chart domain.
  Vector leaf_of(const Vector& x) const;
  const std::vector<ScalarField>& label_fields() const { return labels_; }

 private:
  FoliationChart(Domain domain, int leaf_dim);

  Domain domain_;
  int leaf_dim_;
  Map to_adapted_;
  Map from_adapted_;
  std::vector<ScalarField> labels_;
};

/// max over samples of |from_adapted(to_adapted(x)) - x|_inf.
double chart_round_trip_residual(const FoliationChart& chart, std::span<const Vector> samples);

using Coefficient = std::function<double(double t, const Vector& x)>;

/// X(t, x) = sum_a g_a(t, x) X_a(x) with g_a t-dependent constants of motion
/// of every X_a.
struct FoliatedSystem {
  RealizedAlgebra realized;
  std::vector<Coefficient> coeffs;
  FoliationChart chart;
  /// Window from which verification draws sample times.
  double t_lo = 0.0;
  double t_hi = 1.0;

  FoliatedSystem(RealizedAlgebra realized, std::vector<Coefficient> coeffs, FoliationChart chart,
                 double t_lo = 0.0, double t_hi = 1.0);

  int dim() const { return realized.ambient_dim(); }
  const Domain& domain() const { return realized.domain(); }
};

TDependentVectorField assemble(const FoliatedSystem& fs);

struct FoliatedReport {
  double com_residual = 0.0;    ///< max |X_a g_b|
  bool rank_ok = true;          ///< rank of the X_a equals the leaf dimension everywhere sampled
  double chart_residual = 0.0;  ///< max |X_a I^j|
  int samples = 0;

  bool passed(double tol = 1e-6) const { return rank_ok && com_residual <= tol && chart_residual <= tol; }
};

/// Seeded statistical check of the foliated-Lie-system conditions. A sampled
/// point where the rank drops below the leaf dimension aborts with
/// DomainError naming that point.
FoliatedReport verify_foliated(const FoliatedSystem& fs, int trials, std::uint64_t seed = kDefaultSeed);

Vector leaf_of(const FoliationChart& chart, const Vector& x);

/// max over samples of |leaf_of(x(t)) - leaf_of(x(t0))|_inf, optionally divided
/// by max(|leaf_of(x(t0))|_inf, 1e-300).
double leaf_drift(const Trajectory& traj, const FoliationChart& chart, bool relative = false);

}  // namespace folia
