#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "folia/fields.hpp"
#include "folia/types.hpp"

namespace folia {

inline constexpr double kDefaultStep = 1e-3;

/// Uniformly sampled solution curve. The last interval may be shorter than
/// the nominal step so that the final time is hit exactly.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  double step = 0.0;

  std::size_t size() const { return times.size(); }
  int dim() const { return states.empty() ? 0 : static_cast<int>(states.front().size()); }
  const Vector& final_state() const { return states.back(); }

  /// Header "t,x1,...,xN", one row per sample, %.17g formatting.
  void write_csv(std::ostream& os) const;
  void write_csv(const std::string& path) const;
};

/// Raised when integration cannot continue; carries the samples computed so far.
class IntegrationError : public Error {
 public:
  enum class Kind { blow_up, left_domain };

  IntegrationError(Kind kind, double time, Trajectory partial);

  Kind kind() const { return kind_; }
  double time() const { return time_; }
  const Trajectory& partial() const { return partial_; }

 private:
  Kind kind_;
  double time_;
  Trajectory partial_;
};

/// Classical fixed-step RK4 from t0 to exactly t1.
Trajectory integrate(const TDependentVectorField& field, const Vector& x0, double t0, double t1,
                     double h = kDefaultStep);

/// Piecewise-linear interpolation; exact sample times return the stored state.
Vector interpolate(const Trajectory& traj, double t);

/// log2(err(h) / err(h/2)) at t1, both errors measured against an h/4 run.
/// Throws SolveError("error floor reached") when err(h/2) < 1e-14.
double convergence_order(const TDependentVectorField& field, const Vector& x0, double t0, double t1, double h);

/// sup over shared samples of |a - b|_inf; trajectories must share time grids.
double max_deviation(const Trajectory& a, const Trajectory& b);

}  // namespace folia
