#include "folia/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace folia {

namespace {

std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

std::string describe(IntegrationError::Kind kind, double t) {
  return (kind == IntegrationError::Kind::blow_up ? "blow-up at t=" : "left domain at t=") + format_time(t);
}

std::vector<double> time_grid(double t0, double t1, double h) {
  const double span = t1 - t0;
  const double steps = span / h;
  auto full = static_cast<long long>(std::floor(steps + 1e-9));
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(full) + 2);
  for (long long k = 0; k <= full; ++k) times.push_back(t0 + static_cast<double>(k) * h);
  if (span - static_cast<double>(full) * h > 1e-9 * h)
    times.push_back(t1);
  else
    times.back() = t1;
  return times;
}

}  // namespace

void Trajectory::write_csv(std::ostream& os) const {
  os << "t";
  for (int i = 1; i <= dim(); ++i) os << ",x" << i;
  os << "\n";
  char buf[32];
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", times[k]);
    os << buf;
    for (int i = 0; i < states[k].size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", states[k][i]);
      os << "," << buf;
    }
    os << "\n";
  }
}

void Trajectory::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write trajectory file: " + path);
  write_csv(out);
}

IntegrationError::IntegrationError(Kind kind, double time, Trajectory partial)
    : Error(describe(kind, time)), kind_(kind), time_(time), partial_(std::move(partial)) {}

Trajectory integrate(const TDependentVectorField& field, const Vector& x0, double t0, double t1, double h) {
  if (!(t1 > t0)) throw Error("integrate requires t1 > t0");
  if (!(h > 0.0) || h > (t1 - t0) * (1.0 + 1e-12)) throw Error("integrate requires 0 < h <= t1 - t0");
  if (x0.size() != field.dim()) throw DimensionError("initial state has wrong dimension");

  Trajectory traj;
  traj.step = h;
  const auto grid = time_grid(t0, t1, h);
  traj.times.reserve(grid.size());
  traj.states.reserve(grid.size());
  traj.times.push_back(grid.front());
  traj.states.push_back(x0);
  if (!field.domain().contains(x0)) throw IntegrationError(IntegrationError::Kind::left_domain, t0, traj);

  Vector x = x0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double t = grid[k - 1];
    const double dt = grid[k] - t;
    const Vector k1 = field(t, x);
    const Vector k2 = field(t + 0.5 * dt, x + (0.5 * dt) * k1);
    const Vector k3 = field(t + 0.5 * dt, x + (0.5 * dt) * k2);
    const Vector k4 = field(t + dt, x + dt * k3);
    x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw IntegrationError(IntegrationError::Kind::blow_up, grid[k], traj);
    if (!field.domain().contains(x)) throw IntegrationError(IntegrationError::Kind::left_domain, grid[k], traj);
    traj.times.push_back(grid[k]);
    traj.states.push_back(x);
  }
  return traj;
}

Vector interpolate(const Trajectory& traj, double t) {
  if (traj.times.empty() || t < traj.times.front() || t > traj.times.back())
    throw Error("interpolation time out of range");
  auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
  const auto k = static_cast<std::size_t>(it - traj.times.begin());
  if (*it == t) return traj.states[k];
  const double ta = traj.times[k - 1], tb = traj.times[k];
  const double w = (t - ta) / (tb - ta);
  return (1.0 - w) * traj.states[k - 1] + w * traj.states[k];
}

double convergence_order(const TDependentVectorField& field, const Vector& x0, double t0, double t1, double h) {
  const Vector coarse = integrate(field, x0, t0, t1, h).final_state();
  const Vector fine = integrate(field, x0, t0, t1, h / 2.0).final_state();
  const Vector ref = integrate(field, x0, t0, t1, h / 4.0).final_state();
  const double e1 = (coarse - ref).cwiseAbs().maxCoeff();
  const double e2 = (fine - ref).cwiseAbs().maxCoeff();
  if (e2 < 1e-14) throw SolveError("error floor reached");
  return std::log2(e1 / e2);
}

double max_deviation(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw DimensionError("trajectories have different lengths");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.times[k] != b.times[k]) throw Error("trajectories do not share a time grid");
    worst = std::max(worst, (a.states[k] - b.states[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace folia
