#include "folia/foliated.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace folia {

FoliationChart::FoliationChart(Domain domain, int leaf_dim) : domain_(std::move(domain)), leaf_dim_(leaf_dim) {
  if (leaf_dim < 0 || leaf_dim > domain_.dim()) throw DimensionError("leaf dimension out of range");
}

FoliationChart FoliationChart::adapted(Domain domain, int leaf_dim, Map to_adapted, Map from_adapted) {
  FoliationChart chart(std::move(domain), leaf_dim);
  chart.to_adapted_ = std::move(to_adapted);
  chart.from_adapted_ = std::move(from_adapted);
  const int n = chart.dim();
  for (int j = leaf_dim; j < n; ++j) {
    auto to = chart.to_adapted_;
    chart.labels_.emplace_back([to, j](const Vector& x) { return to(x)[j]; });
  }
  return chart;
}

FoliationChart FoliationChart::labels_only(Domain domain, int leaf_dim, std::vector<ScalarField> labels) {
  FoliationChart chart(std::move(domain), leaf_dim);
  chart.labels_ = std::move(labels);
  return chart;
}

FoliationChart FoliationChart::coordinate(Domain domain, std::vector<int> leaf_coords) {
  const int n = domain.dim();
  std::vector<int> order = leaf_coords;
  for (int i = 0; i < n; ++i)
    if (std::find(leaf_coords.begin(), leaf_coords.end(), i) == leaf_coords.end()) order.push_back(i);
  if (static_cast<int>(order.size()) != n) throw DimensionError("leaf coordinates repeat or exceed the dimension");
  auto to = [order](const Vector& x) {
    Vector y(x.size());
    for (std::size_t k = 0; k < order.size(); ++k) y[static_cast<int>(k)] = x[order[k]];
    return y;
  };
  auto from = [order](const Vector& y) {
    Vector x(y.size());
    for (std::size_t k = 0; k < order.size(); ++k) x[order[k]] = y[static_cast<int>(k)];
    return x;
  };
  const int s = static_cast<int>(leaf_coords.size());
  FoliationChart chart(std::move(domain), s);
  chart.to_adapted_ = to;
  chart.from_adapted_ = from;
  // coordinate projections carry exact gradients
  for (int j = s; j < n; ++j) {
    const int coord = order[static_cast<std::size_t>(j)];
    chart.labels_.emplace_back([coord](const Vector& x) { return x[coord]; },
                               [coord](const Vector& x) {
                                 Vector g = Vector::Zero(x.size());
                                 g[coord] = 1.0;
                                 return g;
                               });
  }
  return chart;
}

Vector FoliationChart::to_adapted(const Vector& x) const {
  if (!to_adapted_) throw InapplicableError("chart exposes leaf labels only");
  if (!domain_.contains(x)) throw DomainError("point outside the chart domain");
  return to_adapted_(x);
}

Vector FoliationChart::from_adapted(const Vector& y) const {
  if (!from_adapted_) throw InapplicableError("chart exposes leaf labels only");
  return from_adapted_(y);
}

Vector FoliationChart::leaf_of(const Vector& x) const {
  if (!domain_.contains(x)) throw DomainError("point outside the chart domain");
  if (to_adapted_) return to_adapted_(x).tail(dim() - leaf_dim_);
  Vector label(label_dim());
  for (int j = 0; j < label_dim(); ++j) label[j] = labels_[static_cast<std::size_t>(j)](x);
  return label;
}

double chart_round_trip_residual(const FoliationChart& chart, std::span<const Vector> samples) {
  double worst = 0.0;
  for (const auto& x : samples)
    worst = std::max(worst, (chart.from_adapted(chart.to_adapted(x)) - x).cwiseAbs().maxCoeff());
  return worst;
}

FoliatedSystem::FoliatedSystem(RealizedAlgebra r, std::vector<Coefficient> c, FoliationChart ch, double lo, double hi)
    : realized(std::move(r)), coeffs(std::move(c)), chart(std::move(ch)), t_lo(lo), t_hi(hi) {
  if (coeffs.size() != realized.fields.size()) throw DimensionError("one coefficient per Vessiot-Guldberg field");
  if (chart.dim() != realized.ambient_dim()) throw DimensionError("chart and fields live on different spaces");
}

TDependentVectorField assemble(const FoliatedSystem& fs) {
  auto fields = fs.realized.fields;
  auto coeffs = fs.coeffs;
  const int n = fs.dim();
  return TDependentVectorField(fs.domain(), [fields, coeffs, n](double t, const Vector& x) {
    Vector out = Vector::Zero(n);
    for (std::size_t a = 0; a < fields.size(); ++a) out += coeffs[a](t, x) * fields[a](x);
    return out;
  });
}

FoliatedReport verify_foliated(const FoliatedSystem& fs, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error("trials must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> time(fs.t_lo, fs.t_hi);
  FoliatedReport report;
  report.samples = trials;
  for (int k = 0; k < trials; ++k) {
    const double t = time(rng);
    const Vector x = fs.domain().sample(rng);
    const int rank = rank_at(fs.realized.fields, x);
    if (rank < fs.chart.leaf_dim()) {
      std::ostringstream msg;
      msg << "degenerate point (rank " << rank << " < " << fs.chart.leaf_dim() << ") at x = ["
          << x.transpose() << "]";
      throw DomainError(msg.str());
    }
    if (rank != fs.chart.leaf_dim()) report.rank_ok = false;
    for (const auto& X : fs.realized.fields) {
      for (const auto& g : fs.coeffs) {
        const ScalarField gt([&g, t](const Vector& y) { return g(t, y); });
        report.com_residual = std::max(report.com_residual, std::abs(directional_derivative(X, gt, x)));
      }
      for (const auto& label : fs.chart.label_fields())
        report.chart_residual = std::max(report.chart_residual, std::abs(directional_derivative(X, label, x)));
    }
  }
  return report;
}

Vector leaf_of(const FoliationChart& chart, const Vector& x) { return chart.leaf_of(x); }

double leaf_drift(const Trajectory& traj, const FoliationChart& chart, bool relative) {
  if (traj.size() == 0 || chart.label_dim() == 0) return 0.0;
  const Vector start = chart.leaf_of(traj.states.front());
  double worst = 0.0;
  for (const auto& x : traj.states) worst = std::max(worst, (chart.leaf_of(x) - start).cwiseAbs().maxCoeff());
  if (relative) worst /= std::max(start.cwiseAbs().maxCoeff(), 1e-300);
  return worst;
}

}  // namespace folia
