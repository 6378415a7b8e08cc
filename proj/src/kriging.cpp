// SPDX-License-Identifier: Apache-2.0

#include "mdsd/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdsd/error.hpp"

namespace mdsd::interp {

double Variogram::operator()(double h) const {
  if (h <= 0.0) return 0.0;
  return nugget + (sill - nugget) * -std::expm1(-h / range);
}

void Variogram::validate() const {
  if (!(nugget >= 0.0) || !(sill >= nugget)) throw DomainError("variogram needs sill >= nugget >= 0");
  if (!(range > 0.0)) throw DomainError("variogram range must be > 0");
}

EmpiricalVariogram empirical_variogram(std::span<const Point2> points,
                                       std::span<const double> values, std::size_t bins) {
  if (points.size() != values.size()) throw DomainError("points and values differ in length");
  EmpiricalVariogram ev;
  if (bins == 0 || points.size() < 2) return ev;
  double dmax = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) dmax = std::max(dmax, distance(points[i], points[j]));
  }
  const double cutoff = 0.5 * dmax;
  if (!(cutoff > 0.0)) return ev;
  const double width = cutoff / static_cast<double>(bins);
  std::vector<double> lag(bins, 0.0), gam(bins, 0.0);
  std::vector<std::size_t> count(bins, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = distance(points[i], points[j]);
      if (d > cutoff || d <= 0.0) continue;
      const auto b = std::min(bins - 1, static_cast<std::size_t>(d / width));
      const double dv = values[i] - values[j];
      lag[b] += d;
      gam[b] += 0.5 * dv * dv;
      ++count[b];
    }
  }
  for (std::size_t b = 0; b < bins; ++b) {
    if (count[b] == 0) continue;
    ev.lag.push_back(lag[b] / static_cast<double>(count[b]));
    ev.gamma.push_back(gam[b] / static_cast<double>(count[b]));
    ev.pairs.push_back(count[b]);
  }
  return ev;
}

namespace {

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

double max_pair_distance(std::span<const Point2> points) {
  double dmax = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) dmax = std::max(dmax, distance(points[i], points[j]));
  }
  return dmax;
}

}  // namespace

VariogramFit fit_variogram(std::span<const Point2> points, std::span<const double> values,
                           std::size_t bins) {
  const double var = sample_variance(values);
  const double dmax = max_pair_distance(points);
  VariogramFit fallback;
  fallback.fallback = true;
  fallback.model = {0.0, var, dmax > 0.0 ? dmax / 3.0 : 1.0};

  if (points.size() < 5 || !(var > 0.0)) return fallback;
  const auto ev = empirical_variogram(points, values, bins);
  if (ev.lag.size() < 3) return fallback;

  const double hmax = ev.lag.back();
  double best_sse = std::numeric_limits<double>::infinity();
  Variogram best;
  constexpr int kRanges = 60;
  for (int r = 0; r < kRanges; ++r) {
    // Log-spaced from 2% to 3x the largest binned lag.
    const double a = hmax * 0.02 * std::pow(150.0, static_cast<double>(r) / (kRanges - 1));
    double sw = 0, sp = 0, spp = 0, sg = 0, spg = 0;
    for (std::size_t b = 0; b < ev.lag.size(); ++b) {
      const double w = static_cast<double>(ev.pairs[b]);
      const double p = -std::expm1(-ev.lag[b] / a);
      sw += w;
      sp += w * p;
      spp += w * p * p;
      sg += w * ev.gamma[b];
      spg += w * p * ev.gamma[b];
    }
    double c0 = 0.0, c1 = 0.0;
    const double det = sw * spp - sp * sp;
    if (det > 0.0) {
      c0 = (spp * sg - sp * spg) / det;
      c1 = (sw * spg - sp * sg) / det;
    }
    if (!(det > 0.0) || c0 < 0.0 || c1 < 0.0) {
      // Boundary candidates of the non-negative problem.
      const double c1_only = spp > 0.0 ? std::max(0.0, spg / spp) : 0.0;
      const double c0_only = std::max(0.0, sg / sw);
      double sse_a = 0.0, sse_b = 0.0;
      for (std::size_t b = 0; b < ev.lag.size(); ++b) {
        const double w = static_cast<double>(ev.pairs[b]);
        const double p = -std::expm1(-ev.lag[b] / a);
        sse_a += w * std::pow(ev.gamma[b] - c1_only * p, 2);
        sse_b += w * std::pow(ev.gamma[b] - c0_only, 2);
      }
      if (sse_a <= sse_b) {
        c0 = 0.0;
        c1 = c1_only;
      } else {
        c0 = c0_only;
        c1 = 0.0;
      }
    }
    double sse = 0.0;
    for (std::size_t b = 0; b < ev.lag.size(); ++b) {
      const double w = static_cast<double>(ev.pairs[b]);
      const double p = -std::expm1(-ev.lag[b] / a);
      sse += w * std::pow(ev.gamma[b] - c0 - c1 * p, 2);
    }
    if (sse < best_sse) {
      best_sse = sse;
      best = {c0, c0 + c1, a};
    }
  }
  if (!(best.sill - best.nugget > 0.0) || !std::isfinite(best_sse)) return fallback;
  return {best, false};
}

OrdinaryKriging::OrdinaryKriging(std::span<const Point2> points, const Variogram& model)
    : points_(points.begin(), points.end()), model_(model) {
  model_.validate();
  if (points_.empty()) throw MethodInfeasibleError("kriging needs at least one sample");
  if (!(model_.sill > 0.0)) throw MethodInfeasibleError("kriging needs a positive sill");
  const auto n = static_cast<Eigen::Index>(points_.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    c(j, j) = model_.sill;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      c(i, j) = covariance(distance(points_[static_cast<std::size_t>(i)], points_[static_cast<std::size_t>(j)]));
    }
  }
  llt_.compute(c);  // reads the lower triangle only
  if (llt_.info() != Eigen::Success) throw MethodInfeasibleError("kriging covariance is singular");
  inv_ones_ = llt_.solve(Eigen::VectorXd::Ones(n));
  ones_inv_ones_ = inv_ones_.sum();
}

// With 1'b = 0 the variogram system [G 1; 1' 0][b; m] = [z; 0] is
// equivalent to C w + m 1 = z, w = -b, since G = sill 1 1' - C.
void OrdinaryKriging::fit(std::span<const double> values) {
  if (values.size() != points_.size()) throw DomainError("one value per sample required");
  const auto n = static_cast<Eigen::Index>(points_.size());
  const Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(values.data(), n);
  const Eigen::VectorXd y = llt_.solve(z);
  mean_ = y.sum() / ones_inv_ones_;
  weights_ = y - mean_ * inv_ones_;
}

double OrdinaryKriging::predict(Point2 p) const {
  double z = mean_;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    z += weights_(static_cast<Eigen::Index>(i)) * covariance(distance(p, points_[i]));
  }
  return z;
}

}  // namespace mdsd::interp
