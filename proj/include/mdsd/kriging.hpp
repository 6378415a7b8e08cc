// SPDX-License-Identifier: Apache-2.0
//
// Ordinary kriging with an isotropic exponential variogram, solved in dual
// form so one factorization serves every grid cell. The system is factored
// in covariance form C(h) = sill - gamma(h), which is positive definite.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mdsd/grid.hpp"

namespace mdsd::interp {

/// gamma(h) = nugget + (sill - nugget) (1 - exp(-h / range)) for h > 0 and
/// gamma(0) = 0. `sill` is the total sill.
struct Variogram {
  double nugget = 0.0;
  double sill = 1.0;
  double range = 1.0;  // km

  double operator()(double h) const;
  void validate() const;
};

struct EmpiricalVariogram {
  std::vector<double> lag;    // mean pair distance per bin
  std::vector<double> gamma;  // semivariance per bin
  std::vector<std::size_t> pairs;
};

/// Bins pair semivariances into `bins` equal-width classes up to half the
/// largest pair distance. Empty bins are dropped.
EmpiricalVariogram empirical_variogram(std::span<const Point2> points,
                                       std::span<const double> values, std::size_t bins = 12);

struct VariogramFit {
  Variogram model;
  bool fallback = false;  // true when the sample-variance fallback was used
};

/// Pair-count weighted least squares over a grid of ranges with a
/// non-negative (nugget, partial sill) solve at each range. Falls back to a
/// zero-nugget model with the sample variance as sill for fewer than five
/// samples or a degenerate fit.
VariogramFit fit_variogram(std::span<const Point2> points, std::span<const double> values,
                           std::size_t bins = 12);

class OrdinaryKriging {
 public:
  /// Factorizes the covariance matrix for fixed sample positions. Throws
  /// MethodInfeasibleError when it is not positive definite (zero sill or
  /// coincident samples).
  OrdinaryKriging(std::span<const Point2> points, const Variogram& model);

  /// Solves for the dual coefficients of a value vector.
  void fit(std::span<const double> values);
  double predict(Point2 p) const;

 private:
  double covariance(double h) const { return model_.sill - model_(h); }

  std::vector<Point2> points_;
  Variogram model_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd inv_ones_;  // C^-1 1
  double ones_inv_ones_ = 0.0;
  Eigen::VectorXd weights_;
  double mean_ = 0.0;
};

}  // namespace mdsd::interp
