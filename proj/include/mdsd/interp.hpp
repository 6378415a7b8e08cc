// SPDX-License-Identifier: Apache-2.0
//
// Gridding of link-attached samples: linear and Clough-Tocher cubic on a
// Delaunay triangulation, nearest neighbour, multiquadric RBF, inverse
// distance weighting, ordinary kriging, and the uncertainty-weighted map.

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdsd/grid.hpp"
#include "mdsd/kriging.hpp"

namespace mdsd::interp {

enum class Method { linear, nearest, cubic, rbf, idw, kriging, weighted };

std::string_view to_string(Method m);
/// Throws ConfigError for unknown names.
Method method_from_string(std::string_view name);

struct Sample {
  Point2 position;
  double value = 0.0;
  double variance = 0.0;
};

struct InterpConfig {
  Method method = Method::linear;
  double idw_power = 2.0;
  /// Multiquadric shape parameter (km); default is the mean
  /// nearest-neighbour spacing of the samples.
  std::optional<double> rbf_shape;
  /// Fixed variogram; fitted per value vector when empty.
  std::optional<Variogram> variogram;
  /// Regularizer of the uncertainty-weighted map.
  double z = 1.0;
  /// Distance scale of the weighted map's W = (d / L)^2.
  double weight_length = 15.0;

  void validate() const;
};

/// W(d) = (d / length)^2.
double squared_distance_weight(double d, double length);

/// theta = sum (W_i + z s_i)^-1 r_i / sum (W_i + z s_i)^-1 with s_i the
/// variances divided by their median. Samples with a zero denominator take
/// the whole estimate; infinite variances drop a sample. Throws
/// InsufficientDataError when no sample carries weight.
IntensityGrid uncertainty_weighted_map(std::span<const Sample> samples, const GridSpec& grid,
                                       double z,
                                       const std::function<double(double)>& weight_fn);

/// Geometry-dependent state (triangulation, cell locations, RBF
/// factorization) prepared once and reused for every value vector.
class Interpolator {
 public:
  Interpolator(std::span<const Point2> positions, const GridSpec& grid, const InterpConfig& cfg);
  ~Interpolator();
  Interpolator(Interpolator&&) noexcept;
  Interpolator& operator=(Interpolator&&) noexcept;

  /// Variances are used only by the weighted method (zeros when empty).
  IntensityGrid apply(std::span<const double> values, std::span<const double> variances = {}) const;

  const GridSpec& grid() const { return grid_; }

 private:
  struct State;
  GridSpec grid_;
  InterpConfig cfg_;
  std::unique_ptr<State> state_;
};

IntensityGrid interpolate(std::span<const Sample> samples, const GridSpec& grid,
                          const InterpConfig& cfg);

}  // namespace mdsd::interp
