// SPDX-License-Identifier: Apache-2.0
//
// Reconstruction metrics over a time series of grids. Accuracy metrics use
// the pixels valid in both prediction and truth; coverage is reported
// separately from the prediction mask alone.

#pragma once

#include <cstddef>
#include <span>

#include "mdsd/grid.hpp"

namespace mdsd::eval {

/// Pairwise (tree) summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> v);

/// Mean over time of the mean absolute error over valid pixels.
double mae(std::span<const IntensityGrid> pred, std::span<const IntensityGrid> truth);

/// Mean over time of the spatial Pearson coefficient. Time steps where
/// either grid is constant are skipped; `skipped` receives their count.
double correlation_metric(std::span<const IntensityGrid> pred, std::span<const IntensityGrid> truth,
                          std::size_t* skipped = nullptr);

/// Mean over time of mean(truth - pred) / mean(pred); positive means
/// under-prediction. Time steps with zero mean prediction are skipped
/// with a warning.
double nbias(std::span<const IntensityGrid> pred, std::span<const IntensityGrid> truth,
             std::size_t* skipped = nullptr);

/// Percentage of valid cells.
double coverage(const IntensityGrid& grid);

struct MetricsReport {
  double mae = 0.0;
  double rho = 0.0;    // NaN when undefined at every time step
  double nbias = 0.0;  // NaN when undefined at every time step
  double coverage = 0.0;  // mean over time
  std::size_t steps = 0;
  std::size_t rho_skipped = 0;
  std::size_t nbias_skipped = 0;
};

/// All four metrics; undefined correlation or bias become NaN instead of
/// throwing. MAE with no valid pixel still throws UndefinedMetricError.
MetricsReport evaluate(std::span<const IntensityGrid> pred, std::span<const IntensityGrid> truth);

}  // namespace mdsd::eval
