// SPDX-License-Identifier: Apache-2.0
//
// Network-wide correlation detector: a storm is declared when the mean
// pairwise Pearson coefficient of the links' signal-level changes exceeds a
// threshold and the mean change is below -alpha dB/km.

#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace mdsd::detect {

struct DetectionConfig {
  double rho_threshold = 0.7;
  double alpha = 1.0;       // dB/km
  std::size_t window = 24;  // samples

  void validate() const;
};

/// Pearson coefficient; std::nullopt when either series has zero variance.
std::optional<double> pairwise_correlation(std::span<const double> x, std::span<const double> y);

struct DetectionResult {
  bool detected = false;
  double rho_bar = 0.0;
  double mean_delta = 0.0;  // dB/km
  std::size_t usable_links = 0;
};

/// Evaluates one window per link (all of equal length >= 3). Constant
/// windows are left out of rho_bar. Throws InsufficientDataError with fewer
/// than two usable links.
DetectionResult detect_storm(std::span<const std::span<const double>> windows,
                             const DetectionConfig& cfg);

struct DetectionLogRow {
  std::size_t window_start = 0;  // index into the series
  double rho_bar = 0.0;
  double mean_delta = 0.0;
  bool detected = false;
  bool evaluated = true;  // false when fewer than two links were usable
};

/// Slides a window of cfg.window samples with stride 1 over equal-length
/// per-link series.
std::vector<DetectionLogRow> scan(std::span<const std::vector<double>> series,
                                  const DetectionConfig& cfg);

/// Index of the first detecting window, if any.
std::optional<std::size_t> onset(std::span<const DetectionLogRow> log);

void write_detection_log_csv(std::ostream& out, std::span<const DetectionLogRow> log);

}  // namespace mdsd::detect
