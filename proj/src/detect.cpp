// SPDX-License-Identifier: Apache-2.0

#include "mdsd/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "mdsd/error.hpp"

namespace mdsd::detect {

namespace {

// Centres and scales a window to unit norm; false for constant windows.
bool standardize(std::span<const double> x, std::vector<double>& z) {
  const auto n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  z.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    z[i] = x[i] - mean;
    ss += z[i] * z[i];
  }
  // Relative floor: pure rounding noise around a constant is still constant.
  if (!(ss > 0.0) || std::sqrt(ss) <= 1e-12 * (std::abs(mean) * std::sqrt(n))) return false;
  const double inv = 1.0 / std::sqrt(ss);
  for (double& v : z) v *= inv;
  return true;
}

}  // namespace

void DetectionConfig::validate() const {
  if (!(rho_threshold > 0.0 && rho_threshold < 1.0)) {
    throw DomainError("rho_threshold must lie in (0, 1)");
  }
  if (!(alpha > 0.0)) throw DomainError("alpha must be > 0");
  if (window < 3) throw DomainError("detection window must be >= 3 samples");
}

std::optional<double> pairwise_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw InsufficientDataError("correlation needs two equal-length series of >= 3 samples");
  }
  std::vector<double> zx;
  std::vector<double> zy;
  if (!standardize(x, zx) || !standardize(y, zy)) return std::nullopt;
  double dot = 0.0;
  for (std::size_t i = 0; i < zx.size(); ++i) dot += zx[i] * zy[i];
  return std::clamp(dot, -1.0, 1.0);
}

DetectionResult detect_storm(std::span<const std::span<const double>> windows,
                             const DetectionConfig& cfg) {
  cfg.validate();
  if (windows.empty()) throw InsufficientDataError("no links to correlate");
  const std::size_t len = windows.front().size();
  if (len < 3) throw InsufficientDataError("windows need >= 3 samples");

  // Mean over pairs of z_i . z_j = (|sum z|^2 - m) / (m (m - 1)) for unit z.
  std::vector<double> sum(len, 0.0);
  std::vector<double> z;
  std::size_t usable = 0;
  double delta_sum = 0.0;
  for (const auto& w : windows) {
    if (w.size() != len) throw InsufficientDataError("windows differ in length");
    double mean = 0.0;
    for (double v : w) mean += v;
    delta_sum += mean / static_cast<double>(len);
    if (!standardize(w, z)) continue;
    ++usable;
    for (std::size_t i = 0; i < len; ++i) sum[i] += z[i];
  }
  if (usable < 2) {
    throw InsufficientDataError("need >= 2 links with non-constant windows, have " +
                                std::to_string(usable));
  }
  double norm2 = 0.0;
  for (double s : sum) norm2 += s * s;
  const auto m = static_cast<double>(usable);
  DetectionResult result;
  result.usable_links = usable;
  result.rho_bar = (norm2 - m) / (m * (m - 1.0));
  result.mean_delta = delta_sum / static_cast<double>(windows.size());
  result.detected = result.rho_bar > cfg.rho_threshold && result.mean_delta < -cfg.alpha;
  return result;
}

std::vector<DetectionLogRow> scan(std::span<const std::vector<double>> series,
                                  const DetectionConfig& cfg) {
  cfg.validate();
  std::vector<DetectionLogRow> log;
  if (series.empty()) return log;
  const std::size_t len = series.front().size();
  for (const auto& s : series) {
    if (s.size() != len) throw InsufficientDataError("link series differ in length");
  }
  if (len < cfg.window) return log;
  std::vector<std::span<const double>> windows(series.size());
  for (std::size_t start = 0; start + cfg.window <= len; ++start) {
    for (std::size_t l = 0; l < series.size(); ++l) {
      windows[l] = std::span<const double>(series[l]).subspan(start, cfg.window);
    }
    DetectionLogRow row;
    row.window_start = start;
    try {
      auto r = detect_storm(windows, cfg);
      row.rho_bar = r.rho_bar;
      row.mean_delta = r.mean_delta;
      row.detected = r.detected;
    } catch (const InsufficientDataError&) {
      row.evaluated = false;
    }
    log.push_back(row);
  }
  return log;
}

std::optional<std::size_t> onset(std::span<const DetectionLogRow> log) {
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log[i].detected) return i;
  }
  return std::nullopt;
}

void write_detection_log_csv(std::ostream& out, std::span<const DetectionLogRow> log) {
  out << "window_start,rho_bar,mean_delta_db_per_km,detected\n";
  char buf[128];
  for (const auto& row : log) {
    if (!row.evaluated) {
      std::snprintf(buf, sizeof buf, "%zu,,,0\n", row.window_start);
    } else {
      std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%d\n", row.window_start, row.rho_bar,
                    row.mean_delta, row.detected ? 1 : 0);
    }
    out << buf;
  }
}

}  // namespace mdsd::detect
