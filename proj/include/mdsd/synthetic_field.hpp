// SPDX-License-Identifier: Apache-2.0
//
// Synthetic column dust optical depth fields. Storm season: 2-5 drifting,
// rotated anisotropic Gaussian blobs with peak CDOD in [0.8, 2.5]. Calm
// season: a background CDOD in [0.05, 0.2] modulated by a few slow,
// low-wavenumber modes. Time is in hours.

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "mdsd/grid.hpp"

namespace mdsd::field {

enum class Season { storm, calm };

std::string_view to_string(Season s);
/// Throws ConfigError for unknown names.
Season season_from_string(std::string_view name);

struct Blob {
  Point2 center;     // at t = 0, km
  Point2 velocity;   // km/h
  double sigma_major = 10.0;  // km
  double sigma_minor = 5.0;   // km
  double angle = 0.0;         // rad, major axis from +x
  double peak = 1.0;          // CDOD

  double value_at(Point2 p, double t) const;
  /// Integral over the plane, independent of t.
  double mass() const;
};

struct Mode {
  double kx = 0.0;  // rad/km
  double ky = 0.0;
  double omega = 0.0;  // rad/h
  double phase = 0.0;
  double amplitude = 0.0;  // relative to the background
};

class SyntheticField {
 public:
  /// Deterministic in (season, area, seed).
  SyntheticField(Season season, const Extent& area, std::uint64_t seed);

  Season season() const { return season_; }
  double value_at(Point2 p, double t) const;
  /// CDOD sampled at the cell centres, fully valid.
  IntensityGrid frame(const GridSpec& grid, double t) const;

  const std::vector<Blob>& blobs() const { return blobs_; }
  double background() const { return background_; }

 private:
  Season season_;
  std::vector<Blob> blobs_;
  double background_ = 0.0;
  std::vector<Mode> modes_;
};

}  // namespace mdsd::field
