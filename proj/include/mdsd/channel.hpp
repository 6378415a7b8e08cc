// SPDX-License-Identifier: Apache-2.0
//
// Link attenuation composition, measurement synthesis over a dust field,
// clear-sky baselines and isolation of the dust component.
//
// Sign convention: a signal-level change dA is the negated excess
// attenuation, dA = -(A_M - A_0), so dust onset shows up as a negative dA.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mdsd/dustphys.hpp"
#include "mdsd/grid.hpp"
#include "mdsd/spectra.hpp"

namespace mdsd::channel {

struct Link {
  std::size_t id = 0;
  Point2 a;
  Point2 b;
  double length = 0.0;     // km
  double frequency = 1e12;  // Hz

  Point2 midpoint() const { return 0.5 * (a + b); }
};

/// Concentration frames (1/m^3) indexed by sol-hour. A single frame is
/// treated as static.
struct FieldSeries {
  int start_time = 0;
  std::vector<IntensityGrid> frames;

  const IntensityGrid& at(int time) const;
  int end_time() const { return start_time + static_cast<int>(frames.size()); }
};

struct AttenuationSeries {
  std::size_t link_id = 0;
  std::vector<int> times;                // sol-hour index, strictly increasing
  std::vector<double> values;            // dB/km
  std::vector<std::uint8_t> storm_flags; // ground truth: 1 when dust is on the path
  double free_space_loss_db = 0.0;       // constant per link, not in values

  std::size_t size() const { return values.size(); }
};

constexpr int kHoursPerSol = 24;
inline int hour_of_sol(int time) { return ((time % kHoursPerSol) + kHoursPerSol) % kHoursPerSol; }

struct Baseline {
  std::array<double, kHoursPerSol> per_hour{};
  double at(int time) const { return per_hour[static_cast<std::size_t>(hour_of_sol(time))]; }
};

struct NoiseModel {
  double sigma = 0.05;  // dB/km
  std::uint64_t seed = 0;
};

struct PathSampling {
  /// Equally spaced points including both endpoints.
  std::size_t points = 16;
  bool midpoint_only = false;
};

struct SynthesisContext {
  spectra::AtmosphereState atmosphere = spectra::mars_atmosphere();
  std::vector<spectra::SpectralLine> catalog;
  spectra::PartitionModel partition;
  dust::DustParticles particles;
  NoiseModel noise;
  PathSampling sampling;
  /// Path-averaged concentration above which a sample is flagged as storm.
  double storm_threshold = 0.0;
};

/// Friis free-space loss, d in km.
double free_space_path_loss(double f, double d);

/// Path-averaged concentration along a link.
double path_average(const Link& link, const IntensityGrid& field, const PathSampling& sampling);

/// Molecular absorption coefficient (1/m) seen by a link at its frequency.
double link_absorption(const Link& link, const SynthesisContext& ctx);

AttenuationSeries synthesize_link_attenuation(const Link& link, const FieldSeries& field,
                                              const SynthesisContext& ctx);

/// One series per link; RNG streams are keyed by (seed, link id) so the
/// output is identical for every thread count.
std::vector<AttenuationSeries> synthesize_network(std::span<const Link> links,
                                                  const FieldSeries& field,
                                                  const SynthesisContext& ctx,
                                                  unsigned threads = 1);

/// Mask of samples flagged clear in the ground truth.
std::vector<std::uint8_t> clear_mask_from_flags(const AttenuationSeries& series);

/// Per hour-of-sol median of the clear samples. Throws
/// InsufficientDataError naming the first hour without a clear sample.
Baseline estimate_baseline(const AttenuationSeries& series, std::span<const std::uint8_t> clear_mask);

struct Isolated {
  double a_dust = 0.0;  // dB/km, never negative
  bool clamped = false;
};

/// measured - baseline - k * 10^4 log10(e), clamped at zero.
Isolated isolate_dust_attenuation(double measured, double baseline_at_hour, double k);

struct IsolatedSeries {
  std::vector<double> a_dust;
  std::size_t clamp_count = 0;
};

IsolatedSeries isolate_series(const AttenuationSeries& series, const Baseline& baseline, double k);

/// Series with the molecular absorption term removed (values only).
AttenuationSeries remove_absorption(const AttenuationSeries& series, double k);

/// dA(t) = -(A(t) - A_0(hour(t))).
std::vector<double> signal_level_change(const AttenuationSeries& series, const Baseline& baseline);

}  // namespace mdsd::channel
