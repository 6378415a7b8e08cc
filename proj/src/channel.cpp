// SPDX-License-Identifier: Apache-2.0

#include "mdsd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mdsd/constants.hpp"
#include "mdsd/error.hpp"
#include "mdsd/parallel.hpp"
#include "mdsd/random.hpp"

namespace mdsd::channel {

namespace c = constants;

const IntensityGrid& FieldSeries::at(int time) const {
  if (frames.empty()) throw GeometryError("field series has no frames");
  if (frames.size() == 1) return frames.front();
  if (time < start_time || time >= end_time()) {
    throw GeometryError("time " + std::to_string(time) + " outside field series");
  }
  return frames[static_cast<std::size_t>(time - start_time)];
}

double free_space_path_loss(double f, double d) {
  if (!(f > 0.0) || !(d > 0.0)) throw DomainError("frequency and distance must be > 0");
  return 20.0 * std::log10(4.0 * c::kPi * d * 1000.0 * f / c::kSpeedOfLight);
}

double path_average(const Link& link, const IntensityGrid& field, const PathSampling& sampling) {
  const Extent& ext = field.spec().extent;
  if (!ext.contains(link.a) || !ext.contains(link.b)) {
    throw GeometryError("link " + std::to_string(link.id) + " endpoint outside field extent");
  }
  if (sampling.midpoint_only || sampling.points < 2) return field.sample(link.midpoint());
  double sum = 0.0;
  const auto n = sampling.points;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    sum += field.sample(link.a + t * (link.b - link.a));
  }
  return sum / static_cast<double>(n);
}

double link_absorption(const Link& link, const SynthesisContext& ctx) {
  return spectra::absorption_coefficient(ctx.atmosphere, ctx.catalog, link.frequency,
                                         ctx.partition);
}

namespace {

AttenuationSeries synthesize_with_absorption(const Link& link, const FieldSeries& field,
                                             const SynthesisContext& ctx, double k) {
  const double slope = dust::attenuation_per_particle(ctx.particles, link.frequency);
  const double molecular = spectra::absorption_db_per_km(k);

  AttenuationSeries series;
  series.link_id = link.id;
  series.free_space_loss_db = free_space_path_loss(link.frequency, link.length);
  const int begin = field.start_time;
  const int end = field.frames.size() == 1 ? begin + 1 : field.end_time();
  const auto count = static_cast<std::size_t>(end - begin);
  series.times.reserve(count);
  series.values.reserve(count);
  series.storm_flags.reserve(count);

  Rng rng(derive_seed(ctx.noise.seed, {static_cast<std::uint64_t>(link.id)}));
  std::normal_distribution<double> noise(0.0, ctx.noise.sigma > 0.0 ? ctx.noise.sigma : 1.0);
  for (int t = begin; t < end; ++t) {
    const double n_eff = path_average(link, field.at(t), ctx.sampling);
    double value = slope * n_eff + molecular;
    if (ctx.noise.sigma > 0.0) value += noise(rng);
    series.times.push_back(t);
    series.values.push_back(value);
    series.storm_flags.push_back(n_eff > ctx.storm_threshold ? 1 : 0);
  }
  return series;
}

}  // namespace

AttenuationSeries synthesize_link_attenuation(const Link& link, const FieldSeries& field,
                                              const SynthesisContext& ctx) {
  return synthesize_with_absorption(link, field, ctx, link_absorption(link, ctx));
}

std::vector<AttenuationSeries> synthesize_network(std::span<const Link> links,
                                                  const FieldSeries& field,
                                                  const SynthesisContext& ctx, unsigned threads) {
  // Links usually share one frequency; evaluate k(f) once per distinct value.
  std::vector<std::pair<double, double>> k_cache;
  for (const auto& link : links) {
    auto it = std::find_if(k_cache.begin(), k_cache.end(),
                           [&](const auto& e) { return e.first == link.frequency; });
    if (it == k_cache.end()) k_cache.emplace_back(link.frequency, link_absorption(link, ctx));
  }
  auto k_for = [&](double f) {
    return std::find_if(k_cache.begin(), k_cache.end(),
                        [&](const auto& e) { return e.first == f; })->second;
  };
  std::vector<AttenuationSeries> out(links.size());
  parallel_for(links.size(), threads, [&](std::size_t i) {
    out[i] = synthesize_with_absorption(links[i], field, ctx, k_for(links[i].frequency));
  });
  return out;
}

std::vector<std::uint8_t> clear_mask_from_flags(const AttenuationSeries& series) {
  std::vector<std::uint8_t> mask(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) mask[i] = series.storm_flags[i] ? 0 : 1;
  return mask;
}

Baseline estimate_baseline(const AttenuationSeries& series, std::span<const std::uint8_t> clear_mask) {
  if (clear_mask.size() != series.size()) {
    throw InsufficientDataError("clear mask length does not match series");
  }
  std::array<std::vector<double>, kHoursPerSol> bins;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (clear_mask[i]) {
      bins[static_cast<std::size_t>(hour_of_sol(series.times[i]))].push_back(series.values[i]);
    }
  }
  Baseline baseline;
  for (std::size_t h = 0; h < bins.size(); ++h) {
    auto& bin = bins[h];
    if (bin.empty()) {
      throw InsufficientDataError("no clear sample for hour " + std::to_string(h) + " of link " +
                                  std::to_string(series.link_id));
    }
    std::sort(bin.begin(), bin.end());
    const std::size_t mid = bin.size() / 2;
    baseline.per_hour[h] = bin.size() % 2 ? bin[mid] : 0.5 * (bin[mid - 1] + bin[mid]);
  }
  return baseline;
}

Isolated isolate_dust_attenuation(double measured, double baseline_at_hour, double k) {
  const double residual = measured - baseline_at_hour - spectra::absorption_db_per_km(k);
  if (residual < 0.0) return {0.0, true};
  return {residual, false};
}

IsolatedSeries isolate_series(const AttenuationSeries& series, const Baseline& baseline, double k) {
  IsolatedSeries out;
  out.a_dust.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    auto iso = isolate_dust_attenuation(series.values[i], baseline.at(series.times[i]), k);
    out.a_dust.push_back(iso.a_dust);
    out.clamp_count += iso.clamped ? 1 : 0;
  }
  return out;
}

AttenuationSeries remove_absorption(const AttenuationSeries& series, double k) {
  AttenuationSeries out = series;
  const double molecular = spectra::absorption_db_per_km(k);
  for (auto& v : out.values) v -= molecular;
  return out;
}

std::vector<double> signal_level_change(const AttenuationSeries& series, const Baseline& baseline) {
  std::vector<double> delta(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    delta[i] = -(series.values[i] - baseline.at(series.times[i]));
  }
  return delta;
}

}  // namespace mdsd::channel
