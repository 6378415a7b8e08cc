// SPDX-License-Identifier: Apache-2.0

#include "mdsd/synthetic_field.hpp"

#include <cmath>
#include <random>
#include <string>

#include "mdsd/constants.hpp"
#include "mdsd/error.hpp"
#include "mdsd/random.hpp"

namespace mdsd::field {

std::string_view to_string(Season s) { return s == Season::storm ? "storm" : "calm"; }

Season season_from_string(std::string_view name) {
  if (name == "storm") return Season::storm;
  if (name == "calm") return Season::calm;
  throw ConfigError("unknown season '" + std::string(name) + "'");
}

double Blob::value_at(Point2 p, double t) const {
  const Point2 d = p - (center + t * velocity);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double u = (c * d.x + s * d.y) / sigma_major;
  const double v = (-s * d.x + c * d.y) / sigma_minor;
  return peak * std::exp(-0.5 * (u * u + v * v));
}

double Blob::mass() const { return 2.0 * constants::kPi * peak * sigma_major * sigma_minor; }

SyntheticField::SyntheticField(Season season, const Extent& area, std::uint64_t seed)
    : season_(season) {
  if (!(area.width() > 0.0) || !(area.height() > 0.0)) throw DomainError("area must be positive");
  Rng rng(derive_seed(seed, {0x6669656c64ULL, static_cast<std::uint64_t>(season)}));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
  const double scale = std::sqrt(area.area());

  if (season == Season::storm) {
    const int count = 2 + static_cast<int>(std::floor(uniform(0.0, 4.0)));
    for (int i = 0; i < count; ++i) {
      Blob b;
      b.center = {uniform(area.xmin + 0.15 * area.width(), area.xmax - 0.15 * area.width()),
                  uniform(area.ymin + 0.15 * area.height(), area.ymax - 0.15 * area.height())};
      const double heading = uniform(0.0, 2.0 * constants::kPi);
      const double speed = uniform(0.0005, 0.002) * scale;  // per hour
      b.velocity = {speed * std::cos(heading), speed * std::sin(heading)};
      b.sigma_major = uniform(0.12, 0.25) * scale;
      b.sigma_minor = b.sigma_major * uniform(0.35, 0.8);
      b.angle = uniform(0.0, constants::kPi);
      b.peak = uniform(0.8, 2.5);
      blobs_.push_back(b);
    }
  } else {
    background_ = uniform(0.05, 0.2);
    for (int i = 0; i < 3; ++i) {
      Mode m;
      const double wavelength = uniform(0.5, 1.5) * scale;
      const double dir = uniform(0.0, 2.0 * constants::kPi);
      m.kx = 2.0 * constants::kPi / wavelength * std::cos(dir);
      m.ky = 2.0 * constants::kPi / wavelength * std::sin(dir);
      m.omega = 2.0 * constants::kPi / uniform(48.0, 240.0);
      m.phase = uniform(0.0, 2.0 * constants::kPi);
      m.amplitude = uniform(0.03, 0.08);
      modes_.push_back(m);
    }
  }
}

double SyntheticField::value_at(Point2 p, double t) const {
  double v = 0.0;
  for (const auto& b : blobs_) v += b.value_at(p, t);
  if (season_ == Season::calm) {
    double mod = 1.0;
    for (const auto& m : modes_) mod += m.amplitude * std::sin(m.kx * p.x + m.ky * p.y + m.omega * t + m.phase);
    v += background_ * mod;
  }
  return v;
}

IntensityGrid SyntheticField::frame(const GridSpec& grid, double t) const {
  IntensityGrid out(grid, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) out.set(i, value_at(grid.cell_center(i), t));
  return out;
}

}  // namespace mdsd::field
