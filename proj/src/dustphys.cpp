// SPDX-License-Identifier: Apache-2.0

#include "mdsd/dustphys.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mdsd/constants.hpp"
#include "mdsd/error.hpp"

namespace mdsd::dust {

namespace {

constexpr double kAttenuationConstant = 1.029e6;
constexpr double kVisibilityConstant = 566.0;
constexpr double kConcentrationVisibilityConstant = 5.5e-4;

double dielectric_factor(const DustParticles& p) {
  const double a = p.eps_real + 2.0;
  return p.eps_imag / (a * a + p.eps_imag * p.eps_imag);
}

}  // namespace

void DustParticles::validate() const {
  if (!(mean_radius > 0.0)) throw DomainError("dust radius must be > 0");
  if (!(eps_imag > 0.0)) throw DomainError("imaginary permittivity must be > 0");
  if (!std::isfinite(eps_real)) throw DomainError("real permittivity must be finite");
}

void DustMedium::validate() const {
  particles.validate();
  if (!(concentration >= 0.0)) throw DomainError("dust concentration must be >= 0");
}

void CdodConversion::validate() const {
  if (!(extinction_factor > 0.0 && q_ext > 0.0 && radius > 0.0 && scale_height > 0.0)) {
    throw DomainError("CDOD conversion parameters must all be > 0");
  }
}

double wavelength(double f) {
  if (!(f > 0.0)) throw DomainError("frequency must be > 0");
  return constants::kSpeedOfLight / f;
}

double attenuation_per_particle(const DustParticles& particles, double f) {
  particles.validate();
  const double r = particles.mean_radius;
  return kAttenuationConstant * dielectric_factor(particles) / wavelength(f) * r * r * r;
}

double dust_attenuation(const DustMedium& dust, double f) {
  dust.validate();
  return attenuation_per_particle(dust.particles, f) * dust.concentration;
}

double concentration_from_attenuation(double a_dust, const DustParticles& particles, double f) {
  if (!(a_dust >= 0.0)) throw DomainError("dust attenuation must be >= 0");
  return a_dust / attenuation_per_particle(particles, f);
}

double visibility_from_attenuation(double a_dust, const DustParticles& particles, double f) {
  particles.validate();
  if (a_dust == 0.0) throw UndefinedVisibilityError("visibility undefined for zero attenuation");
  if (!(a_dust > 0.0)) throw DomainError("dust attenuation must be > 0");
  return kVisibilityConstant * particles.mean_radius * dielectric_factor(particles) /
         (a_dust * wavelength(f));
}

double visibility_or_clear(double a_dust, const DustParticles& particles, double f) {
  if (a_dust == 0.0) return std::numeric_limits<double>::infinity();
  return visibility_from_attenuation(a_dust, particles, f);
}

double concentration_from_visibility(double visibility, double radius) {
  if (!(visibility > 0.0)) throw DomainError("visibility must be > 0");
  if (!(radius > 0.0)) throw DomainError("radius must be > 0");
  return kConcentrationVisibilityConstant / (radius * radius * visibility);
}

double concentration_from_cdod(double cdod, const CdodConversion& conv) {
  conv.validate();
  if (!(cdod >= 0.0)) throw DomainError("CDOD must be >= 0, got " + std::to_string(cdod));
  return cdod * conv.extinction_factor /
         (conv.q_ext * constants::kPi * conv.radius * conv.radius * conv.scale_height);
}

}  // namespace mdsd::dust
