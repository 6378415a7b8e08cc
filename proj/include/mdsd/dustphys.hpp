// SPDX-License-Identifier: Apache-2.0
//
// Closed-form Rayleigh-regime dust attenuation and its inversions to
// particle concentration and optical visibility.

#pragma once

namespace mdsd::dust {

/// Particle properties without a concentration.
struct DustParticles {
  double mean_radius = 4.0e-6;  // m
  double eps_real = 1.55;
  double eps_imag = 6.3;

  void validate() const;
};

struct DustMedium {
  DustParticles particles;
  double concentration = 0.0;  // 1/m^3

  void validate() const;
};

struct CdodConversion {
  double extinction_factor = 1.3;
  double q_ext = 3.57;
  double radius = 4.0e-6;        // m
  double scale_height = 1.11e4;  // m

  void validate() const;
};

/// Free-space wavelength c/f, m.
double wavelength(double f);

/// dB/km per particle per m^3 at frequency f; dust_attenuation = slope * N.
double attenuation_per_particle(const DustParticles& particles, double f);

/// Dust attenuation in dB/km.
double dust_attenuation(const DustMedium& dust, double f);

/// Concentration (1/m^3) that produces the given dust attenuation (dB/km).
double concentration_from_attenuation(double a_dust, const DustParticles& particles, double f);

/// Visibility in km from isolated dust attenuation. Throws
/// UndefinedVisibilityError when a_dust is zero.
double visibility_from_attenuation(double a_dust, const DustParticles& particles, double f);

/// Batch variant: zero attenuation maps to +infinity ("clear").
double visibility_or_clear(double a_dust, const DustParticles& particles, double f);

/// N = 5.5e-4 / (r^2 V), V in km.
double concentration_from_visibility(double visibility, double radius);

double concentration_from_cdod(double cdod, const CdodConversion& conv = {});

}  // namespace mdsd::dust
