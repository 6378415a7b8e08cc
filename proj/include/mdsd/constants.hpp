// SPDX-License-Identifier: Apache-2.0
//
// Physical constants (CODATA 2018 exact/recommended values) and reference
// conditions used by the spectroscopy and dust models.

#pragma once

#include <numbers>

namespace mdsd::constants {

inline constexpr double kSpeedOfLight = 299792458.0;       // m/s
inline constexpr double kPlanck = 6.62607015e-34;          // J s
inline constexpr double kBoltzmann = 1.380649e-23;         // J/K
inline constexpr double kAvogadro = 6.02214076e23;         // 1/mol
inline constexpr double kGasConstant = kAvogadro * kBoltzmann;  // J/(mol K)

/// Second radiation constant hc/k in cm K (wavenumber form).
inline constexpr double kRadiationC2 = 100.0 * kPlanck * kSpeedOfLight / kBoltzmann;

/// HITRAN reference temperature for line intensities.
inline constexpr double kReferenceTemperature = 296.0;     // K
inline constexpr double kStandardPressure = 101325.0;      // Pa
inline constexpr double kStandardTemperature = 273.15;     // K

inline constexpr double kLog10e = std::numbers::log10e;
inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kPi = std::numbers::pi;

/// 10 log10(e^{k * 1000 m}) / k: absorption coefficient in 1/m to dB/km.
inline constexpr double kAbsorptionToDbPerKm = 1.0e4 * kLog10e;

}  // namespace mdsd::constants
