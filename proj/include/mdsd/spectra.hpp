// SPDX-License-Identifier: Apache-2.0
//
// Line-by-line molecular absorption for a thin CO2 atmosphere: catalog
// ingestion, temperature-scaled line intensities, Doppler (Gaussian) line
// shapes and the Beer-Lambert path loss.
//
// Units: all frequencies in Hz, intensities in SI (Hz m^2 per molecule).
// HITRAN intensities (cm^-1 / (molecule cm^-2)) are converted once while
// parsing. Catalog intensities are taken to be abundance weighted, so the
// mixing ratio of the parent gas is the only composition factor applied.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mdsd/constants.hpp"

namespace mdsd::spectra {

struct SpectralLine {
  int molecule_id = 0;
  int isotopologue_id = 0;
  double center_frequency = 0.0;     // Hz
  double reference_intensity = 0.0;  // Hz m^2 / molecule at 296 K
  double lower_state_energy = 0.0;   // cm^-1
  double molar_mass = 0.0;           // kg/mol

  /// Line position in cm^-1.
  double wavenumber() const;
  void validate() const;
};

struct GasComponent {
  int molecule_id = 0;
  /// 0 selects every isotopologue of the gas.
  int isotopologue_id = 0;
  double mixing_ratio = 0.0;
  /// Informational only; catalog intensities already carry abundance.
  double isotopic_abundance = 1.0;
};

struct AtmosphereState {
  double temperature = 210.0;  // K
  double pressure = 610.0;     // Pa
  std::vector<GasComponent> composition;

  static constexpr double kMinTemperature = 150.0;
  static constexpr double kMaxTemperature = 320.0;

  /// Throws DomainError when T leaves [150, 320] K, p <= 0 or the mixing
  /// ratios sum above one.
  void validate() const;
  const GasComponent* find(int molecule_id, int isotopologue_id) const;
};

/// CO2 95.32 %, N2 2.7 % (Ar is radiatively inert in this band and omitted).
AtmosphereState mars_atmosphere(double temperature = 210.0, double pressure = 610.0);

/// Q(T0)/Q(T), from per-isotopologue tables when present and a power law
/// (T0/T)^beta otherwise.
class PartitionModel {
 public:
  using Key = std::pair<int, int>;  // (molecule, isotopologue)
  using Table = std::vector<std::pair<double, double>>;  // (T, Q), T increasing

  PartitionModel() = default;

  /// Forces a single exponent for every species without a table.
  static PartitionModel power_law(double beta);

  void set_table(Key key, Table table);
  bool has_table(Key key) const { return tables_.contains(key); }

  /// Exponent used for the fallback: 1 for linear molecules, 1.5 otherwise,
  /// unless overridden with power_law().
  double exponent_for(int molecule_id) const;
  double ratio(int molecule_id, int isotopologue_id, double temperature) const;

 private:
  std::map<Key, Table> tables_;
  std::optional<double> beta_override_;
};

/// Reads "molecule:isotopologue T Q" lines; '#' starts a comment.
PartitionModel parse_partition_table(std::string_view text);

/// Molar mass in kg/mol for a HITRAN (molecule, isotopologue) pair; falls
/// back to the principal isotopologue, throws LookupError for unknown gases.
double molar_mass(int molecule_id, int isotopologue_id);

/// Parses 160-column HITRAN 2004 records. Lines outside the frequency
/// window or with a molecule id not in gas_filter are dropped; an empty
/// filter keeps every gas.
std::vector<SpectralLine> parse_line_catalog(std::string_view raw_text,
                                             const std::set<int>& gas_filter,
                                             std::pair<double, double> freq_window);

double line_intensity_at(const SpectralLine& line, double temperature,
                         const PartitionModel& partition);

/// Half width at half maximum of the Doppler profile, Hz.
double doppler_halfwidth(const SpectralLine& line, double temperature);

/// Normalized Gaussian profile, 1/Hz.
double gaussian_line_shape(double f, double line_center, double halfwidth);

/// Cross section in m^2 (intensity in Hz m^2 times profile in 1/Hz).
double absorption_cross_section(const SpectralLine& line, double temperature, double f,
                                const PartitionModel& partition);

/// Number density of a species from the ideal gas law, 1/m^3.
double molecular_volume_density(const AtmosphereState& atm, int molecule_id,
                                int isotopologue_id);

struct AbsorptionOptions {
  /// Lines contribute only within this many Doppler half widths.
  double wing_cutoff = 20.0;
};

/// Absorption coefficient k(f) in 1/m. Lines of species absent from the
/// composition contribute nothing.
double absorption_coefficient(const AtmosphereState& atm, std::span<const SpectralLine> catalog,
                              double f, const PartitionModel& partition,
                              const AbsorptionOptions& options = {});

/// k(f) over a frequency grid; threads = 0 picks hardware concurrency.
std::vector<double> absorption_spectrum(const AtmosphereState& atm,
                                        std::span<const SpectralLine> catalog,
                                        std::span<const double> frequencies,
                                        const PartitionModel& partition,
                                        const AbsorptionOptions& options = {},
                                        unsigned threads = 1);

struct BeerLambertLoss {
  double loss_factor = 1.0;  // e^{k d}
  double loss_db = 0.0;
};

/// k in 1/m, d in m.
BeerLambertLoss beer_lambert_loss(double k, double distance);

/// Molecular absorption expressed per kilometre, dB/km.
inline double absorption_db_per_km(double k) { return k * constants::kAbsorptionToDbPerKm; }

}  // namespace mdsd::spectra
