// SPDX-License-Identifier: Apache-2.0

#include "mdsd/spectra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "mdsd/error.hpp"
#include "mdsd/parallel.hpp"

namespace mdsd::spectra {

namespace c = constants;

namespace {

constexpr std::size_t kRecordWidth = 160;

// HITRAN intensity cm^-1/(molecule cm^-2) -> Hz m^2/molecule:
// x (100 c) for the wavenumber integral, x 1e-4 for cm^2 -> m^2.
constexpr double kIntensityToSi = 100.0 * c::kSpeedOfLight * 1.0e-4;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view field, std::size_t record, const char* name) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw ParseError(record, std::string("non-numeric ") + name + " field '" +
                                 std::string(field) + "'");
  }
  return value;
}

int parse_int(std::string_view field, std::size_t record, const char* name) {
  field = trim(field);
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(record, std::string("non-numeric ") + name + " field '" +
                                 std::string(field) + "'");
  }
  return value;
}

// Isotopologue column is one character: 1-9, 0 for the tenth, then A, B, ...
int parse_isotopologue(char ch, std::size_t record) {
  if (ch >= '1' && ch <= '9') return ch - '0';
  if (ch == '0') return 10;
  if (ch >= 'A' && ch <= 'Z') return 11 + (ch - 'A');
  throw ParseError(record, std::string("bad isotopologue id '") + ch + "'");
}

bool is_linear_molecule(int molecule_id) {
  // CO2, N2O, CO, O2, NO, HCl, HF, HBr, HI, OCS, N2, HCN, C2H2, HC3N, CS.
  switch (molecule_id) {
    case 2: case 4: case 5: case 7: case 8: case 15: case 14: case 16: case 17:
    case 19: case 22: case 23: case 26: case 44: case 46:
      return true;
    default:
      return false;
  }
}

double interpolate_table(const PartitionModel::Table& table, double t) {
  if (t < table.front().first || t > table.back().first) {
    throw DomainError("temperature " + std::to_string(t) + " K outside partition table range");
  }
  auto it = std::lower_bound(table.begin(), table.end(), t,
                             [](const auto& row, double v) { return row.first < v; });
  if (it->first == t) return it->second;
  auto lo = std::prev(it);
  double w = (t - lo->first) / (it->first - lo->first);
  return lo->second + w * (it->second - lo->second);
}

}  // namespace

double SpectralLine::wavenumber() const {
  return center_frequency / (100.0 * c::kSpeedOfLight);
}

void SpectralLine::validate() const {
  if (!(center_frequency > 0.0)) throw DomainError("line center frequency must be > 0");
  if (!(reference_intensity >= 0.0)) throw DomainError("line intensity must be >= 0");
  if (!(lower_state_energy >= 0.0)) throw DomainError("lower state energy must be >= 0");
  if (!(molar_mass > 0.0)) throw DomainError("molar mass must be > 0");
}

void AtmosphereState::validate() const {
  if (!(temperature >= kMinTemperature && temperature <= kMaxTemperature)) {
    throw DomainError("temperature " + std::to_string(temperature) +
                      " K outside validity window [150, 320] K");
  }
  if (!(pressure > 0.0)) throw DomainError("pressure must be > 0");
  double total = 0.0;
  for (const auto& gas : composition) {
    if (!(gas.mixing_ratio >= 0.0)) throw DomainError("mixing ratio must be >= 0");
    total += gas.mixing_ratio;
  }
  if (total > 1.0 + 1e-6) throw DomainError("mixing ratios sum above 1");
}

const GasComponent* AtmosphereState::find(int molecule_id, int isotopologue_id) const {
  const GasComponent* wildcard = nullptr;
  for (const auto& gas : composition) {
    if (gas.molecule_id != molecule_id) continue;
    if (gas.isotopologue_id == isotopologue_id) return &gas;
    if (gas.isotopologue_id == 0 && wildcard == nullptr) wildcard = &gas;
  }
  return wildcard;
}

AtmosphereState mars_atmosphere(double temperature, double pressure) {
  AtmosphereState atm;
  atm.temperature = temperature;
  atm.pressure = pressure;
  atm.composition = {{2, 0, 0.9532, 1.0}, {22, 0, 0.027, 1.0}};
  return atm;
}

PartitionModel PartitionModel::power_law(double beta) {
  if (!(beta > 0.0)) throw DomainError("partition exponent must be > 0");
  PartitionModel model;
  model.beta_override_ = beta;
  return model;
}

void PartitionModel::set_table(Key key, Table table) {
  if (table.size() < 2) throw DomainError("partition table needs at least two rows");
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].first > table[i - 1].first)) {
      throw DomainError("partition table temperatures must be strictly increasing");
    }
  }
  for (const auto& [t, q] : table) {
    if (!(q > 0.0)) throw DomainError("partition function values must be > 0");
  }
  tables_[key] = std::move(table);
}

double PartitionModel::exponent_for(int molecule_id) const {
  if (beta_override_) return *beta_override_;
  return is_linear_molecule(molecule_id) ? 1.0 : 1.5;
}

double PartitionModel::ratio(int molecule_id, int isotopologue_id, double temperature) const {
  if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
  if (auto it = tables_.find({molecule_id, isotopologue_id}); it != tables_.end()) {
    return interpolate_table(it->second, c::kReferenceTemperature) /
           interpolate_table(it->second, temperature);
  }
  return std::pow(c::kReferenceTemperature / temperature, exponent_for(molecule_id));
}

PartitionModel parse_partition_table(std::string_view text) {
  std::map<PartitionModel::Key, PartitionModel::Table> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    std::istringstream fields(line);
    std::string key;
    double t = 0.0;
    double q = 0.0;
    if (!(fields >> key >> t >> q)) {
      throw IngestError(number, "expected 'molecule:isotopologue T Q'");
    }
    auto colon = key.find(':');
    if (colon == std::string::npos) throw IngestError(number, "bad isotopologue key '" + key + "'");
    int mol = 0;
    int iso = 0;
    try {
      mol = std::stoi(key.substr(0, colon));
      iso = std::stoi(key.substr(colon + 1));
    } catch (const std::exception&) {
      throw IngestError(number, "bad isotopologue key '" + key + "'");
    }
    rows[{mol, iso}].emplace_back(t, q);
  }
  PartitionModel model;
  for (auto& [key, table] : rows) model.set_table(key, std::move(table));
  return model;
}

double molar_mass(int molecule_id, int isotopologue_id) {
  struct Entry {
    int mol;
    int iso;
    double grams;
  };
  static constexpr Entry kMasses[] = {
      {1, 1, 18.010565}, {1, 2, 20.014811}, {1, 3, 19.01478},  {1, 4, 19.01674},
      {2, 1, 43.98983},  {2, 2, 44.993185}, {2, 3, 45.994076}, {2, 4, 44.994045},
      {2, 5, 46.997431}, {2, 6, 45.9974},   {2, 7, 47.998322}, {2, 8, 46.998291},
      {3, 1, 47.984745}, {4, 1, 44.001062}, {5, 1, 27.994915}, {5, 2, 28.99827},
      {5, 3, 29.999161}, {6, 1, 16.0313},   {7, 1, 31.98983},  {7, 2, 33.994076},
      {22, 1, 28.006148}, {22, 2, 29.003182},
  };
  const Entry* principal = nullptr;
  for (const auto& e : kMasses) {
    if (e.mol != molecule_id) continue;
    if (e.iso == isotopologue_id) return e.grams * 1e-3;
    if (e.iso == 1) principal = &e;
  }
  if (principal) return principal->grams * 1e-3;
  throw LookupError("no molar mass for molecule " + std::to_string(molecule_id));
}

std::vector<SpectralLine> parse_line_catalog(std::string_view raw_text,
                                             const std::set<int>& gas_filter,
                                             std::pair<double, double> freq_window) {
  if (!(freq_window.first < freq_window.second)) {
    throw DomainError("frequency window lower bound must be below upper bound");
  }
  std::vector<SpectralLine> lines;
  std::size_t record = 0;
  while (!raw_text.empty()) {
    auto eol = raw_text.find('\n');
    std::string_view rec = raw_text.substr(0, eol);
    raw_text.remove_prefix(eol == std::string_view::npos ? raw_text.size() : eol + 1);
    if (!rec.empty() && rec.back() == '\r') rec.remove_suffix(1);
    if (rec.empty()) continue;
    if (rec.size() != kRecordWidth) {
      throw ParseError(record, "expected " + std::to_string(kRecordWidth) + " columns, got " +
                                   std::to_string(rec.size()));
    }
    const int mol = parse_int(rec.substr(0, 2), record, "molecule");
    const int iso = parse_isotopologue(rec[2], record);
    const double nu = parse_double(rec.substr(3, 12), record, "wavenumber");
    const double s = parse_double(rec.substr(15, 10), record, "intensity");
    const double el = parse_double(rec.substr(45, 10), record, "lower-state energy");
    const std::size_t index = record++;

    if (!gas_filter.empty() && !gas_filter.contains(mol)) continue;
    const double f = 100.0 * c::kSpeedOfLight * nu;
    if (f < freq_window.first || f > freq_window.second) continue;

    SpectralLine line;
    line.molecule_id = mol;
    line.isotopologue_id = iso;
    line.center_frequency = f;
    line.reference_intensity = s * kIntensityToSi;
    line.lower_state_energy = el;
    try {
      line.molar_mass = molar_mass(mol, iso);
    } catch (const LookupError& e) {
      throw ParseError(index, e.what());
    }
    try {
      line.validate();
    } catch (const DomainError& e) {
      throw ParseError(index, e.what());
    }
    lines.push_back(line);
  }
  return lines;
}

double line_intensity_at(const SpectralLine& line, double temperature,
                         const PartitionModel& partition) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
  const double t0 = c::kReferenceTemperature;
  const double nu = line.wavenumber();
  const double q_ratio = partition.ratio(line.molecule_id, line.isotopologue_id, temperature);
  const double boltzmann =
      std::exp(-c::kRadiationC2 * line.lower_state_energy * (1.0 / temperature - 1.0 / t0));
  const double stimulated = -std::expm1(-c::kRadiationC2 * nu / temperature) /
                            -std::expm1(-c::kRadiationC2 * nu / t0);
  return line.reference_intensity * q_ratio * boltzmann * stimulated;
}

double doppler_halfwidth(const SpectralLine& line, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
  if (!(line.molar_mass > 0.0)) throw DomainError("molar mass must be > 0");
  return line.center_frequency / c::kSpeedOfLight *
         std::sqrt(2.0 * c::kAvogadro * c::kBoltzmann * temperature * c::kLn2 / line.molar_mass);
}

double gaussian_line_shape(double f, double line_center, double halfwidth) {
  if (!(halfwidth > 0.0)) throw DomainError("Doppler half width must be > 0");
  const double x = (f - line_center) / halfwidth;
  return std::sqrt(c::kLn2 / c::kPi) / halfwidth * std::exp(-x * x * c::kLn2);
}

double absorption_cross_section(const SpectralLine& line, double temperature, double f,
                                const PartitionModel& partition) {
  return line_intensity_at(line, temperature, partition) *
         gaussian_line_shape(f, line.center_frequency, doppler_halfwidth(line, temperature));
}

double molecular_volume_density(const AtmosphereState& atm, int molecule_id,
                                int isotopologue_id) {
  atm.validate();
  const GasComponent* gas = atm.find(molecule_id, isotopologue_id);
  if (gas == nullptr) {
    throw LookupError("species " + std::to_string(molecule_id) + ":" +
                      std::to_string(isotopologue_id) + " not in composition");
  }
  return atm.pressure / (c::kGasConstant * atm.temperature) * gas->mixing_ratio * c::kAvogadro;
}

double absorption_coefficient(const AtmosphereState& atm, std::span<const SpectralLine> catalog,
                              double f, const PartitionModel& partition,
                              const AbsorptionOptions& options) {
  if (!(f > 0.0)) throw DomainError("frequency must be > 0");
  atm.validate();
  const double scale = atm.pressure / c::kStandardPressure * c::kStandardTemperature /
                       atm.temperature;
  const double density_per_ratio =
      atm.pressure / (c::kGasConstant * atm.temperature) * c::kAvogadro;
  double k = 0.0;
  for (const auto& line : catalog) {
    const GasComponent* gas = atm.find(line.molecule_id, line.isotopologue_id);
    if (gas == nullptr || gas->mixing_ratio == 0.0) continue;
    const double a_d = doppler_halfwidth(line, atm.temperature);
    if (std::abs(f - line.center_frequency) > options.wing_cutoff * a_d) continue;
    const double sigma = line_intensity_at(line, atm.temperature, partition) *
                         gaussian_line_shape(f, line.center_frequency, a_d);
    k += scale * density_per_ratio * gas->mixing_ratio * sigma;
  }
  return k;
}

std::vector<double> absorption_spectrum(const AtmosphereState& atm,
                                        std::span<const SpectralLine> catalog,
                                        std::span<const double> frequencies,
                                        const PartitionModel& partition,
                                        const AbsorptionOptions& options, unsigned threads) {
  std::vector<double> k(frequencies.size());
  parallel_for(frequencies.size(), threads, [&](std::size_t i) {
    k[i] = absorption_coefficient(atm, catalog, frequencies[i], partition, options);
  });
  return k;
}

BeerLambertLoss beer_lambert_loss(double k, double distance) {
  if (!(k >= 0.0)) throw DomainError("absorption coefficient must be >= 0");
  if (!(distance >= 0.0)) throw DomainError("distance must be >= 0");
  const double optical_depth = k * distance;
  return {std::exp(optical_depth), 10.0 * c::kLog10e * optical_depth};
}

}  // namespace mdsd::spectra
