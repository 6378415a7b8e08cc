// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mdsd/error.hpp"
#include "mdsd/spectra.hpp"

using namespace mdsd;
using namespace mdsd::spectra;

namespace {

std::string fixture() {
  std::ifstream in(std::string(MDSD_TEST_DATA) + "/co2_1thz.par");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr std::pair<double, double> kAll{0.0, std::numeric_limits<double>::infinity()};

SpectralLine co2_line(double f = 1e12) {
  SpectralLine l;
  l.molecule_id = 2;
  l.isotopologue_id = 1;
  l.center_frequency = f;
  l.reference_intensity = 1e-23 * 100.0 * 299792458.0 * 1e-4;
  l.lower_state_energy = 100.0;
  l.molar_mass = 43.98983e-3;
  return l;
}

}  // namespace

TEST(Spectra, ParsesFixtureRecords) {
  const auto lines = parse_line_catalog(fixture(), {}, kAll);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0].molecule_id, 2);
  EXPECT_EQ(lines[2].isotopologue_id, 2);
  EXPECT_EQ(lines[4].molecule_id, 22);
  EXPECT_NEAR(lines[0].center_frequency, 100.0 * 299792458.0 * 33.356410, 1e-3);
  EXPECT_DOUBLE_EQ(lines[0].reference_intensity, 1.25e-23 * 2.99792458e10 * 1e-4);
  EXPECT_DOUBLE_EQ(lines[1].lower_state_energy, 256.011);
  EXPECT_NEAR(lines[0].wavenumber(), 33.356410, 1e-9);
}

TEST(Spectra, GasFilterAndWindow) {
  EXPECT_EQ(parse_line_catalog(fixture(), {22}, kAll).size(), 1u);
  const double lo = 100.0 * 299792458.0 * 33.36;
  EXPECT_EQ(parse_line_catalog(fixture(), {}, {lo, 1e13}).size(), 1u);
  EXPECT_THROW(parse_line_catalog(fixture(), {}, {2.0, 1.0}), DomainError);
}

TEST(Spectra, MalformedRecordReportsIndex) {
  std::string text = fixture();
  const auto second = text.find('\n') + 1;
  text.insert(second + 10, "x");  // record 1 now has 161 columns
  try {
    parse_line_catalog(text, {}, kAll);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.record(), 1u);
  }
  std::string bad = fixture();
  bad[3 + 4] = 'Q';  // wavenumber field of record 0
  try {
    parse_line_catalog(bad, {}, kAll);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.record(), 0u);
  }
}

TEST(Spectra, EmptyLinesAreSkipped) {
  EXPECT_EQ(parse_line_catalog("\n\n" + fixture() + "\n", {}, kAll).size(), 5u);
}

TEST(Spectra, IntensityIdentityAtReferenceTemperature) {
  PartitionModel partition;
  for (double el : {0.0, 50.0, 500.0, 2000.0}) {
    auto l = co2_line(0.7e12);
    l.lower_state_energy = el;
    EXPECT_NEAR(line_intensity_at(l, 296.0, partition) / l.reference_intensity, 1.0, 1e-14);
  }
  partition.set_table({2, 1}, {{150.0, 120.0}, {296.0, 286.0}, {400.0, 400.0}});
  EXPECT_NEAR(line_intensity_at(co2_line(), 296.0, partition) / co2_line().reference_intensity, 1.0,
              1e-14);
}

TEST(Spectra, IntensityTemperatureScalingMatchesHandEvaluation) {
  const auto l = co2_line();
  const double c2 = 1.4387768775039337;  // cm K
  const double nu = 1e12 / 2.99792458e10;
  const double t = 210.0;
  const double expected = std::pow(296.0 / t, 1.0) * std::exp(-c2 * 100.0 * (1.0 / t - 1.0 / 296.0)) *
                          (1.0 - std::exp(-c2 * nu / t)) / (1.0 - std::exp(-c2 * nu / 296.0));
  EXPECT_NEAR(line_intensity_at(l, t, PartitionModel{}) / l.reference_intensity, expected, 1e-12);
  // Frozen value of the same expression.
  EXPECT_NEAR(expected, 1.576687, 1e-6);
}

TEST(Spectra, PartitionTableInterpolatesLinearly) {
  auto pm = parse_partition_table("# mol:iso T Q\n2:1 200 200\n2:1 296 296\n2:1 300 300\n");
  ASSERT_TRUE(pm.has_table({2, 1}));
  // Q(296) = 296, Q(250) = 250.
  EXPECT_NEAR(pm.ratio(2, 1, 250.0), 296.0 / 250.0, 1e-12);
  EXPECT_NEAR(pm.ratio(1, 1, 148.0), 2.0 * std::sqrt(2.0), 1e-12);  // nonlinear fallback
  EXPECT_NEAR(pm.ratio(7, 1, 148.0), 2.0, 1e-12);                    // linear fallback
  EXPECT_DOUBLE_EQ(PartitionModel::power_law(2.0).ratio(2, 1, 148.0), 4.0);
}

TEST(Spectra, DopplerHalfWidthCo2At1THz) {
  const double ad = doppler_halfwidth(co2_line(), 210.0);
  const double hand = 1e12 / 299792458.0 * std::sqrt(2.0 * 8.314462618 * 210.0 * std::log(2.0) / 43.98983e-3);
  EXPECT_NEAR(ad, hand, 1e-6 * hand);
  EXPECT_NEAR(ad, 7.823e5, 0.001 * 7.82e5);
}

TEST(Spectra, LineShapeNormalizedAndPeaked) {
  const double ad = doppler_halfwidth(co2_line(), 210.0);
  // Simpson over +-20 half widths.
  const int n = 20000;
  const double a = 1e12 - 20 * ad, b = 1e12 + 20 * ad, h = (b - a) / n;
  double s = gaussian_line_shape(a, 1e12, ad) + gaussian_line_shape(b, 1e12, ad);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * gaussian_line_shape(a + i * h, 1e12, ad);
  EXPECT_NEAR(s * h / 3.0, 1.0, 1e-6);
  EXPECT_NEAR(gaussian_line_shape(1e12, 1e12, ad) * ad, std::sqrt(std::log(2.0) / M_PI), 1e-12);
  EXPECT_NEAR(gaussian_line_shape(1e12 + ad, 1e12, ad) / gaussian_line_shape(1e12, 1e12, ad), 0.5, 1e-9);
  EXPECT_THROW(gaussian_line_shape(1e12, 1e12, 0.0), DomainError);
}

// Term-by-term k(f) from the raw record fields with constants typed in here.
TEST(Spectra, AbsorptionCoefficientMatchesRecordOracle) {
  const auto catalog = parse_line_catalog(fixture(), {}, kAll);
  const AtmosphereState atm = mars_atmosphere(210.0, 610.0);
  struct Raw {
    int mol;
    double nu, s, el, mass_g, ratio;
  };
  const Raw raw[] = {{2, 33.356410, 1.250e-23, 118.4520, 43.98983, 0.9532},
                     {2, 33.356952, 4.310e-24, 256.0110, 43.98983, 0.9532},
                     {2, 33.355870, 2.700e-25, 95.7700, 44.993185, 0.9532},
                     {2, 33.370210, 8.880e-24, 180.2500, 43.98983, 0.9532},
                     {22, 33.356600, 3.100e-28, 45.1200, 28.006148, 0.027}};
  const double c = 299792458.0, kb = 1.380649e-23, na = 6.02214076e23, h = 6.62607015e-34;
  const double c2 = 100.0 * h * c / kb;
  auto oracle = [&](double f) {
    const double t = 210.0, p = 610.0;
    double k = 0.0;
    for (const auto& r : raw) {
      const double f0 = 100.0 * c * r.nu;
      const double ad = f0 / c * std::sqrt(2.0 * na * kb * t * std::log(2.0) / (r.mass_g * 1e-3));
      if (std::abs(f - f0) > 20.0 * ad) continue;
      const double beta = 1.0;  // both gases are linear molecules
      const double s_t = r.s * 100.0 * c * 1e-4 * std::pow(296.0 / t, beta) *
                         std::exp(-c2 * r.el * (1.0 / t - 1.0 / 296.0)) *
                         (1.0 - std::exp(-c2 * r.nu / t)) / (1.0 - std::exp(-c2 * r.nu / 296.0));
      const double x = (f - f0) / ad;
      const double shape = std::sqrt(std::log(2.0) / M_PI) / ad * std::exp(-std::log(2.0) * x * x);
      const double q = p / (kb * t) * r.ratio;
      k += p / 101325.0 * 273.15 / t * q * s_t * shape;
    }
    return k;
  };
  int nonzero = 0;
  for (double nu = 33.3555; nu <= 33.3575; nu += 0.00001) {
    const double f = 100.0 * c * nu;
    const double expected = oracle(f);
    const double got = absorption_coefficient(atm, catalog, f, PartitionModel{});
    if (expected == 0.0) {
      EXPECT_EQ(got, 0.0);
      continue;
    }
    ++nonzero;
    EXPECT_NEAR(got / expected, 1.0, 1e-12) << "nu=" << nu;
  }
  EXPECT_GT(nonzero, 20);
}

TEST(Spectra, AbsorptionIsAdditiveOverDisjointCatalogs) {
  const auto all = parse_line_catalog(fixture(), {}, kAll);
  const std::vector<SpectralLine> a(all.begin(), all.begin() + 2), b(all.begin() + 2, all.end());
  const auto atm = mars_atmosphere();
  for (double nu : {33.35587, 33.35600, 33.35641, 33.35660, 33.35695, 33.37021}) {
    const double f = 2.99792458e10 * nu;
    const double whole = absorption_coefficient(atm, all, f, {});
    const double parts = absorption_coefficient(atm, a, f, {}) + absorption_coefficient(atm, b, f, {});
    EXPECT_NEAR(whole, parts, 1e-15 * std::max(whole, 1e-300));
    EXPECT_GE(whole, 0.0);
  }
}

TEST(Spectra, AbsorptionLinearInPressureAndSkipsAbsentGases) {
  const auto catalog = parse_line_catalog(fixture(), {}, kAll);
  const double f = 2.99792458e10 * 33.356410;
  const double k1 = absorption_coefficient(mars_atmosphere(210.0, 300.0), catalog, f, {});
  const double k2 = absorption_coefficient(mars_atmosphere(210.0, 900.0), catalog, f, {});
  // Density and the p/p0 factor both scale with p.
  EXPECT_NEAR(k2 / k1, 9.0, 1e-12);
  AtmosphereState only_n2 = mars_atmosphere();
  only_n2.composition = {{22, 0, 0.027, 1.0}};
  EXPECT_LT(absorption_coefficient(only_n2, catalog, f, {}), 1e-6 * k1);
}

TEST(Spectra, VolumeDensityAndDomainChecks) {
  const auto atm = mars_atmosphere(210.0, 610.0);
  EXPECT_NEAR(molecular_volume_density(atm, 2, 1), 610.0 / (1.380649e-23 * 210.0) * 0.9532, 1e10);
  EXPECT_NEAR(molecular_volume_density(atm, 2, 1) / 2.0054e23, 1.0, 1e-4);
  EXPECT_THROW(molecular_volume_density(atm, 7, 1), LookupError);
  EXPECT_THROW(mars_atmosphere(100.0, 610.0).validate(), DomainError);
  EXPECT_THROW(mars_atmosphere(210.0, 0.0).validate(), DomainError);
  EXPECT_THROW(molar_mass(99, 1), LookupError);
  EXPECT_NEAR(molar_mass(2, 9), molar_mass(2, 1), 0.0);
}

TEST(Spectra, BeerLambertLoss) {
  const auto loss = beer_lambert_loss(1e-4, 1000.0);
  EXPECT_NEAR(loss.loss_factor, std::exp(0.1), 1e-12);
  EXPECT_NEAR(loss.loss_db, 10.0 * std::log10(std::exp(0.1)), 1e-12);
  EXPECT_NEAR(absorption_db_per_km(1e-4), loss.loss_db, 1e-12);
  EXPECT_THROW(beer_lambert_loss(-1.0, 1.0), DomainError);
}

TEST(Spectra, SpectrumIndependentOfThreads) {
  const auto catalog = parse_line_catalog(fixture(), {}, kAll);
  std::vector<double> f;
  for (int i = 0; i < 200; ++i) f.push_back(2.99792458e10 * (33.3555 + i * 1e-5));
  const auto atm = mars_atmosphere();
  EXPECT_EQ(absorption_spectrum(atm, catalog, f, {}, {}, 1), absorption_spectrum(atm, catalog, f, {}, {}, 4));
}
