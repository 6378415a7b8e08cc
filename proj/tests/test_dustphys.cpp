// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "mdsd/dustphys.hpp"
#include "mdsd/error.hpp"

using namespace mdsd;
using namespace mdsd::dust;

namespace {

// Closed form typed out with the table defaults.
double hand_attenuation(double f, double n) {
  const double lambda = 299792458.0 / f;
  const double r = 4e-6, e1 = 1.55, e2 = 6.3;
  return 1.029e6 * e2 / ((e1 + 2) * (e1 + 2) + e2 * e2) / lambda * n * r * r * r;
}

}  // namespace

TEST(Dust, AttenuationAtOneTerahertz) {
  const double a = dust_attenuation({{}, 1e8}, 1e12);
  EXPECT_NEAR(a, hand_attenuation(1e12, 1e8), 1e-12 * a);
  EXPECT_NEAR(a, 2.6465, 1e-3);
  EXPECT_NEAR(a / 2.64, 1.0, 0.01);
}

TEST(Dust, AttenuationLinearInFrequencyAndConcentration) {
  const double a = dust_attenuation({{}, 1e8}, 1e12);
  EXPECT_NEAR(dust_attenuation({{}, 3e8}, 1e12), 3 * a, 1e-12 * a);
  EXPECT_NEAR(dust_attenuation({{}, 1e8}, 2e12), 2 * a, 1e-12 * a);
  EXPECT_EQ(dust_attenuation({{}, 0.0}, 1e12), 0.0);
}

TEST(Dust, VisibilityRoutesAgree) {
  const DustParticles p;
  for (double a : {0.1, 1.0, 2.64, 10.0}) {
    const double v = visibility_from_attenuation(a, p, 1e12);
    const double n = concentration_from_attenuation(a, p, 1e12);
    const double v_via_n = 5.5e-4 / (p.mean_radius * p.mean_radius * n);
    EXPECT_NEAR(v / v_via_n, 1.0, 0.01) << "A=" << a;
  }
  EXPECT_NEAR(visibility_from_attenuation(2.64, p, 1e12), 0.344, 0.002);
}

TEST(Dust, VisibilityUndefinedAtZero) {
  EXPECT_THROW(visibility_from_attenuation(0.0, {}, 1e12), UndefinedVisibilityError);
  EXPECT_THROW(visibility_from_attenuation(0.0, {}, 1e12), DomainError);
  EXPECT_TRUE(std::isinf(visibility_or_clear(0.0, {}, 1e12)));
  EXPECT_THROW(visibility_from_attenuation(-1.0, {}, 1e12), DomainError);
}

TEST(Dust, ConcentrationFromVisibility) {
  EXPECT_NEAR(concentration_from_visibility(1.0, 4e-6), 5.5e-4 / 16e-12, 1.0);
  EXPECT_THROW(concentration_from_visibility(0.0, 4e-6), DomainError);
}

TEST(Dust, RoundTripInversion) {
  for (double n : {1.0, 1e5, 6.5e5, 1e8, 3e9}) {
    for (double f : {0.3e12, 1e12, 4e12}) {
      const double a = dust_attenuation({{}, n}, f);
      EXPECT_NEAR(concentration_from_attenuation(a, {}, f) / n, 1.0, 1e-12);
    }
  }
}

TEST(Dust, CdodConversion) {
  const double n = concentration_from_cdod(1.0);
  const double hand = 1.3 / (3.57 * M_PI * 16e-12 * 1.11e4);
  EXPECT_NEAR(n, hand, 1e-9 * hand);
  EXPECT_NEAR(n / 6.53e5, 1.0, 0.005);
  EXPECT_EQ(concentration_from_cdod(0.0), 0.0);
  EXPECT_THROW(concentration_from_cdod(-0.1), DomainError);
}

TEST(Dust, DomainChecks) {
  EXPECT_THROW(dust_attenuation({{0.0, 1.55, 6.3}, 1e8}, 1e12), DomainError);
  EXPECT_THROW(dust_attenuation({{}, -1.0}, 1e12), DomainError);
  EXPECT_THROW(dust_attenuation({{}, 1.0}, 0.0), DomainError);
  EXPECT_THROW(concentration_from_attenuation(-1.0, {}, 1e12), DomainError);
}
