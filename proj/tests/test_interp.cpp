// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mdsd/error.hpp"
#include "mdsd/interp.hpp"

using namespace mdsd;
using namespace mdsd::interp;

namespace {

constexpr Method kAll[] = {Method::linear, Method::nearest, Method::cubic,   Method::rbf,
                           Method::idw,    Method::kriging, Method::weighted};

std::vector<Sample> random_samples(std::size_t n, std::uint64_t seed, const Extent& e) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(e.xmin, e.xmax), uy(e.ymin, e.ymax);
  std::vector<Sample> s(n);
  for (auto& q : s) {
    q.position = {ux(rng), uy(rng)};
    q.value = 5.0 + std::sin(q.position.x / 7.0) + 0.5 * std::cos(q.position.y / 5.0);
    q.variance = 0.1;
  }
  return s;
}

InterpConfig cfg_for(Method m) {
  InterpConfig c;
  c.method = m;
  return c;
}

}  // namespace

TEST(Interp, MethodNames) {
  for (Method m : kAll) EXPECT_EQ(method_from_string(to_string(m)), m);
  EXPECT_THROW(method_from_string("spline"), ConfigError);
}

TEST(Interp, SingleSampleNearest) {
  const GridSpec g{{0, 10, 0, 5}, 10, 5};
  const std::vector<Sample> s{{{3, 3}, 7.5, 0}};
  const auto out = interpolate(s, g, cfg_for(Method::nearest));
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(out.values()[i], 7.5);
    EXPECT_TRUE(out.mask()[i]);
  }
}

TEST(Interp, IdwSymmetry) {
  // 1 x 1 grid centred at (1, 1); samples at equal distance.
  const GridSpec g{{0, 2, 0, 2}, 1, 1};
  const std::vector<Sample> s{{{0, 1}, 1.0, 0}, {{2, 1}, 3.0, 0}};
  EXPECT_DOUBLE_EQ(interpolate(s, g, cfg_for(Method::idw)).values()[0], 2.0);
}

TEST(Interp, LinearCentroidAndHull) {
  const GridSpec g{{0, 3, 0, 3}, 3, 3};  // centres at 0.5, 1.5, 2.5
  // Centroid of this triangle is the centre cell (1.5, 1.5).
  const std::vector<Sample> s{{{0.5, 0.5}, 1, 0}, {{3.5, 0.5}, 2, 0}, {{0.5, 3.5}, 3, 0}};
  const auto out = interpolate(s, g, cfg_for(Method::linear));
  EXPECT_TRUE(out.valid(1, 1));
  EXPECT_NEAR(out.value(1, 1), 2.0, 1e-12);
  EXPECT_FALSE(out.valid(2, 2));  // (2.5, 2.5) lies beyond the hypotenuse
}

TEST(Interp, TriangulationMethodsNeedThreePoints) {
  const GridSpec g{{0, 3, 0, 3}, 3, 3};
  const std::vector<Sample> two{{{0, 0}, 1, 0}, {{1, 1}, 2, 0}};
  EXPECT_THROW(interpolate(two, g, cfg_for(Method::linear)), MethodInfeasibleError);
  EXPECT_THROW(interpolate(two, g, cfg_for(Method::cubic)), MethodInfeasibleError);
  const std::vector<Sample> line{{{0, 0}, 1, 0}, {{1, 1}, 2, 0}, {{2, 2}, 2, 0}};
  EXPECT_THROW(interpolate(line, g, cfg_for(Method::linear)), MethodInfeasibleError);
}

TEST(Interp, ConstantFieldReproduced) {
  const Extent e{0, 40, 0, 20};
  const GridSpec g{e, 32, 16};
  auto s = random_samples(30, 3, e);
  for (auto& q : s) q.value = 4.25;
  for (Method m : kAll) {
    const auto out = interpolate(s, g, cfg_for(m));
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (out.mask()[i]) {
        EXPECT_NEAR(out.values()[i], 4.25, 1e-9) << to_string(m);
      }
    }
  }
}

TEST(Interp, MaximumPrinciple) {
  const Extent e{0, 40, 0, 20};
  const GridSpec g{e, 40, 20};
  const auto s = random_samples(25, 4, e);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& q : s) {
    lo = std::min(lo, q.value);
    hi = std::max(hi, q.value);
  }
  for (Method m : {Method::nearest, Method::linear, Method::idw, Method::weighted}) {
    const auto out = interpolate(s, g, cfg_for(m));
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!out.mask()[i]) continue;
      EXPECT_GE(out.values()[i], lo - 1e-12) << to_string(m);
      EXPECT_LE(out.values()[i], hi + 1e-12) << to_string(m);
    }
  }
}

TEST(Interp, CoverageRule) {
  const Extent e{0, 40, 0, 20};
  const GridSpec g{e, 40, 20};
  const auto s = random_samples(12, 5, e);
  const auto lin = interpolate(s, g, cfg_for(Method::linear));
  const auto cub = interpolate(s, g, cfg_for(Method::cubic));
  EXPECT_LT(lin.valid_count(), g.size());
  EXPECT_EQ(lin.mask(), cub.mask());
  for (Method m : {Method::nearest, Method::rbf, Method::idw, Method::kriging, Method::weighted}) {
    EXPECT_EQ(interpolate(s, g, cfg_for(m)).valid_count(), g.size()) << to_string(m);
  }
}

TEST(Interp, ExactAtSamples) {
  // Samples placed on cell centres.
  const GridSpec g{{0, 20, 0, 10}, 20, 10};
  std::vector<Sample> s;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t i : {11u, 37u, 55u, 82u, 120u, 143u, 171u, 188u}) {
    s.push_back({g.cell_center(i), 1.0 + u(rng), 0.0});
  }
  InterpConfig krig = cfg_for(Method::kriging);
  krig.variogram = Variogram{0.0, 1.0, 5.0};
  for (const auto& cfg : {cfg_for(Method::nearest), cfg_for(Method::linear), cfg_for(Method::idw),
                          cfg_for(Method::rbf), cfg_for(Method::cubic), krig}) {
    const auto out = interpolate(s, g, cfg);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const std::size_t cell = static_cast<std::size_t>(s[k].position.y) * g.nx +
                               static_cast<std::size_t>(s[k].position.x);
      ASSERT_TRUE(out.mask()[cell]);
      EXPECT_NEAR(out.values()[cell], s[k].value, 1e-8) << to_string(cfg.method);
    }
  }
}

TEST(Interp, NearestTieGoesToLowestIndex) {
  const GridSpec g{{0, 2, 0, 2}, 1, 1};
  const std::vector<Sample> s{{{0, 1}, 9.0, 0}, {{2, 1}, 3.0, 0}};
  EXPECT_EQ(interpolate(s, g, cfg_for(Method::nearest)).values()[0], 9.0);
}

TEST(Interp, TranslationEquivariance) {
  const Extent e{0, 40, 0, 20};
  const GridSpec g{e, 32, 16};
  const auto s = random_samples(30, 7, e);
  const Point2 shift{64.0, -32.0};
  auto s2 = s;
  for (auto& q : s2) q.position = q.position + shift;
  const GridSpec g2{{e.xmin + shift.x, e.xmax + shift.x, e.ymin + shift.y, e.ymax + shift.y}, 32, 16};
  for (Method m : kAll) {
    const auto a = interpolate(s, g, cfg_for(m));
    const auto b = interpolate(s2, g2, cfg_for(m));
    std::size_t mismatched_mask = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (a.mask()[i] != b.mask()[i]) {
        ++mismatched_mask;
        continue;
      }
      if (a.mask()[i]) {
        EXPECT_NEAR(a.values()[i], b.values()[i], 1e-7) << to_string(m);
      }
    }
    EXPECT_LE(mismatched_mask, 2u) << to_string(m);
  }
}

TEST(Interp, InterpolatorReusesGeometry) {
  const Extent e{0, 40, 0, 20};
  const GridSpec g{e, 20, 10};
  const auto s = random_samples(20, 8, e);
  std::vector<Point2> pos;
  std::vector<double> v1, v2;
  for (const auto& q : s) {
    pos.push_back(q.position);
    v1.push_back(q.value);
    v2.push_back(2 * q.value);
  }
  for (Method m : {Method::linear, Method::cubic, Method::rbf, Method::idw, Method::kriging}) {
    const Interpolator ip(pos, g, cfg_for(m));
    const auto a = ip.apply(v1);
    const auto b = ip.apply(v2);
    std::vector<Sample> s2 = s;
    for (auto& q : s2) q.value *= 2;
    const auto c = interpolate(s2, g, cfg_for(m));
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!a.mask()[i]) continue;
      EXPECT_NEAR(b.values()[i], c.values()[i], 1e-9) << to_string(m);
      if (m != Method::kriging) {
        EXPECT_NEAR(b.values()[i], 2 * a.values()[i], 1e-8) << to_string(m);
      }
    }
  }
}

TEST(WeightedMap, UniformWeightsGiveMean) {
  const GridSpec g{{0, 10, 0, 10}, 4, 4};
  const std::vector<Sample> s{{{1, 1}, 2, 0.3}, {{9, 2}, 4, 1.0}, {{5, 8}, 9, 7.0}};
  const auto out = uncertainty_weighted_map(s, g, 0.0, [](double) { return 1.0; });
  for (double v : out.values()) EXPECT_NEAR(v, 5.0, 1e-12);
}

TEST(WeightedMap, InfiniteVarianceDropsSample) {
  const GridSpec g{{0, 10, 0, 10}, 4, 4};
  const std::vector<Sample> s{{{1, 1}, 2, 1.0},
                              {{9, 2}, 4, std::numeric_limits<double>::infinity()}};
  const auto out = uncertainty_weighted_map(s, g, 1.0, [](double d) { return d * d; });
  for (double v : out.values()) EXPECT_DOUBLE_EQ(v, 2.0);

  const std::vector<Sample> none{{{1, 1}, 2, std::numeric_limits<double>::infinity()}};
  EXPECT_THROW(uncertainty_weighted_map(none, g, 1.0, [](double d) { return d * d; }),
               InsufficientDataError);
}

TEST(WeightedMap, HandEvaluation) {
  // Cell centre (1, 1). Variances {1, 2, 4} have median 2, so the
  // normalized variances are {0.5, 1, 2}; W = (d / 15)^2 = {0, 0.04, 0.16}.
  const GridSpec g{{0, 2, 0, 2}, 1, 1};
  const std::vector<Sample> s{{{1, 1}, 10, 1}, {{4, 1}, 20, 2}, {{1, -5}, 40, 4}};
  const auto out = uncertainty_weighted_map(
      s, g, 1.0, [](double d) { return squared_distance_weight(d, 15.0); });
  EXPECT_NEAR(out.values()[0], 16.863560732113143, 1e-12);

  InterpConfig cfg = cfg_for(Method::weighted);
  EXPECT_NEAR(interpolate(s, g, cfg).values()[0], 16.863560732113143, 1e-12);
}

TEST(WeightedMap, ZeroDenominatorIsExact) {
  const GridSpec g{{0, 2, 0, 2}, 1, 1};
  const std::vector<Sample> s{{{1, 1}, 10, 0}, {{4, 1}, 20, 2}};
  const auto out = uncertainty_weighted_map(
      s, g, 1.0, [](double d) { return squared_distance_weight(d, 15.0); });
  EXPECT_EQ(out.values()[0], 10.0);
}

TEST(Interp, ConfigValidation) {
  InterpConfig c;
  c.idw_power = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.variogram = Variogram{2.0, 1.0, 1.0};
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.z = -1.0;
  EXPECT_THROW(c.validate(), Error);
}
