// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mdsd/detect.hpp"
#include "mdsd/error.hpp"

using namespace mdsd;
using namespace mdsd::detect;

namespace {

double naive_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

std::vector<std::span<const double>> spans(const std::vector<std::vector<double>>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST(Detect, PearsonMatchesTextbookFormula) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::vector<double> x(40), y(40);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = g(rng);
    y[i] = 0.6 * x[i] + g(rng);
  }
  EXPECT_NEAR(*pairwise_correlation(x, y), naive_pearson(x, y), 1e-12);
  std::vector<double> c(40, 2.5);
  EXPECT_FALSE(pairwise_correlation(x, c).has_value());
  EXPECT_THROW(pairwise_correlation(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
               InsufficientDataError);
}

TEST(Detect, RhoBarEqualsBruteForcePairMean) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> w(7, std::vector<double>(24));
  for (auto& s : w) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sin(0.3 * i) + 0.8 * g(rng);
  }
  double sum = 0;
  int pairs = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      sum += naive_pearson(w[i], w[j]);
      ++pairs;
    }
  }
  const auto r = detect_storm(spans(w), {});
  EXPECT_NEAR(r.rho_bar, sum / pairs, 1e-12);
  EXPECT_EQ(r.usable_links, 7u);
}

TEST(Detect, CoherentDropIsDetected) {
  // Every link sees the same -2 dB/km ramp plus small independent noise.
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 0.05);
  std::vector<std::vector<double>> w(5, std::vector<double>(24));
  for (auto& s : w) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = -2.0 * static_cast<double>(i) / 12.0 + g(rng);
  }
  const auto r = detect_storm(spans(w), {});
  EXPECT_TRUE(r.detected);
  EXPECT_GT(r.rho_bar, 0.9);
  EXPECT_LT(r.mean_delta, -1.0);

  // The same ramp upwards is correlated but not an attenuation increase.
  for (auto& s : w) {
    for (double& v : s) v = -v;
  }
  EXPECT_FALSE(detect_storm(spans(w), {}).detected);
}

TEST(Detect, NoiseRarelyTriggers) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 0.05);
  int fired = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::vector<double>> w(10, std::vector<double>(24));
    for (auto& s : w) {
      for (double& v : s) v = g(rng);
    }
    fired += detect_storm(spans(w), {}).detected ? 1 : 0;
  }
  EXPECT_EQ(fired, 0);
}

TEST(Detect, ConstantWindowsAreExcluded) {
  std::vector<std::vector<double>> w{{1, 2, 3, 4}, {2, 4, 6, 8}, {5, 5, 5, 5}};
  const auto r = detect_storm(spans(w), {});
  EXPECT_EQ(r.usable_links, 2u);
  EXPECT_NEAR(r.rho_bar, 1.0, 1e-12);
  // The constant link still enters the mean change.
  EXPECT_NEAR(r.mean_delta, (2.5 + 5.0 + 5.0) / 3.0, 1e-12);

  std::vector<std::vector<double>> flat{{1, 1, 1}, {2, 2, 2}, {1, 2, 3}};
  EXPECT_THROW(detect_storm(spans(flat), {}), InsufficientDataError);
}

TEST(Detect, ConfigValidation) {
  EXPECT_THROW((DetectionConfig{1.0, 1.0, 24}.validate()), DomainError);
  EXPECT_THROW((DetectionConfig{0.7, 0.0, 24}.validate()), DomainError);
  EXPECT_THROW((DetectionConfig{0.7, 1.0, 2}.validate()), DomainError);
}

TEST(Detect, ScanFindsOnset) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 0.05);
  std::vector<std::vector<double>> series(6, std::vector<double>(72));
  for (auto& s : series) {
    for (std::size_t t = 0; t < s.size(); ++t) {
      const double ramp = t < 30 ? 0.0 : -0.3 * static_cast<double>(t - 30);
      s[t] = ramp + g(rng);
    }
  }
  DetectionConfig cfg{0.7, 1.0, 12};
  const auto log = scan(series, cfg);
  ASSERT_EQ(log.size(), 72u - 12u + 1u);
  const auto first = onset(log);
  ASSERT_TRUE(first.has_value());
  EXPECT_GT(*first, 18u);
  EXPECT_LT(*first, 40u);

  std::ostringstream csv;
  write_detection_log_csv(csv, log);
  EXPECT_EQ(csv.str().rfind("window_start,rho_bar,mean_delta_db_per_km,detected\n", 0), 0u);
}
