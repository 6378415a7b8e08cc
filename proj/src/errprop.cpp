// SPDX-License-Identifier: Apache-2.0

#include "mdsd/errprop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "mdsd/error.hpp"
#include "mdsd/parallel.hpp"
#include "mdsd/random.hpp"

namespace mdsd::errprop {

namespace {

constexpr std::size_t kChunk = 1 << 16;

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t rejected = 0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / total;
    m2 += o.m2 + d * d * n * o.n / total;
    n = total;
    rejected += o.rejected;
  }
};

}  // namespace

void UncertaintyBudget::validate() const {
  if (!(sigma_r >= 0.0 && sigma_eps_real >= 0.0 && sigma_eps_imag >= 0.0 && sigma_N_rel >= 0.0)) {
    throw DomainError("uncertainty budget entries must be >= 0");
  }
}

Partials partial_derivatives(const dust::DustMedium& dust, double f) {
  dust.validate();
  const double lambda = dust::wavelength(f);
  const double r = dust.particles.mean_radius;
  const double e1 = dust.particles.eps_real;
  const double e2 = dust.particles.eps_imag;
  const double n = dust.concentration;
  const double a = e1 + 2.0;
  const double d = a * a + e2 * e2;
  constexpr double c = 1.029e6;
  Partials p;
  p.d_r = 3.0 * c * e2 * n * r * r / (d * lambda);
  p.d_N = c * e2 * r * r * r / (d * lambda);
  p.d_eps_real = -2.0 * c * e2 * n * r * r * r * a / (d * d * lambda);
  p.d_eps_imag = c * n * r * r * r / (d * lambda) * (1.0 - 2.0 * e2 * e2 / d);
  return p;
}

VarianceComponents variance_components(const dust::DustMedium& dust, double f,
                                       const UncertaintyBudget& budget) {
  budget.validate();
  const auto p = partial_derivatives(dust, f);
  const double sigma_n = budget.sigma_N_rel * dust.concentration;
  VarianceComponents v;
  v.var_r = p.d_r * p.d_r * budget.sigma_r * budget.sigma_r;
  v.var_N = p.d_N * p.d_N * sigma_n * sigma_n;
  v.var_eps_real = p.d_eps_real * p.d_eps_real * budget.sigma_eps_real * budget.sigma_eps_real;
  v.var_eps_imag = p.d_eps_imag * p.d_eps_imag * budget.sigma_eps_imag * budget.sigma_eps_imag;
  v.total_sigma = std::sqrt(v.var_r + v.var_N + v.var_eps_real + v.var_eps_imag);
  return v;
}

MonteCarloResult monte_carlo(const dust::DustMedium& dust, double f,
                             const UncertaintyBudget& budget, std::size_t n_samples,
                             std::uint64_t seed, unsigned threads) {
  dust.validate();
  budget.validate();
  if (n_samples < 10000) throw DomainError("Monte Carlo needs at least 10^4 samples");
  const double lambda = dust::wavelength(f);
  const double sigma_n = budget.sigma_N_rel * dust.concentration;

  const std::size_t chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<Moments> parts(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng(derive_seed(seed, {c}));
    std::normal_distribution<double> unit(0.0, 1.0);
    const std::size_t count = std::min(kChunk, n_samples - c * kChunk);
    Moments m;
    for (std::size_t i = 0; i < count;) {
      const double r = dust.particles.mean_radius + budget.sigma_r * unit(rng);
      const double e1 = dust.particles.eps_real + budget.sigma_eps_real * unit(rng);
      const double e2 = dust.particles.eps_imag + budget.sigma_eps_imag * unit(rng);
      const double n = dust.concentration + sigma_n * unit(rng);
      if (r <= 0.0 || e2 <= 0.0 || n < 0.0) {
        ++m.rejected;
        continue;
      }
      const double a = e1 + 2.0;
      m.add(1.029e6 * e2 / (a * a + e2 * e2) / lambda * r * r * r * n);
      ++i;
    }
    parts[c] = m;
  });
  Moments total;
  for (const auto& m : parts) total.merge(m);
  MonteCarloResult out;
  out.samples = static_cast<std::size_t>(total.n);
  out.rejected = total.rejected;
  out.mean = total.mean;
  out.sigma = total.n > 1.0 ? std::sqrt(total.m2 / (total.n - 1.0)) : 0.0;
  return out;
}

double monte_carlo_sigma(const dust::DustMedium& dust, double f, const UncertaintyBudget& budget,
                         std::size_t n_samples, std::uint64_t seed, unsigned threads) {
  return monte_carlo(dust, f, budget, n_samples, seed, threads).sigma;
}

void write_variance_table(std::ostream& out, const dust::DustMedium& dust,
                          const UncertaintyBudget& budget, std::span<const double> frequencies) {
  out << "frequency_hz,var_r,var_n,var_eps_real,var_eps_imag,total_sigma_db_per_km\n";
  char buf[256];
  for (double f : frequencies) {
    const auto v = variance_components(dust, f, budget);
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", f, v.var_r, v.var_N,
                  v.var_eps_real, v.var_eps_imag, v.total_sigma);
    out << buf;
  }
}

}  // namespace mdsd::errprop
