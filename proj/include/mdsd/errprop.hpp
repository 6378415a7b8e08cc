// SPDX-License-Identifier: Apache-2.0
//
// First-order propagation of particle-parameter uncertainty through the
// dust attenuation formula, with a truncated-Gaussian Monte Carlo check.

#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>

#include "mdsd/dustphys.hpp"

namespace mdsd::errprop {

struct UncertaintyBudget {
  double sigma_r = 0.4e-6;      // m
  double sigma_eps_real = 0.0775;
  double sigma_eps_imag = 0.315;
  double sigma_N_rel = 0.2;     // fraction of N

  void validate() const;
};

/// dA/dx in dB/km per unit of x.
struct Partials {
  double d_r = 0.0;
  double d_N = 0.0;
  double d_eps_real = 0.0;
  double d_eps_imag = 0.0;
};

Partials partial_derivatives(const dust::DustMedium& dust, double f);

struct VarianceComponents {
  double var_r = 0.0;  // (dB/km)^2
  double var_N = 0.0;
  double var_eps_real = 0.0;
  double var_eps_imag = 0.0;
  double total_sigma = 0.0;  // dB/km
};

VarianceComponents variance_components(const dust::DustMedium& dust, double f,
                                       const UncertaintyBudget& budget);

struct MonteCarloResult {
  double sigma = 0.0;  // dB/km
  double mean = 0.0;
  std::size_t samples = 0;
  std::size_t rejected = 0;

  double rejection_rate() const {
    const double total = static_cast<double>(samples + rejected);
    return total > 0.0 ? static_cast<double>(rejected) / total : 0.0;
  }
};

/// Standard deviation of the attenuation over independent Gaussian
/// perturbations; draws with r <= 0, eps'' <= 0 or N < 0 are redrawn.
/// Streams are seeded per chunk, so the result does not depend on
/// `threads`. Requires n_samples >= 10^4.
MonteCarloResult monte_carlo(const dust::DustMedium& dust, double f,
                             const UncertaintyBudget& budget, std::size_t n_samples,
                             std::uint64_t seed, unsigned threads = 1);

double monte_carlo_sigma(const dust::DustMedium& dust, double f, const UncertaintyBudget& budget,
                         std::size_t n_samples, std::uint64_t seed, unsigned threads = 1);

/// Variance breakdown per frequency as CSV with the columns
/// frequency_hz,var_r,var_n,var_eps_real,var_eps_imag,total_sigma_db_per_km.
void write_variance_table(std::ostream& out, const dust::DustMedium& dust,
                          const UncertaintyBudget& budget, std::span<const double> frequencies);

}  // namespace mdsd::errprop
