// SPDX-License-Identifier: Apache-2.0

#include "mdsd/evalx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mdsd/error.hpp"
#include "mdsd/log.hpp"

namespace mdsd::eval {

namespace {

void check_shapes(std::span<const IntensityGrid> pred, std::span<const IntensityGrid> truth) {
  if (pred.empty()) throw UndefinedMetricError("empty time series");
  if (pred.size() != truth.size()) throw DomainError("prediction and truth differ in length");
  for (std::size_t t = 0; t < pred.size(); ++t) {
    if (!(pred[t].spec() == truth[t].spec())) throw DomainError("grid shapes differ at t=" + std::to_string(t));
  }
}

// Values of pixels valid in both grids.
void joint_values(const IntensityGrid& p, const IntensityGrid& q, std::vector<double>& a,
                  std::vector<double>& b) {
  a.clear();
  b.clear();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.mask()[i] && q.mask()[i]) {
      a.push_back(p.values()[i]);
      b.push_back(q.values()[i]);
    }
  }
}

double mean(std::span<const double> v) { return pairwise_sum(v) / static_cast<double>(v.size()); }

}  // namespace

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const auto half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double mae(std::span<const IntensityGrid> pred, std::span<const IntensityGrid> truth) {
  check_shapes(pred, truth);
  std::vector<double> a, b, per_step, err;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    joint_values(pred[t], truth[t], a, b);
    if (a.empty()) continue;
    err.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) err[i] = std::abs(a[i] - b[i]);
    per_step.push_back(mean(err));
  }
  if (per_step.empty()) throw UndefinedMetricError("no valid pixels at any time step");
  return mean(per_step);
}

double correlation_metric(std::span<const IntensityGrid> pred, std::span<const IntensityGrid> truth,
                          std::size_t* skipped) {
  check_shapes(pred, truth);
  std::vector<double> a, b, per_step, tmp;
  std::size_t skip = 0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    joint_values(pred[t], truth[t], a, b);
    if (a.size() < 2) {
      ++skip;
      continue;
    }
    const double ma = mean(a);
    const double mb = mean(b);
    tmp.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) tmp[i] = (a[i] - ma) * (b[i] - mb);
    const double sab = pairwise_sum(tmp);
    for (std::size_t i = 0; i < a.size(); ++i) tmp[i] = (a[i] - ma) * (a[i] - ma);
    const double saa = pairwise_sum(tmp);
    for (std::size_t i = 0; i < a.size(); ++i) tmp[i] = (b[i] - mb) * (b[i] - mb);
    const double sbb = pairwise_sum(tmp);
    // Relative floor so rounding noise around a constant counts as constant.
    const double floor_a = 1e-24 * static_cast<double>(a.size()) * (ma * ma + 1e-300);
    const double floor_b = 1e-24 * static_cast<double>(b.size()) * (mb * mb + 1e-300);
    if (!(saa > floor_a) || !(sbb > floor_b)) {
      ++skip;
      continue;
    }
    per_step.push_back(std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0));
  }
  if (skipped) *skipped = skip;
  if (skip > 0) log::warn(std::to_string(skip) + " constant time step(s) left out of the correlation");
  if (per_step.empty()) throw UndefinedMetricError("correlation undefined at every time step");
  return mean(per_step);
}

double nbias(std::span<const IntensityGrid> pred, std::span<const IntensityGrid> truth,
             std::size_t* skipped) {
  check_shapes(pred, truth);
  std::vector<double> a, b, per_step, diff;
  std::size_t skip = 0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    joint_values(pred[t], truth[t], a, b);
    if (a.empty()) {
      ++skip;
      continue;
    }
    const double mp = mean(a);
    if (mp == 0.0) {
      ++skip;
      log::warn("zero mean prediction at t=" + std::to_string(t) + "; left out of NBias");
      continue;
    }
    diff.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = b[i] - a[i];
    per_step.push_back(mean(diff) / mp);
  }
  if (skipped) *skipped = skip;
  if (per_step.empty()) throw UndefinedMetricError("NBias undefined at every time step");
  return mean(per_step);
}

double coverage(const IntensityGrid& grid) {
  if (grid.size() == 0) return 0.0;
  return 100.0 * static_cast<double>(grid.valid_count()) / static_cast<double>(grid.size());
}

MetricsReport evaluate(std::span<const IntensityGrid> pred, std::span<const IntensityGrid> truth) {
  MetricsReport r;
  r.steps = pred.size();
  r.mae = mae(pred, truth);
  try {
    r.rho = correlation_metric(pred, truth, &r.rho_skipped);
  } catch (const UndefinedMetricError&) {
    r.rho = std::numeric_limits<double>::quiet_NaN();
    r.rho_skipped = pred.size();
  }
  try {
    r.nbias = nbias(pred, truth, &r.nbias_skipped);
  } catch (const UndefinedMetricError&) {
    r.nbias = std::numeric_limits<double>::quiet_NaN();
    r.nbias_skipped = pred.size();
  }
  std::vector<double> cov;
  for (const auto& g : pred) cov.push_back(coverage(g));
  r.coverage = mean(cov);
  return r;
}

}  // namespace mdsd::eval
