// SPDX-License-Identifier: Apache-2.0

#include "mdsd/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include <Eigen/Dense>

#include "mdsd/clough_tocher.hpp"
#include "mdsd/delaunay.hpp"
#include "mdsd/error.hpp"

namespace mdsd::interp {

namespace {

constexpr std::pair<Method, std::string_view> kNames[] = {
    {Method::linear, "linear"}, {Method::nearest, "nearest"}, {Method::cubic, "cubic"},
    {Method::rbf, "rbf"},       {Method::idw, "idw"},         {Method::kriging, "kriging"},
    {Method::weighted, "weighted"},
};

double median(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

// First occurrence of every distinct position.
std::vector<std::size_t> distinct_positions(std::span<const Point2> positions) {
  std::map<std::pair<double, double>, std::size_t> seen;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (seen.emplace(std::pair(positions[i].x, positions[i].y), i).second) keep.push_back(i);
  }
  return keep;
}

double mean_nearest_spacing(std::span<const Point2> pts) {
  if (pts.size() < 2) return 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i) best = std::min(best, distance(pts[i], pts[j]));
    }
    sum += best;
  }
  return sum / static_cast<double>(pts.size());
}

// Inverse-distance estimate at p; exact (mean of coincident samples) at d = 0.
double idw_at(Point2 p, std::span<const Point2> pts, std::span<const double> values, double power) {
  double num = 0.0, den = 0.0, exact_sum = 0.0;
  std::size_t exact = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double dx = p.x - pts[i].x;
    const double dy = p.y - pts[i].y;
    const double d2 = dx * dx + dy * dy;
    if (d2 == 0.0) {
      exact_sum += values[i];
      ++exact;
      continue;
    }
    const double w = power == 2.0 ? 1.0 / d2 : std::pow(d2, -0.5 * power);
    num += w * values[i];
    den += w;
  }
  if (exact > 0) return exact_sum / static_cast<double>(exact);
  return num / den;
}

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [k, name] : kNames) {
    if (k == m) return name;
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown interpolation method '" + std::string(name) + "'");
}

void InterpConfig::validate() const {
  if (!(idw_power > 0.0)) throw DomainError("idw_power must be > 0");
  if (rbf_shape && !(*rbf_shape > 0.0)) throw DomainError("rbf shape must be > 0");
  if (variogram) variogram->validate();
  if (!(z >= 0.0)) throw DomainError("z must be >= 0");
  if (!(weight_length > 0.0)) throw DomainError("weight length must be > 0");
}

double squared_distance_weight(double d, double length) {
  const double r = d / length;
  return r * r;
}

IntensityGrid uncertainty_weighted_map(std::span<const Sample> samples, const GridSpec& grid,
                                       double z,
                                       const std::function<double(double)>& weight_fn) {
  grid.validate();
  if (samples.empty()) throw InsufficientDataError("weighted map needs at least one sample");
  if (!(z >= 0.0)) throw DomainError("z must be >= 0");

  std::vector<double> finite_var;
  for (const auto& s : samples) {
    if (!(s.variance >= 0.0)) throw DomainError("sample variance must be >= 0");
    if (std::isfinite(s.variance)) finite_var.push_back(s.variance);
  }
  double scale = finite_var.empty() ? 1.0 : median(finite_var);
  if (!(scale > 0.0)) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : finite_var) {
      if (v > 0.0) {
        sum += v;
        ++n;
      }
    }
    scale = n > 0 ? sum / static_cast<double>(n) : 1.0;
  }

  IntensityGrid out(grid, 0.0);
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    const Point2 c = grid.cell_center(cell);
    double num = 0.0, den = 0.0, exact_sum = 0.0;
    std::size_t exact = 0;
    for (const auto& s : samples) {
      if (!std::isfinite(s.variance)) continue;
      const double d = z * (s.variance / scale) + weight_fn(distance(c, s.position));
      if (d == 0.0) {
        exact_sum += s.value;
        ++exact;
        continue;
      }
      if (!std::isfinite(d)) continue;
      num += s.value / d;
      den += 1.0 / d;
    }
    if (exact > 0) {
      out.set(cell, exact_sum / static_cast<double>(exact));
    } else if (den > 0.0) {
      out.set(cell, num / den);
    } else {
      throw InsufficientDataError("no sample carries weight; estimate is empty");
    }
  }
  return out;
}

struct Interpolator::State {
  std::vector<Point2> positions;
  // Linear and cubic.
  Triangulation tri;
  std::vector<std::pair<std::size_t, Barycentric>> cells;
  // Nearest.
  std::vector<std::size_t> nearest;
  // RBF and kriging: distinct positions.
  std::vector<std::size_t> distinct;
  std::vector<Point2> distinct_points;
  double rbf_shape = 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> rbf_lu;
  std::optional<OrdinaryKriging> fixed_kriging;
};

Interpolator::Interpolator(std::span<const Point2> positions, const GridSpec& grid,
                           const InterpConfig& cfg)
    : grid_(grid), cfg_(cfg), state_(std::make_unique<State>()) {
  grid_.validate();
  cfg_.validate();
  if (positions.empty()) throw MethodInfeasibleError("interpolation needs at least one sample");
  for (const auto& p : positions) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("sample position not finite");
  }
  auto& st = *state_;
  st.positions.assign(positions.begin(), positions.end());

  switch (cfg_.method) {
    case Method::linear:
    case Method::cubic:
      st.tri = delaunay(st.positions);
      rasterize(st.tri, grid_, [&](std::size_t cell, const Barycentric& b) {
        st.cells.emplace_back(cell, b);
      });
      break;
    case Method::nearest:
      st.nearest.resize(grid_.size());
      for (std::size_t cell = 0; cell < grid_.size(); ++cell) {
        const Point2 c = grid_.cell_center(cell);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < st.positions.size(); ++i) {
          const Point2 d = c - st.positions[i];
          const double d2 = d.x * d.x + d.y * d.y;
          if (d2 < best) {
            best = d2;
            st.nearest[cell] = i;
          }
        }
      }
      break;
    case Method::rbf:
    case Method::kriging: {
      st.distinct = distinct_positions(st.positions);
      for (auto i : st.distinct) st.distinct_points.push_back(st.positions[i]);
      if (cfg_.method == Method::kriging) {
        if (cfg_.variogram) st.fixed_kriging.emplace(st.distinct_points, *cfg_.variogram);
        break;
      }
      st.rbf_shape = cfg_.rbf_shape.value_or(mean_nearest_spacing(st.distinct_points));
      const auto n = static_cast<Eigen::Index>(st.distinct_points.size());
      const double c2 = st.rbf_shape * st.rbf_shape;
      Eigen::MatrixXd a(n + 1, n + 1);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          const Point2 d = st.distinct_points[static_cast<std::size_t>(i)] -
                           st.distinct_points[static_cast<std::size_t>(j)];
          a(i, j) = std::sqrt(d.x * d.x + d.y * d.y + c2);
        }
        a(i, n) = 1.0;
        a(n, i) = 1.0;
      }
      a(n, n) = 0.0;
      const double jitter = 1e-10 * a.topLeftCorner(n, n).trace();
      a.topLeftCorner(n, n).diagonal().array() += jitter;
      st.rbf_lu.compute(a);
      break;
    }
    case Method::idw:
    case Method::weighted:
      break;
  }
}

Interpolator::~Interpolator() = default;
Interpolator::Interpolator(Interpolator&&) noexcept = default;
Interpolator& Interpolator::operator=(Interpolator&&) noexcept = default;

IntensityGrid Interpolator::apply(std::span<const double> values,
                                  std::span<const double> variances) const {
  const auto& st = *state_;
  if (values.size() != st.positions.size()) throw DomainError("one value per sample required");
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("sample value not finite");
  }

  IntensityGrid out(grid_, 0.0);
  switch (cfg_.method) {
    case Method::linear:
    case Method::cubic: {
      std::fill(out.mask().begin(), out.mask().end(), 0);
      std::vector<double> vv(st.tri.points.size());
      for (std::size_t k = 0; k < vv.size(); ++k) vv[k] = values[st.tri.source_index[k]];
      if (cfg_.method == Method::linear) {
        for (const auto& [cell, b] : st.cells) {
          const auto& t = st.tri.triangles[b.triangle];
          out.set(cell, b.weights[0] * vv[t[0]] + b.weights[1] * vv[t[1]] + b.weights[2] * vv[t[2]]);
        }
      } else {
        const CloughTocher ct(st.tri, vv);
        for (const auto& [cell, b] : st.cells) out.set(cell, ct(b));
      }
      break;
    }
    case Method::nearest:
      for (std::size_t cell = 0; cell < grid_.size(); ++cell) out.set(cell, values[st.nearest[cell]]);
      break;
    case Method::idw:
      for (std::size_t cell = 0; cell < grid_.size(); ++cell) {
        out.set(cell, idw_at(grid_.cell_center(cell), st.positions, values, cfg_.idw_power));
      }
      break;
    case Method::rbf: {
      const auto n = static_cast<Eigen::Index>(st.distinct.size());
      Eigen::VectorXd rhs(n + 1);
      for (Eigen::Index i = 0; i < n; ++i) rhs(i) = values[st.distinct[static_cast<std::size_t>(i)]];
      rhs(n) = 0.0;
      const Eigen::VectorXd coef = st.rbf_lu.solve(rhs);
      const double c2 = st.rbf_shape * st.rbf_shape;
      for (std::size_t cell = 0; cell < grid_.size(); ++cell) {
        const Point2 p = grid_.cell_center(cell);
        double s = coef(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          const Point2 d = p - st.distinct_points[static_cast<std::size_t>(i)];
          s += coef(i) * std::sqrt(d.x * d.x + d.y * d.y + c2);
        }
        out.set(cell, s);
      }
      break;
    }
    case Method::kriging: {
      std::vector<double> dv;
      dv.reserve(st.distinct.size());
      for (auto i : st.distinct) dv.push_back(values[i]);
      const auto [lo, hi] = std::minmax_element(dv.begin(), dv.end());
      if (*lo == *hi) {
        std::fill(out.values().begin(), out.values().end(), *lo);
        break;
      }
      std::optional<OrdinaryKriging> fitted;
      const OrdinaryKriging* ok = st.fixed_kriging ? &*st.fixed_kriging : nullptr;
      if (!ok) {
        fitted.emplace(st.distinct_points, fit_variogram(st.distinct_points, dv).model);
        ok = &*fitted;
      }
      // fit() mutates the coefficients; work on a copy for the fixed model.
      OrdinaryKriging model = *ok;
      model.fit(dv);
      for (std::size_t cell = 0; cell < grid_.size(); ++cell) out.set(cell, model.predict(grid_.cell_center(cell)));
      break;
    }
    case Method::weighted: {
      if (!variances.empty() && variances.size() != values.size()) {
        throw DomainError("one variance per sample required");
      }
      std::vector<Sample> samples(st.positions.size());
      for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i] = {st.positions[i], values[i], variances.empty() ? 0.0 : variances[i]};
      }
      const double length = cfg_.weight_length;
      out = uncertainty_weighted_map(samples, grid_, cfg_.z,
                                     [length](double d) { return squared_distance_weight(d, length); });
      break;
    }
  }
  return out;
}

IntensityGrid interpolate(std::span<const Sample> samples, const GridSpec& grid,
                          const InterpConfig& cfg) {
  std::vector<Point2> pos;
  std::vector<double> val, var;
  for (const auto& s : samples) {
    pos.push_back(s.position);
    val.push_back(s.value);
    var.push_back(s.variance);
  }
  return Interpolator(pos, grid, cfg).apply(val, var);
}

}  // namespace mdsd::interp
