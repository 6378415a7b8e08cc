// SPDX-License-Identifier: Apache-2.0

#include "mdsd/clough_tocher.hpp"

#include <cmath>

#include "mdsd/error.hpp"

namespace mdsd::interp {

namespace {

double dot(Point2 g, Point2 d) { return g.x * d.x + g.y * d.y; }

// Ordinate layout inside a Patch, indexed by (a, b) with c = 3 - a - b.
constexpr int slot(int a, int b) {
  constexpr int base[4] = {0, 4, 7, 9};
  return base[a] + b;
}

// Barycentric coordinates of the direction d w.r.t. triangle (p0, p1, p2).
std::array<double, 3> direction_weights(Point2 p0, Point2 p1, Point2 p2, Point2 d) {
  const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
  const double w1 = (d.x * (p2.y - p0.y) - d.y * (p2.x - p0.x)) / det;
  const double w2 = ((p1.x - p0.x) * d.y - (p1.y - p0.y) * d.x) / det;
  return {-w1 - w2, w1, w2};
}

}  // namespace

std::vector<Point2> estimate_gradients(const Triangulation& tri, std::span<const double> values) {
  if (values.size() != tri.points.size()) throw DomainError("one value per vertex required");
  const auto nbr = tri.vertex_neighbors();
  std::vector<Point2> grad(tri.points.size());
  for (std::size_t i = 0; i < tri.points.size(); ++i) {
    double sxx = 0.0, sxy = 0.0, syy = 0.0, sxf = 0.0, syf = 0.0;
    for (std::size_t j : nbr[i]) {
      const Point2 d = tri.points[j] - tri.points[i];
      const double w = 1.0 / dot(d, d);
      const double df = values[j] - values[i];
      sxx += w * d.x * d.x;
      sxy += w * d.x * d.y;
      syy += w * d.y * d.y;
      sxf += w * d.x * df;
      syf += w * d.y * df;
    }
    const double det = sxx * syy - sxy * sxy;
    if (std::abs(det) <= 1e-300 || nbr[i].size() < 2) continue;
    grad[i] = {(syy * sxf - sxy * syf) / det, (sxx * syf - sxy * sxf) / det};
  }
  return grad;
}

CloughTocher::CloughTocher(const Triangulation& tri, std::span<const double> values,
                           std::span<const Point2> gradients) {
  if (values.size() != tri.points.size()) throw DomainError("one value per vertex required");
  std::vector<Point2> estimated;
  if (gradients.empty()) {
    estimated = estimate_gradients(tri, values);
    gradients = estimated;
  }
  if (gradients.size() != tri.points.size()) throw DomainError("one gradient per vertex required");

  patches_.resize(tri.triangles.size());
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    const auto& idx = tri.triangles[t];
    std::array<Point2, 3> v{tri.points[idx[0]], tri.points[idx[1]], tri.points[idx[2]]};
    std::array<double, 3> f{values[idx[0]], values[idx[1]], values[idx[2]]};
    std::array<Point2, 3> g{gradients[idx[0]], gradients[idx[1]], gradients[idx[2]]};
    const Point2 c = (1.0 / 3.0) * (v[0] + v[1] + v[2]);

    std::array<double, 3> toward_c{};
    for (int i = 0; i < 3; ++i) toward_c[i] = f[i] + dot(g[i], c - v[i]) / 3.0;

    // Sub-triangle k has vertices (v[i], v[j], c) with i = k+1, j = k+2.
    std::array<double, 3> edge_i{}, edge_j{}, mid{};
    for (int k = 0; k < 3; ++k) {
      const int i = (k + 1) % 3;
      const int j = (k + 2) % 3;
      const Point2 e = v[j] - v[i];
      edge_i[k] = f[i] + dot(g[i], e) / 3.0;
      edge_j[k] = f[j] - dot(g[j], e) / 3.0;
      const Point2 n{-e.y, e.x};
      const auto a = direction_weights(v[i], v[j], c, n);
      const double q0 = a[0] * f[i] + a[1] * edge_i[k] + a[2] * toward_c[i];
      const double q2 = a[0] * edge_j[k] + a[1] * f[j] + a[2] * toward_c[j];
      mid[k] = (0.5 * (q0 + q2) - a[0] * edge_i[k] - a[1] * edge_j[k]) / a[2];
    }
    // Interior ordinates next to v[i]: mean of the three around it.
    std::array<double, 3> s{};
    for (int i = 0; i < 3; ++i) {
      const int k_before = (i + 2) % 3;  // sub-triangle with i as its first vertex
      const int k_after = (i + 1) % 3;   // sub-triangle with i as its second vertex
      s[i] = (toward_c[i] + mid[k_before] + mid[k_after]) / 3.0;
    }
    const double centre = (s[0] + s[1] + s[2]) / 3.0;

    for (int k = 0; k < 3; ++k) {
      const int i = (k + 1) % 3;
      const int j = (k + 2) % 3;
      Patch& p = patches_[t][k];
      p[slot(3, 0)] = f[i];
      p[slot(0, 3)] = f[j];
      p[slot(0, 0)] = centre;
      p[slot(2, 1)] = edge_i[k];
      p[slot(1, 2)] = edge_j[k];
      p[slot(2, 0)] = toward_c[i];
      p[slot(0, 2)] = toward_c[j];
      p[slot(1, 1)] = mid[k];
      p[slot(1, 0)] = s[i];
      p[slot(0, 1)] = s[j];
    }
  }
}

double CloughTocher::operator()(const Barycentric& b) const {
  const auto& w = b.weights;
  int k = 0;
  if (w[1] < w[k]) k = 1;
  if (w[2] < w[k]) k = 2;
  const int i = (k + 1) % 3;
  const int j = (k + 2) % 3;
  const double u = w[i] - w[k];
  const double v = w[j] - w[k];
  const double s = 3.0 * w[k];
  const Patch& p = patches_[b.triangle][k];
  const double u2 = u * u, v2 = v * v, s2 = s * s;
  return p[slot(3, 0)] * u2 * u + p[slot(0, 3)] * v2 * v + p[slot(0, 0)] * s2 * s +
         3.0 * (p[slot(2, 1)] * u2 * v + p[slot(1, 2)] * u * v2 + p[slot(2, 0)] * u2 * s +
                p[slot(0, 2)] * v2 * s + p[slot(1, 0)] * u * s2 + p[slot(0, 1)] * v * s2) +
         6.0 * p[slot(1, 1)] * u * v * s;
}

}  // namespace mdsd::interp
