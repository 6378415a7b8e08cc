// SPDX-License-Identifier: Apache-2.0
//
// Reduced Clough-Tocher C1 interpolant on a triangulation: each triangle is
// split at its centroid into three cubic Bezier patches whose cross-edge
// derivative varies linearly along every edge.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "mdsd/delaunay.hpp"

namespace mdsd::interp {

/// Vertex gradients from an inverse-square-distance weighted least-squares
/// plane through each vertex and its neighbours. Values are in
/// triangulation order.
std::vector<Point2> estimate_gradients(const Triangulation& tri, std::span<const double> values);

class CloughTocher {
 public:
  /// Gradients default to estimate_gradients(tri, values).
  CloughTocher(const Triangulation& tri, std::span<const double> values,
               std::span<const Point2> gradients = {});

  double operator()(const Barycentric& b) const;

 private:
  // Per triangle: for each sub-triangle k (opposite vertex k), the ten
  // Bezier ordinates b_{abc}, a+b+c = 3.
  using Patch = std::array<double, 10>;
  std::vector<std::array<Patch, 3>> patches_;
};

}  // namespace mdsd::interp
