// SPDX-License-Identifier: Apache-2.0
//
// 2-D Delaunay triangulation (Bowyer-Watson) whose union of triangles is the
// convex hull of the input points.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mdsd/grid.hpp"

namespace mdsd::interp {

struct Barycentric {
  std::size_t triangle = 0;
  std::array<double, 3> weights{};
};

struct Triangulation {
  /// Distinct input points; duplicates keep their first occurrence.
  std::vector<Point2> points;
  /// Index into the caller's point list for every entry of `points`.
  std::vector<std::size_t> source_index;
  /// Counter-clockwise vertex triples into `points`.
  std::vector<std::array<std::size_t, 3>> triangles;

  /// Vertex adjacency lists, sorted.
  std::vector<std::vector<std::size_t>> vertex_neighbors() const;
  /// Brute-force point location; nullopt outside the hull.
  std::optional<Barycentric> locate(Point2 p) const;
  std::array<double, 3> barycentric(std::size_t triangle, Point2 p) const;
};

/// Throws MethodInfeasibleError for fewer than three distinct points or a
/// collinear set.
Triangulation delaunay(std::span<const Point2> points);

/// Orientation of (a, b, c): > 0 counter-clockwise, < 0 clockwise.
double orient(Point2 a, Point2 b, Point2 c);

/// Calls fn(cell_index, bary) once for every grid cell whose centre falls
/// in a triangle; the first triangle claiming a cell on a shared edge wins.
template <typename Fn>
void rasterize(const Triangulation& tri, const GridSpec& grid, Fn&& fn) {
  std::vector<std::uint8_t> claimed(grid.size(), 0);
  const double dx = grid.dx();
  const double dy = grid.dy();
  auto clamp_index = [](double v, std::size_t n) -> std::ptrdiff_t {
    if (v < 0.0) return 0;
    if (v > static_cast<double>(n - 1)) return static_cast<std::ptrdiff_t>(n - 1);
    return static_cast<std::ptrdiff_t>(v);
  };
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    const auto& [i0, i1, i2] = tri.triangles[t];
    const Point2 a = tri.points[i0];
    const Point2 b = tri.points[i1];
    const Point2 c = tri.points[i2];
    const double xmin = std::min({a.x, b.x, c.x});
    const double xmax = std::max({a.x, b.x, c.x});
    const double ymin = std::min({a.y, b.y, c.y});
    const double ymax = std::max({a.y, b.y, c.y});
    if (xmax < grid.extent.xmin || xmin > grid.extent.xmax || ymax < grid.extent.ymin ||
        ymin > grid.extent.ymax) {
      continue;
    }
    const auto ix0 = clamp_index(std::floor((xmin - grid.extent.xmin) / dx - 0.5), grid.nx);
    const auto ix1 = clamp_index(std::ceil((xmax - grid.extent.xmin) / dx - 0.5), grid.nx);
    const auto iy0 = clamp_index(std::floor((ymin - grid.extent.ymin) / dy - 0.5), grid.ny);
    const auto iy1 = clamp_index(std::ceil((ymax - grid.extent.ymin) / dy - 0.5), grid.ny);
    for (auto iy = iy0; iy <= iy1; ++iy) {
      for (auto ix = ix0; ix <= ix1; ++ix) {
        const std::size_t cell = static_cast<std::size_t>(iy) * grid.nx + static_cast<std::size_t>(ix);
        if (claimed[cell]) continue;
        const auto w = tri.barycentric(t, grid.cell_center(cell));
        constexpr double kEps = -1e-12;
        if (w[0] >= kEps && w[1] >= kEps && w[2] >= kEps) {
          claimed[cell] = 1;
          fn(cell, Barycentric{t, w});
        }
      }
    }
  }
}

}  // namespace mdsd::interp
