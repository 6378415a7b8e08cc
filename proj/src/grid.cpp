// SPDX-License-Identifier: Apache-2.0

#include "mdsd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mdsd/error.hpp"

namespace mdsd {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

void GridSpec::validate() const {
  if (nx == 0 || ny == 0) throw DomainError("grid resolution must be positive");
  if (!(extent.xmax > extent.xmin) || !(extent.ymax > extent.ymin)) {
    throw DomainError("grid extent must have positive width and height");
  }
}

IntensityGrid::IntensityGrid(GridSpec spec, double fill)
    : spec_(spec), values_(spec.size(), fill), valid_(spec.size(), 1) {
  spec_.validate();
}

std::size_t IntensityGrid::valid_count() const {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

double IntensityGrid::sample(Point2 p) const {
  const double fx = (p.x - spec_.extent.xmin) / spec_.dx() - 0.5;
  const double fy = (p.y - spec_.extent.ymin) / spec_.dy() - 0.5;
  const double max_x = static_cast<double>(spec_.nx - 1);
  const double max_y = static_cast<double>(spec_.ny - 1);
  const double cx = std::clamp(fx, 0.0, max_x);
  const double cy = std::clamp(fy, 0.0, max_y);
  const auto ix = std::min(static_cast<std::size_t>(cx), spec_.nx > 1 ? spec_.nx - 2 : 0);
  const auto iy = std::min(static_cast<std::size_t>(cy), spec_.ny > 1 ? spec_.ny - 2 : 0);
  const double tx = spec_.nx > 1 ? cx - static_cast<double>(ix) : 0.0;
  const double ty = spec_.ny > 1 ? cy - static_cast<double>(iy) : 0.0;
  const std::size_t ix1 = spec_.nx > 1 ? ix + 1 : ix;
  const std::size_t iy1 = spec_.ny > 1 ? iy + 1 : iy;
  const double v00 = value(ix, iy);
  const double v10 = value(ix1, iy);
  const double v01 = value(ix, iy1);
  const double v11 = value(ix1, iy1);
  return (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
}

}  // namespace mdsd
