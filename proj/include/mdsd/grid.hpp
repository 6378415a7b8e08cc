// SPDX-License-Identifier: Apache-2.0
//
// Planar geometry and the masked raster shared by the channel, interpolation
// and evaluation modules. Coordinates are in km. Rasters are cell centred and
// stored row-major with row 0 on the ymin edge.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mdsd {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2, Point2) = default;
};

double distance(Point2 a, Point2 b);

struct Extent {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool contains(Point2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  friend bool operator==(const Extent&, const Extent&) = default;
};

struct GridSpec {
  Extent extent;
  std::size_t nx = 100;
  std::size_t ny = 50;

  std::size_t size() const { return nx * ny; }
  double dx() const { return extent.width() / static_cast<double>(nx); }
  double dy() const { return extent.height() / static_cast<double>(ny); }
  Point2 cell_center(std::size_t ix, std::size_t iy) const {
    return {extent.xmin + (static_cast<double>(ix) + 0.5) * dx(),
            extent.ymin + (static_cast<double>(iy) + 0.5) * dy()};
  }
  Point2 cell_center(std::size_t index) const { return cell_center(index % nx, index / nx); }
  void validate() const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class IntensityGrid {
 public:
  IntensityGrid() = default;
  /// All cells set to fill and marked valid.
  explicit IntensityGrid(GridSpec spec, double fill = 0.0);

  const GridSpec& spec() const { return spec_; }
  std::size_t size() const { return values_.size(); }

  double& value(std::size_t ix, std::size_t iy) { return values_[iy * spec_.nx + ix]; }
  double value(std::size_t ix, std::size_t iy) const { return values_[iy * spec_.nx + ix]; }
  bool valid(std::size_t ix, std::size_t iy) const { return valid_[iy * spec_.nx + ix] != 0; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<std::uint8_t>& mask() { return valid_; }
  const std::vector<std::uint8_t>& mask() const { return valid_; }

  void set(std::size_t index, double v, bool is_valid = true) {
    values_[index] = v;
    valid_[index] = is_valid ? 1 : 0;
  }

  std::size_t valid_count() const;

  /// Bilinear interpolation between cell centres, clamped to the outermost
  /// centres. Invalid cells are not inspected; callers use fully valid fields.
  double sample(Point2 p) const;

 private:
  GridSpec spec_;
  std::vector<double> values_;
  std::vector<std::uint8_t> valid_;
};

}  // namespace mdsd
