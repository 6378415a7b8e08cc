// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mdsd/clough_tocher.hpp"
#include "mdsd/delaunay.hpp"
#include "mdsd/error.hpp"

using namespace mdsd;
using namespace mdsd::interp;

namespace {

std::vector<Point2> random_points(std::size_t n, std::uint64_t seed, double w = 100, double h = 50) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0, w), uy(0, h);
  std::vector<Point2> p(n);
  for (auto& q : p) q = {ux(rng), uy(rng)};
  return p;
}

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

// Andrew's monotone chain.
double hull_area(std::vector<Point2> p) {
  std::sort(p.begin(), p.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<Point2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  double a = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& u = h[i];
    const auto& v = h[(i + 1) % h.size()];
    a += u.x * v.y - v.x * u.y;
  }
  return 0.5 * a;
}

double triangle_area(const Triangulation& t, std::size_t i) {
  const auto& [a, b, c] = t.triangles[i];
  return 0.5 * cross(t.points[a], t.points[b], t.points[c]);
}

}  // namespace

TEST(Delaunay, TrianglesAreCounterClockwiseAndCoverHull) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto pts = random_points(150, seed);
    const auto tri = delaunay(pts);
    double area = 0;
    for (std::size_t i = 0; i < tri.triangles.size(); ++i) {
      const double a = triangle_area(tri, i);
      EXPECT_GT(a, 0.0);
      area += a;
    }
    EXPECT_NEAR(area, hull_area(pts), 1e-9 * area) << "seed " << seed;
  }
}

TEST(Delaunay, EmptyCircumcircle) {
  const auto pts = random_points(120, 11);
  const auto tri = delaunay(pts);
  for (const auto& t : tri.triangles) {
    const Point2 a = tri.points[t[0]], b = tri.points[t[1]], c = tri.points[t[2]];
    const double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    const double a2 = a.x * a.x + a.y * a.y, b2 = b.x * b.x + b.y * b.y, c2 = c.x * c.x + c.y * c.y;
    const Point2 o{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                   (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
    const double r = distance(o, a);
    if (r > 1e4) continue;  // near-degenerate hull sliver
    for (std::size_t i = 0; i < tri.points.size(); ++i) {
      if (i == t[0] || i == t[1] || i == t[2]) continue;
      EXPECT_GE(distance(o, tri.points[i]), r * (1 - 1e-9));
    }
  }
}

TEST(Delaunay, Degenerate) {
  const std::vector<Point2> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  EXPECT_THROW(delaunay(line), MethodInfeasibleError);
  const std::vector<Point2> two{{0, 0}, {1, 0}, {0, 0}};
  EXPECT_THROW(delaunay(two), MethodInfeasibleError);
}

TEST(Delaunay, DuplicatesKeepFirstOccurrence) {
  const std::vector<Point2> pts{{0, 0}, {4, 0}, {0, 0}, {0, 4}, {4, 4}};
  const auto tri = delaunay(pts);
  ASSERT_EQ(tri.points.size(), 4u);
  EXPECT_EQ(tri.source_index, (std::vector<std::size_t>{0, 1, 3, 4}));
  EXPECT_EQ(tri.triangles.size(), 2u);
}

TEST(Delaunay, LocateAndNeighbors) {
  const std::vector<Point2> pts{{0, 0}, {2, 0}, {0, 2}};
  const auto tri = delaunay(pts);
  const auto b = tri.locate({0.5, 0.5});
  ASSERT_TRUE(b.has_value());
  EXPECT_NEAR(b->weights[0] + b->weights[1] + b->weights[2], 1.0, 1e-15);
  EXPECT_FALSE(tri.locate({2, 2}).has_value());
  const auto nbr = tri.vertex_neighbors();
  for (const auto& n : nbr) EXPECT_EQ(n.size(), 2u);
}

TEST(CloughTocher, ReproducesLinearFunctions) {
  const auto pts = random_points(60, 5, 10, 10);
  const auto tri = delaunay(pts);
  std::vector<double> v;
  for (const auto& p : tri.points) v.push_back(3.0 - 2.0 * p.x + 0.5 * p.y);
  const CloughTocher ct(tri, v);
  for (const auto& q : random_points(200, 6, 10, 10)) {
    const auto b = tri.locate(q);
    if (!b) continue;
    EXPECT_NEAR(ct(*b), 3.0 - 2.0 * q.x + 0.5 * q.y, 1e-9);
  }
}

TEST(CloughTocher, InterpolatesVerticesAndIsSmoothAcrossEdges) {
  const auto pts = random_points(40, 8, 10, 10);
  const auto tri = delaunay(pts);
  std::vector<double> v;
  for (const auto& p : tri.points) v.push_back(std::sin(0.4 * p.x) * std::cos(0.3 * p.y));
  const CloughTocher ct(tri, v);
  auto f = [&](Point2 p) { return ct(*tri.locate(p)); };
  for (std::size_t i = 0; i < tri.points.size(); ++i) EXPECT_NEAR(f(tri.points[i]), v[i], 1e-12);

  // One-sided normal derivatives at interior edge midpoints agree (C1).
  int checked = 0;
  const double h = 1e-6;
  for (const auto& t : tri.triangles) {
    for (int e = 0; e < 3; ++e) {
      const Point2 a = tri.points[t[e]], b = tri.points[t[(e + 1) % 3]];
      const Point2 m = 0.5 * (a + b);
      const double len = distance(a, b);
      const Point2 n{-(b.y - a.y) / len, (b.x - a.x) / len};
      const Point2 in = m + h * n, out = m - h * n;
      if (!tri.locate(out) || !tri.locate(m - 2 * h * n)) continue;
      const double fm = f(m);
      const double d_in = (-3 * fm + 4 * f(in) - f(m + 2 * h * n)) / (2 * h);
      const double d_out = (3 * fm - 4 * f(out) + f(m - 2 * h * n)) / (2 * h);
      EXPECT_NEAR(d_in, d_out, 1e-4);
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}
