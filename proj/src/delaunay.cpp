// SPDX-License-Identifier: Apache-2.0

#include "mdsd/delaunay.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>
#include <unordered_map>

#include "mdsd/error.hpp"

namespace mdsd::interp {

namespace {

using Tri = std::array<std::size_t, 3>;

long double orient_ld(const Point2& a, const Point2& b, const Point2& c) {
  return (static_cast<long double>(b.x) - a.x) * (static_cast<long double>(c.y) - a.y) -
         (static_cast<long double>(b.y) - a.y) * (static_cast<long double>(c.x) - a.x);
}

// > 0 when d lies strictly inside the circumcircle of counter-clockwise (a, b, c).
long double in_circle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const long double adx = static_cast<long double>(a.x) - d.x;
  const long double ady = static_cast<long double>(a.y) - d.y;
  const long double bdx = static_cast<long double>(b.x) - d.x;
  const long double bdy = static_cast<long double>(b.y) - d.y;
  const long double cdx = static_cast<long double>(c.x) - d.x;
  const long double cdy = static_cast<long double>(c.y) - d.y;
  const long double ad = adx * adx + ady * ady;
  const long double bd = bdx * bdx + bdy * bdy;
  const long double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

std::uint64_t edge_key(std::size_t a, std::size_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

// Adds triangles along reflex boundary vertices until the boundary is
// convex. Bowyer-Watson with a finite super triangle can leave slivers of
// the hull uncovered.
void fill_concavities(std::vector<Point2>& pts, std::vector<Tri>& tris) {
  for (int pass = 0; pass < 64; ++pass) {
    std::unordered_map<std::uint64_t, int> count;
    for (const auto& t : tris) {
      for (int e = 0; e < 3; ++e) {
        std::size_t a = t[e];
        std::size_t b = t[(e + 1) % 3];
        ++count[edge_key(std::min(a, b), std::max(a, b))];
      }
    }
    std::map<std::size_t, std::size_t> next;
    for (const auto& t : tris) {
      for (int e = 0; e < 3; ++e) {
        std::size_t a = t[e];
        std::size_t b = t[(e + 1) % 3];
        if (count[edge_key(std::min(a, b), std::max(a, b))] == 1) next[a] = b;
      }
    }
    bool changed = false;
    std::vector<std::uint8_t> used(pts.size(), 0);
    for (const auto& [a, b] : next) {
      if (used[a] || used[b]) continue;
      auto it = next.find(b);
      if (it == next.end()) continue;
      const std::size_t c = it->second;
      if (c == a || used[c]) continue;
      if (orient_ld(pts[a], pts[b], pts[c]) < 0) {
        tris.push_back({a, c, b});
        used[a] = used[b] = used[c] = 1;
        changed = true;
      }
    }
    if (!changed) return;
  }
}

}  // namespace

double orient(Point2 a, Point2 b, Point2 c) { return static_cast<double>(orient_ld(a, b, c)); }

std::array<double, 3> Triangulation::barycentric(std::size_t triangle, Point2 p) const {
  const auto& t = triangles[triangle];
  const Point2 a = points[t[0]];
  const Point2 b = points[t[1]];
  const Point2 c = points[t[2]];
  const double det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  const double w1 = ((p.x - a.x) * (c.y - a.y) - (p.y - a.y) * (c.x - a.x)) / det;
  const double w2 = ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)) / det;
  return {1.0 - w1 - w2, w1, w2};
}

std::optional<Barycentric> Triangulation::locate(Point2 p) const {
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    auto w = barycentric(t, p);
    if (w[0] >= -1e-12 && w[1] >= -1e-12 && w[2] >= -1e-12) return Barycentric{t, w};
  }
  return std::nullopt;
}

std::vector<std::vector<std::size_t>> Triangulation::vertex_neighbors() const {
  std::vector<std::vector<std::size_t>> nbr(points.size());
  for (const auto& t : triangles) {
    for (int e = 0; e < 3; ++e) {
      nbr[t[e]].push_back(t[(e + 1) % 3]);
      nbr[t[e]].push_back(t[(e + 2) % 3]);
    }
  }
  for (auto& n : nbr) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return nbr;
}

Triangulation delaunay(std::span<const Point2> input) {
  Triangulation out;
  {
    std::map<std::pair<double, double>, std::size_t> seen;
    for (std::size_t i = 0; i < input.size(); ++i) {
      if (seen.emplace(std::pair(input[i].x, input[i].y), i).second) {
        out.points.push_back(input[i]);
        out.source_index.push_back(i);
      }
    }
  }
  const std::size_t n = out.points.size();
  if (n < 3) throw MethodInfeasibleError("triangulation needs at least 3 distinct samples");

  // Normalize to the unit box for the predicates.
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = xmin;
  double xmax = -xmin;
  double ymax = -xmin;
  for (const auto& p : out.points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double scale = std::max(xmax - xmin, ymax - ymin);
  std::vector<Point2> pts;
  pts.reserve(n + 3);
  for (const auto& p : out.points) pts.push_back({(p.x - xmin) / scale, (p.y - ymin) / scale});

  bool collinear = true;
  for (std::size_t i = 2; i < n && collinear; ++i) {
    if (std::abs(static_cast<double>(orient_ld(pts[0], pts[1], pts[i]))) > 1e-12) collinear = false;
  }
  if (collinear) throw MethodInfeasibleError("samples are collinear; cannot triangulate");

  constexpr double kSuper = 1.0e3;
  pts.push_back({-kSuper, -kSuper});
  pts.push_back({kSuper, -kSuper});
  pts.push_back({0.5, kSuper});
  std::vector<Tri> tris{{n, n + 1, n + 2}};

  std::vector<std::uint8_t> bad;
  std::unordered_map<std::uint64_t, int> edge_count;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = pts[i];
    bad.assign(tris.size(), 0);
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (in_circle(pts[tris[t][0]], pts[tris[t][1]], pts[tris[t][2]], p) > 0) bad[t] = 1;
    }
    edge_count.clear();
    edges.clear();
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (!bad[t]) continue;
      for (int e = 0; e < 3; ++e) {
        std::size_t a = tris[t][e];
        std::size_t b = tris[t][(e + 1) % 3];
        ++edge_count[edge_key(std::min(a, b), std::max(a, b))];
        edges.emplace_back(a, b);
      }
    }
    std::vector<Tri> kept;
    kept.reserve(tris.size() + 2);
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (!bad[t]) kept.push_back(tris[t]);
    }
    for (const auto& [a, b] : edges) {
      if (edge_count[edge_key(std::min(a, b), std::max(a, b))] != 1) continue;
      // Cavity boundary edges keep their CCW direction, so (a, b, p) is CCW.
      if (orient_ld(pts[a], pts[b], p) > 0) kept.push_back({a, b, i});
    }
    tris.swap(kept);
  }

  std::vector<Tri> finite;
  for (const auto& t : tris) {
    if (t[0] < n && t[1] < n && t[2] < n) finite.push_back(t);
  }
  pts.resize(n);
  fill_concavities(pts, finite);
  if (finite.empty()) throw MethodInfeasibleError("degenerate triangulation");
  out.triangles = std::move(finite);
  return out;
}

}  // namespace mdsd::interp
