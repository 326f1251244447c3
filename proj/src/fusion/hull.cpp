// Copyright 2026 The Contextual Speed Controller Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csc/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace csc
{
namespace
{

double cross(const Point2 & o, const Point2 & a, const Point2 & b)
{
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool lexLess(const Point2 & a, const Point2 & b)
{
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

std::vector<Point2> distinctGround(std::span<const Point3> points)
{
  std::vector<Point2> ground;
  ground.reserve(points.size());
  for (const auto & p : points) {
    ground.push_back({p.x, p.y});
  }
  std::sort(ground.begin(), ground.end(), lexLess);
  ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
  return ground;
}

/// Andrew's monotone chain over lexicographically sorted distinct points.
Polygon convexHull(const std::vector<Point2> & pts)
{
  const size_t n = pts.size();
  Polygon hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double signedArea(const Polygon & poly)
{
  double a = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const auto & p = poly[i];
    const auto & q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

bool onSegment(const Point2 & p, const Point2 & a, const Point2 & b)
{
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segmentsIntersect(const Point2 & p1, const Point2 & p2, const Point2 & q1, const Point2 & q2)
{
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return (d1 == 0 && onSegment(p1, q1, q2)) || (d2 == 0 && onSegment(p2, q1, q2)) ||
         (d3 == 0 && onSegment(q1, p1, p2)) || (d4 == 0 && onSegment(q2, p1, p2));
}

/// Inside or on the boundary.
bool coveredBy(const Point2 & p, const Polygon & poly)
{
  bool inside = false;
  for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto & a = poly[i];
    const auto & b = poly[j];
    if (cross(a, b, p) == 0.0 && onSegment(p, a, b)) {
      return true;
    }
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

double wrapAngle(double a)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

/// k-nearest-neighbour boundary walk: from the lowest point, repeatedly take
/// the most clockwise of the k nearest remaining points whose edge does not
/// cross the hull built so far. Empty result means this k failed.
Polygon knnConcaveAttempt(const std::vector<Point2> & pts, size_t k)
{
  const size_t n = pts.size();
  const size_t first = static_cast<size_t>(std::distance(
    pts.begin(), std::min_element(pts.begin(), pts.end(), [](const Point2 & a, const Point2 & b) {
      return a.y < b.y || (a.y == b.y && a.x < b.x);
    })));

  std::vector<bool> used(n, false);
  std::vector<size_t> hull{first};
  used[first] = true;
  size_t current = first;
  double heading = 0.0;

  std::vector<size_t> candidates;
  while (true) {
    const bool may_close = hull.size() >= 3;
    candidates.clear();
    for (size_t i = 0; i < n; ++i) {
      if (!used[i] || (may_close && i == first)) candidates.push_back(i);
    }
    if (candidates.empty()) {
      return {};
    }
    const Point2 & c = pts[current];
    auto dist2 = [&](size_t i) {
      const double dx = pts[i].x - c.x;
      const double dy = pts[i].y - c.y;
      return dx * dx + dy * dy;
    };
    const size_t kk = std::min(k, candidates.size());
    std::partial_sort(
      candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(kk), candidates.end(),
      [&](size_t a, size_t b) { return dist2(a) < dist2(b) || (dist2(a) == dist2(b) && a < b); });
    candidates.resize(kk);

    auto turn = [&](size_t i) {
      return wrapAngle(std::atan2(pts[i].y - c.y, pts[i].x - c.x) - heading);
    };
    std::sort(candidates.begin(), candidates.end(), [&](size_t a, size_t b) {
      const double ta = turn(a);
      const double tb = turn(b);
      return ta < tb || (ta == tb && dist2(a) < dist2(b));
    });

    std::optional<size_t> chosen;
    for (size_t cand : candidates) {
      const bool closing = cand == first;
      bool crosses = false;
      // skip the edge ending at `current`; when closing also skip the first edge
      const size_t edges = hull.size() - 1;
      for (size_t e = 0; e + 1 < edges && !crosses; ++e) {
        if (closing && e == 0) continue;
        crosses = segmentsIntersect(c, pts[cand], pts[hull[e]], pts[hull[e + 1]]);
      }
      if (!crosses) {
        chosen = cand;
        break;
      }
    }
    if (!chosen) {
      return {};
    }
    if (*chosen == first) {
      break;
    }
    heading = std::atan2(pts[*chosen].y - c.y, pts[*chosen].x - c.x);
    used[*chosen] = true;
    hull.push_back(*chosen);
    current = *chosen;
    if (hull.size() > n) {
      return {};
    }
  }

  Polygon poly;
  poly.reserve(hull.size());
  for (size_t idx : hull) poly.push_back(pts[idx]);
  if (poly.size() < 3 || std::abs(signedArea(poly)) == 0.0) {
    return {};
  }
  for (const auto & p : pts) {
    if (!coveredBy(p, poly)) return {};
  }
  if (signedArea(poly) < 0.0) {
    std::reverse(poly.begin(), poly.end());
  }
  return poly;
}

}  // namespace

Polygon groundHull(std::span<const Point3> points, HullKind kind, size_t concave_k)
{
  const auto ground = distinctGround(points);
  if (ground.size() < 3) {
    throw DegenerateCluster("groundHull: fewer than 3 distinct ground-plane points");
  }
  Polygon convex = convexHull(ground);
  if (convex.size() < 3) {
    throw DegenerateCluster("groundHull: ground-plane points are collinear");
  }
  if (kind == HullKind::Convex || ground.size() == 3) {
    return convex;
  }
  const size_t k_first = std::max<size_t>(concave_k, 3);
  const size_t k_last = std::min(ground.size(), k_first + 32);
  for (size_t k = k_first; k < k_last; ++k) {
    Polygon concave = knnConcaveAttempt(ground, k);
    if (!concave.empty()) {
      return concave;
    }
  }
  return convex;
}

}  // namespace csc
