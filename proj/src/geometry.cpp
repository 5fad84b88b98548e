#include "medpers/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace medpers {

namespace {

double cross(const BeliefPair& o, const BeliefPair& a, const BeliefPair& b) {
  return (a.b1 - o.b1) * (b.b2 - o.b2) - (a.b2 - o.b2) * (b.b1 - o.b1);
}

double segment_distance(BeliefPair p, BeliefPair a, BeliefPair b) {
  const double dx = b.b1 - a.b1;
  const double dy = b.b2 - a.b2;
  const double len2 = dx * dx + dy * dy;
  double t = 0;
  if (len2 > 0) t = std::clamp(((p.b1 - a.b1) * dx + (p.b2 - a.b2) * dy) / len2, 0.0, 1.0);
  const double ex = a.b1 + t * dx - p.b1;
  const double ey = a.b2 + t * dy - p.b2;
  return std::sqrt(ex * ex + ey * ey);
}

}  // namespace

std::vector<BeliefPair> convex_hull(std::vector<BeliefPair> points) {
  std::sort(points.begin(), points.end(), [](const BeliefPair& a, const BeliefPair& b) {
    return a.b1 < b.b1 || (a.b1 == b.b1 && a.b2 < b.b2);
  });
  std::vector<BeliefPair> unique;
  for (const auto& p : points) {
    const bool dup = std::any_of(unique.end() - std::min<std::ptrdiff_t>(unique.size(), 4),
                                 unique.end(), [&](const BeliefPair& q) {
                                   return std::abs(p.b1 - q.b1) <= 1e-9 &&
                                          std::abs(p.b2 - q.b2) <= 1e-9;
                                 });
    if (!dup) unique.push_back(p);
  }
  if (unique.size() < 3) return unique;

  std::vector<BeliefPair> hull(2 * unique.size());
  std::size_t k = 0;
  for (const auto& p : unique) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-15) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = unique.rbegin() + 1; it != unique.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 1e-15) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(const std::vector<BeliefPair>& polygon) {
  double twice = 0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto& a = polygon[i];
    const auto& b = polygon[(i + 1) % polygon.size()];
    twice += a.b1 * b.b2 - b.b1 * a.b2;
  }
  return std::abs(twice) / 2;
}

bool polygon_contains(const std::vector<BeliefPair>& polygon, BeliefPair p, double tol) {
  if (polygon.empty()) return false;
  if (polygon.size() < 3) {
    if (polygon.size() == 1) return segment_distance(p, polygon[0], polygon[0]) <= tol;
    return segment_distance(p, polygon[0], polygon[1]) <= tol;
  }
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto& a = polygon[i];
    const auto& b = polygon[(i + 1) % polygon.size()];
    const double len = std::hypot(b.b1 - a.b1, b.b2 - a.b2);
    if (cross(a, b, p) < -tol * len) return false;
  }
  return true;
}

double boundary_distance(const std::vector<BeliefPair>& polygon, BeliefPair p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    best = std::min(best, segment_distance(p, polygon[i], polygon[(i + 1) % polygon.size()]));
  }
  return best;
}

bool is_convex(const std::vector<BeliefPair>& polygon, double tol) {
  const std::size_t n = polygon.size();
  if (n < 3) return true;
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(polygon[i], polygon[(i + 1) % n], polygon[(i + 2) % n]) < -tol) return false;
  }
  return true;
}

}  // namespace medpers
