#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's algorithms; inputs and outputs are plain doubles.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

using Mat2 = std::array<std::array<double, 2>, 2>;  // [row][col]

struct Pair {
  double b1, b2;
};

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

/// Posterior of the second state after each row of the composite, and the
/// signal probabilities. Rows of probability zero report the prior.
inline std::array<double, 4> bayes(const Mat2& b, double prior) {
  std::array<double, 4> out{};
  for (int s = 0; s < 2; ++s) {
    const double q = (1 - prior) * b[s][0] + prior * b[s][1];
    out[s] = q > 0 ? prior * b[s][1] / q : prior;
    out[2 + s] = q;
  }
  return out;
}

/// Posterior pairs (ordered by signal) of sigma * x over a grid of binary
/// experiments x = (a b; 1-a 1-b) with the given step; null signals skipped.
inline std::vector<Pair> grid_pairs(const Mat2& sigma, double prior, double step) {
  std::vector<Pair> out;
  const int n = static_cast<int>(std::lround(1 / step));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double a = double(i) / n;
      const double b = double(j) / n;
      const auto r = bayes(mul(sigma, Mat2{{{a, b}, {1 - a, 1 - b}}}), prior);
      if (r[2] <= 1e-12 || r[3] <= 1e-12) continue;
      out.push_back({r[0], r[1]});
    }
  }
  return out;
}

inline double cross(Pair o, Pair a, Pair b) {
  return (a.b1 - o.b1) * (b.b2 - o.b2) - (a.b2 - o.b2) * (b.b1 - o.b1);
}

/// Counterclockwise hull (monotone chain).
inline std::vector<Pair> hull(std::vector<Pair> pts) {
  std::sort(pts.begin(), pts.end(), [](Pair a, Pair b) {
    return a.b1 < b.b1 || (a.b1 == b.b1 && a.b2 < b.b2);
  });
  if (pts.size() < 3) return pts;
  std::vector<Pair> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

inline double seg_distance(Pair p, Pair a, Pair b) {
  const double dx = b.b1 - a.b1, dy = b.b2 - a.b2;
  const double len = dx * dx + dy * dy;
  double t = len > 0 ? ((p.b1 - a.b1) * dx + (p.b2 - a.b2) * dy) / len : 0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.b1 - a.b1 - t * dx, p.b2 - a.b2 - t * dy);
}

/// Signed distance to a convex CCW polygon's boundary: positive inside.
inline double signed_distance(const std::vector<Pair>& poly, Pair p) {
  if (poly.size() < 3) return -1;
  double d = 1e300;
  bool inside = true;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Pair a = poly[i], b = poly[(i + 1) % poly.size()];
    d = std::min(d, seg_distance(p, a, b));
    if (cross(a, b, p) < 0) inside = false;
  }
  return inside ? d : -d;
}

/// Upper concave envelope at x of the function sampled at xs (O(n^2) chords).
inline double envelope_at(const std::function<double(double)>& u, double lo, double hi, int n,
                          double x) {
  std::vector<double> xs;
  for (int i = 0; i <= n; ++i) xs.push_back(lo + (hi - lo) * i / n);
  xs.push_back(x);
  double best = u(x);
  for (double a : xs) {
    if (a > x) continue;
    for (double b : xs) {
      if (b < x || b <= a) continue;
      const double w = (b - x) / (b - a);
      best = std::max(best, w * u(a) + (1 - w) * u(b));
    }
  }
  return best;
}

/// Largest expected utility over binary experiments on a grid composed with
/// sigma; the prior itself (babbling) is included.
inline double sender_value(const std::function<double(double)>& u, const Mat2& sigma,
                           double prior, double step) {
  double best = u(prior);
  const int n = static_cast<int>(std::lround(1 / step));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double a = double(i) / n, b = double(j) / n;
      const auto r = bayes(mul(sigma, Mat2{{{a, b}, {1 - a, 1 - b}}}), prior);
      best = std::max(best, r[2] * u(r[0]) + r[3] * u(r[1]));
    }
  }
  return best;
}

/// Mean-preserving spread test for two-atom outcomes: a distribution with
/// support {l1, h1} spreads one supported in [l2, h2] iff l1 <= l2 and
/// h2 <= h1 (both averaging to the same prior).
inline bool spreads(double l1, double h1, double l2, double h2, double tol = 1e-9) {
  return l1 <= l2 + tol && h2 <= h1 + tol;
}

/// Convex-order test for arbitrary finite distributions given as
/// (belief, prob) lists: equal means and E(x - t)+ no smaller under the spread
/// at every support point t.
inline bool convex_order(const std::vector<std::pair<double, double>>& spread,
                         const std::vector<std::pair<double, double>>& contracted,
                         double tol = 1e-9) {
  auto call = [](const std::vector<std::pair<double, double>>& d, double t) {
    double v = 0;
    for (auto [b, p] : d) v += p * std::max(b - t, 0.0);
    return v;
  };
  if (std::abs(call(spread, -1) - call(contracted, -1)) > tol) return false;
  for (const auto* d : {&spread, &contracted}) {
    for (auto [t, p] : *d) {
      if (call(spread, t) < call(contracted, t) - tol) return false;
    }
  }
  return true;
}

}  // namespace oracle
