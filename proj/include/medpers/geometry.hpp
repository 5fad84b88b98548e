#pragma once

#include <vector>

namespace medpers {

/// A pair of receiver posteriors: b1 after signal 1, b2 after signal 2.
struct BeliefPair {
  double b1 = 0;
  double b2 = 0;

  friend bool operator==(const BeliefPair&, const BeliefPair&) = default;
};

/// Convex hull, counterclockwise, collinear points dropped, near-duplicate
/// points (within 1e-9) merged.
std::vector<BeliefPair> convex_hull(std::vector<BeliefPair> points);

double polygon_area(const std::vector<BeliefPair>& polygon);

/// Containment in a counterclockwise convex polygon, boundary included up to tol.
bool polygon_contains(const std::vector<BeliefPair>& polygon, BeliefPair p, double tol = 1e-9);

/// Euclidean distance from p to the polygon's boundary.
double boundary_distance(const std::vector<BeliefPair>& polygon, BeliefPair p);

/// Whether consecutive edges of a polygon never turn clockwise.
bool is_convex(const std::vector<BeliefPair>& polygon, double tol = 1e-12);

}  // namespace medpers
