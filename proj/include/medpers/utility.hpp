#pragma once

#include "medpers/info.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace medpers {

/// Affine function slope * beta + intercept on an interval whose ends are
/// independently open or closed. lo == hi denotes a single point.
struct Piece {
  double lo = 0;
  double hi = 1;
  bool lo_closed = true;
  bool hi_closed = true;
  double slope = 0;
  double intercept = 0;

  bool is_point() const { return lo == hi; }
  double at(double beta) const { return slope * beta + intercept; }
};

enum class Continuity { Right, Left };

/// Utility over posterior beliefs: finitely many affine pieces partitioning a
/// domain [lo, hi] of [0, 1]. Isolated points may carry their own value.
class PiecewiseUtility {
 public:
  /// The zero function on [0, 1].
  PiecewiseUtility() : PiecewiseUtility(std::vector<Piece>{Piece{}}) {}

  /// Validates that the pieces, in order, partition [lo, hi] exactly.
  static PiecewiseUtility from_pieces(std::vector<Piece> pieces);

  /// Linear interpolation between (beta, value) points. Two consecutive points
  /// with the same beta form a jump; the value at the jump comes from the
  /// right-hand side by default.
  static PiecewiseUtility interpolate(std::vector<std::pair<double, double>> points,
                                      Continuity continuity = Continuity::Right);

  static PiecewiseUtility affine(double slope, double intercept, double lo = 0, double hi = 1);

  /// Step function: levels[i] on the i-th cell cut by the increasing cutoffs.
  static PiecewiseUtility step(const std::vector<double>& cutoffs,
                               const std::vector<double>& levels,
                               Continuity continuity = Continuity::Right);

  /// Copy with the given isolated points overriding the value there.
  PiecewiseUtility with_singletons(const std::vector<std::pair<double, double>>& points) const;

  double operator()(double beta) const;

  const std::vector<Piece>& pieces() const { return pieces_; }
  double lo() const { return pieces_.front().lo; }
  double hi() const { return pieces_.back().hi; }

  /// Every piece endpoint, ascending and distinct.
  std::vector<double> breakpoints() const;

  /// Largest absolute slope over all pieces.
  double max_slope() const;

 private:
  explicit PiecewiseUtility(std::vector<Piece> pieces);

  const Piece& covering(double beta) const;

  std::vector<Piece> pieces_;
  std::vector<double> breaks_;
};

double eval_utility(const PiecewiseUtility& u, Belief beta);

double expected_utility(const PiecewiseUtility& u, const BeliefDistributiond& tau);

/// Finite-action game with two states. Payoff rows are indexed by action and
/// hold (payoff in state 1, payoff in state 2).
struct ActionGame {
  std::vector<std::string> actions;
  std::vector<std::array<double, 2>> receiver;
  std::vector<std::array<double, 2>> sender;
  std::vector<std::array<double, 2>> mediator;
};

struct InducedUtilities {
  PiecewiseUtility sender;
  PiecewiseUtility mediator;
  PiecewiseUtility receiver;
};

/// Receiver's optimal action at a belief: highest expected payoff, ties to
/// the action the sender likes best, remaining ties to the lowest index.
std::size_t receiver_action(const ActionGame& game, double beta);

/// Belief-based utilities of all three players under the receiver's optimal
/// action with sender-favored tie-breaking.
InducedUtilities induce_belief_utilities(const ActionGame& game);

struct Interval {
  double lo = 0;
  double hi = 0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double x, double tol = 0) const;
};

/// A vertex of the upper concave envelope. `attained` is false when the value
/// is only the limit of the utility at an open end.
struct HullVertex {
  double beta = 0;
  double value = 0;
  bool attained = true;
};

struct Concavification {
  PiecewiseUtility envelope;
  std::vector<HullVertex> vertices;
  std::vector<Interval> coincident;
  double lo = 0;
  double hi = 1;

  bool coincides(double beta, double tol = 1e-12) const;

  /// Index i of the envelope segment [vertices[i], vertices[i+1]] holding
  /// beta; the last segment when beta is the right end.
  std::size_t segment(double beta) const;

  /// Smallest (largest) coincident belief in [from, to]; false when none.
  /// An interval with an open end yields that end as a limit point.
  bool first_coincident(double from, double to, double& out) const;
  bool last_coincident(double from, double to, double& out) const;
};

/// Upper concave envelope of u on [lo, hi] over the candidate set formed by
/// the piece endpoints, isolated points, a uniform grid of `grid` cells and
/// the domain ends. Open piece ends contribute their limits flagged as
/// unattained.
Concavification concavify(const PiecewiseUtility& u, double lo, double hi, int grid = 2048);

}  // namespace medpers
