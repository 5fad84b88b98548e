#pragma once

#include "medpers/geometry.hpp"
#include "medpers/info.hpp"
#include "medpers/order.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace medpers {

/// The four extreme experiment families traced by the feasible-set boundary:
///   X1(p) = (1 p; 0 1-p),  X2(p) = (0 p; 1 1-p),
///   X3(p) = (p 1; 1-p 0),  X4(p) = (p 0; 1-p 1).
enum class Family { X1, X2, X3, X4 };

const char* to_string(Family family);

StochasticMatrixd family_experiment(Family family, double p);

struct CurveSample {
  double p = 0;
  BeliefPair point;
  double prob1 = 0;  ///< unconditional probability of signal 1
  double prob2 = 0;
};

struct BoundaryCurve {
  Family family = Family::X1;
  std::vector<CurveSample> samples;
};

/// Posterior pair of sigma * x at the prior. A signal with zero probability is
/// given the posterior it approaches as x moves along `direction` (the
/// derivative of an affine family); without a direction it is set to the prior.
CurveSample posterior_pair(const StochasticMatrixd& sigma, const StochasticMatrixd& x,
                           double prior, const DenseMatrix<double>* direction = nullptr);

/// Samples each family at n_points equispaced parameters in [0, 1].
std::array<BoundaryCurve, 4> boundary_curves(const StochasticMatrixd& sigma, double prior,
                                             int n_points);

/// The experiment x with induced_tau(sigma * x, prior) == tau, built as
/// x = sigma^{-1} B from the signal likelihoods B that tau prescribes. The
/// lower belief is tried on signal 1 first, then on signal 2.
StochasticMatrixd reconstruct_experiment(const StochasticMatrixd& sigma, double prior,
                                         const BeliefDistributiond& tau);

/// The inducing experiment for the ordered pair (b1 after signal 1, b2 after
/// signal 2), or nothing when the pair lies outside the feasible set.
std::optional<StochasticMatrixd> membership(const StochasticMatrixd& sigma, double prior,
                                            double b1, double b2);

/// Which quadrant around (prior, prior) a pair falls in. Natural pairs have
/// the low posterior after signal 1; perverse pairs after signal 2.
bool is_natural(BeliefPair p, double prior, double tol = 1e-12);
bool is_perverse(BeliefPair p, double prior, double tol = 1e-12);

struct FeasibleSet {
  StochasticMatrixd garbling = StochasticMatrixd::identity(2);
  double prior = 0.5;
  std::vector<BeliefPair> left;   ///< natural wing, counterclockwise
  std::vector<BeliefPair> right;  ///< perverse wing, counterclockwise
  BeliefPair origin;
  int samples_per_curve = 0;

  bool contains(BeliefPair p, double tol = 1e-9) const;
};

/// Convex hull of each wing of the boundary samples. Starting from n_points
/// samples per curve, the sampling is doubled until the total hull area moves
/// by less than 1e-6 (or 2^14 samples are reached). With refine == false the
/// first sampling is kept.
FeasibleSet wing_polygons(const StochasticMatrixd& sigma, double prior, int n_points = 256,
                          bool refine = true);

/// Random experiment with independent uniform columns.
StochasticMatrixd random_experiment(std::mt19937_64& rng);

struct NestingViolation {
  BeliefPair point;
  StochasticMatrixd x;  ///< experiment inducing the point through the smaller garbling
};

struct NestingReport {
  bool nested = true;
  std::size_t samples = 0;
  std::size_t witnesses_checked = 0;
  std::size_t witness_failures = 0;
  std::vector<NestingViolation> violations;
};

/// Pushes n_samples random experiments through s2 and checks every resulting
/// pair for membership in F(s1, prior). When s1 Blackwell-dominates s2 the
/// explicit preimage s1^{-1} s2 x is checked as well.
NestingReport nesting_report(const StochasticMatrixd& s1, const StochasticMatrixd& s2,
                             double prior, std::size_t n_samples, std::uint64_t seed = 1);

struct SymmetryReport {
  bool symmetric = true;
  std::size_t samples = 0;
  std::optional<BeliefPair> witness;
};

/// Tests whether the swapped pair of every sampled feasible pair is feasible.
SymmetryReport symmetry_report(const StochasticMatrixd& sigma, double prior,
                               std::size_t n_samples, std::uint64_t seed = 1);

/// Enumerates every m x 2 experiment whose columns lie on the simplex grid of
/// the given resolution and calls visit with the composite sigma * x and the
/// posterior distribution it induces.
void visit_feasible_general(
    const StochasticMatrixd& sigma, double prior, double resolution,
    const std::function<void(const StochasticMatrixd&, const BeliefDistributiond&)>& visit);

/// Collected form of visit_feasible_general; the result grows as
/// resolution^{-2(m-1)}, so keep it for small m or coarse grids.
std::vector<BeliefDistributiond> sample_feasible_general(const StochasticMatrixd& sigma,
                                                         double prior, double resolution);

}  // namespace medpers
