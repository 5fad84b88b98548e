#pragma once

#include "medpers/feasible.hpp"
#include "medpers/info.hpp"
#include "medpers/order.hpp"
#include "medpers/utility.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace medpers {

struct GameSpec {
  double prior = 0.5;
  PiecewiseUtility sender;
  PiecewiseUtility mediator;
  PiecewiseUtility receiver;
  double grid = 0.02;         ///< search step for experiments and garblings
  double tol_dev = 1e-6;      ///< largest deviation gain of a verified profile
  double tol_search = 1e-3;   ///< largest deviation gain kept by the search
  std::uint64_t seed = 1;
};

struct BpSolution {
  BeliefDistributiond tau = BeliefDistributiond::point_mass(0.5);
  StochasticMatrixd x = StochasticMatrixd::uninformative(2, 2);
  double value = 0;  ///< the supremum when epsilon_optimal
  bool epsilon_optimal = false;  ///< a support point is only a limit of the utility
};

/// Optimal unmediated persuasion: concavify the sender utility on [0, 1] and
/// split the prior between coincident beliefs of the envelope segment above it.
BpSolution bp_solve(const PiecewiseUtility& u_sender, double prior);

/// Density of the sender's search over a feasible set.
struct SenderSearch {
  int curve_samples = 257;   ///< samples per boundary family
  bool refine_wings = true;  ///< let the wing polygons refine to convergence
  int interior = 41;         ///< interior grid per axis and wing (0 disables)
  int golden_steps = 40;     ///< golden-section steps along each family
  int slice_bisections = 40;

  /// Coarse settings used inside equilibrium searches.
  static SenderSearch light();
};

struct SenderResponse {
  StochasticMatrixd x = StochasticMatrixd::uninformative(2, 2);
  BeliefDistributiond tau = BeliefDistributiond::point_mass(0.5);
  BeliefPair pair;
  double value = 0;
  bool babbling = true;
};

/// Sender's optimal experiment given the mediator's garbling. Ties go to the
/// uninformative experiment when it is optimal, otherwise to the
/// lexicographically smallest posterior pair (b1, b2).
SenderResponse sender_best_response(const PiecewiseUtility& u_sender,
                                    const StochasticMatrixd& sigma, double prior,
                                    const SenderSearch& search = {});

struct MediatorResponse {
  StochasticMatrixd sigma = StochasticMatrixd::identity(2);
  BeliefDistributiond tau = BeliefDistributiond::point_mass(0.5);
  double value = 0;
  bool epsilon_optimal = false;
};

/// Mediator's optimal garbling of x. Among optimal garblings the most
/// informative one is returned: the identity when it is optimal, otherwise
/// the widest coincident pair on the envelope segment above the prior.
MediatorResponse mediator_best_response(const PiecewiseUtility& u_mediator,
                                        const StochasticMatrixd& x, double prior);

struct EquilibriumCertificate {
  StochasticMatrixd x = StochasticMatrixd::uninformative(2, 2);
  StochasticMatrixd sigma = StochasticMatrixd::identity(2);
  BeliefDistributiond tau = BeliefDistributiond::point_mass(0.5);
  double sender_value = 0;
  double mediator_value = 0;
  double receiver_value = 0;
  double sender_gap = 0;
  double mediator_gap = 0;
  double tolerance = 0;
  bool verified = false;
  SenderResponse sender_deviation;
  MediatorResponse mediator_deviation;

  double gap() const { return std::max(sender_gap, mediator_gap); }
};

/// Deviation gains of both designers against the profile (x, sigma).
EquilibriumCertificate check_equilibrium(const GameSpec& game, const StochasticMatrixd& x,
                                         const StochasticMatrixd& sigma,
                                         const SenderSearch& search = {});

struct EquilibriumCluster {
  EquilibriumCertificate representative;
  std::size_t members = 0;   ///< grid profiles that passed the screen
  double best_gap = 0;       ///< gap of the representative after refinement
};

struct SearchResult {
  std::vector<EquilibriumCluster> clusters;
  std::size_t profiles = 0;
  std::size_t screened = 0;
  std::size_t within_tolerance = 0;  ///< grid profiles whose gain is within tol_dev
  double screen_tolerance = 0;
};

/// Grid sweep over experiments (a, b) and garblings (s1, s2), each the 2x2
/// matrix (v w; 1-v 1-w). Profiles whose deviation gains pass a screen are
/// grouped by outcome (posteriors within 0.02), the best few of each group are
/// refined locally, and groups whose refined gain is within tol_search are
/// reported.
SearchResult search_equilibria(const GameSpec& game);

enum class InformativenessRank { Equivalent, MediatedMore, UnmediatedMore, Unranked };

const char* to_string(InformativenessRank rank);

struct ComparisonReport {
  InformativenessRank rank = InformativenessRank::Unranked;
  bool strictly_more_informative = false;  ///< mediated outcome strictly spreads the other
  double sender_delta = 0;    ///< mediated minus unmediated expected utility
  double mediator_delta = 0;
  double receiver_delta = 0;
  bool receiver_benefits = false;
  MpsResult<double> mediated_spreads;    ///< is_mps(tau_mp, tau_bp)
  MpsResult<double> unmediated_spreads;  ///< is_mps(tau_bp, tau_mp)
};

ComparisonReport compare_outcomes(const GameSpec& game, const BeliefDistributiond& tau_mp,
                                  const BeliefDistributiond& tau_bp);

/// Distance between two outcomes of at most two atoms: the larger difference
/// of their lowest and of their highest posteriors.
double outcome_distance(const BeliefDistributiond& a, const BeliefDistributiond& b);

}  // namespace medpers
