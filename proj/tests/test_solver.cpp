#include "medpers/solver.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace medpers;

namespace {

StochasticMatrixd mat(double a, double b, double c, double d) {
  DenseMatrix<double> m(2, 2);
  m << a, b, c, d;
  return StochasticMatrixd::validate(m);
}

GameSpec fig19() {
  GameSpec g;
  g.prior = 0.5;
  g.sender = PiecewiseUtility::interpolate({{0, 5}, {0.25, 7}, {0.5, 4}, {0.75, 7}, {1, 5}});
  g.mediator =
      PiecewiseUtility::interpolate({{0, 0.4}, {1. / 3, 1}, {0.5, 0.6}, {2. / 3, 1}, {1, 0.4}});
  g.receiver = PiecewiseUtility::interpolate({{0, 1}, {0.5, 0.5}, {1, 1}});
  return g;
}

GameSpec fig20() {
  const double lo = 150. / 843, hi = 150. / 157;
  GameSpec g;
  g.prior = 0.3;
  g.sender = PiecewiseUtility::interpolate({{0, 0}, {0.2, 0}, {0.2, -100}, {hi, -100}, {hi, 0}, {1, 0}})
                 .with_singletons({{0.2, 1}, {0.5, 1}});
  g.mediator = PiecewiseUtility::interpolate({{0, 0}, {lo, 1}, {0.5, 0}, {hi, 1}, {1, 0}});
  g.receiver = PiecewiseUtility::interpolate({{0, 1}, {0.5, 0.5}, {1, 1}});
  return g;
}

oracle::Mat2 plain(const StochasticMatrixd& s) {
  return {{{s(0, 0), s(0, 1)}, {s(1, 0), s(1, 1)}}};
}

}  // namespace

TEST(Bp, KgBenchmark) {
  const auto s = bp_solve(PiecewiseUtility::step({0.5}, {0, 1}), 0.3);
  EXPECT_NEAR(s.value, 0.6, 1e-9);
  ASSERT_EQ(s.tau.size(), 2u);
  EXPECT_NEAR(s.tau.lowest(), 0.0, 1e-9);
  EXPECT_NEAR(s.tau.highest(), 0.5, 1e-9);
  EXPECT_NEAR(s.x(0, 0), 4. / 7, 1e-9);
  EXPECT_NEAR(s.x(0, 1), 0.0, 1e-9);
  EXPECT_FALSE(s.epsilon_optimal);
}

TEST(Bp, LeftContinuousStepIsEpsilonOptimal) {
  const auto s = bp_solve(PiecewiseUtility::step({0.5}, {0, 1}, Continuity::Left), 0.3);
  EXPECT_NEAR(s.value, 0.6, 1e-9);
  EXPECT_TRUE(s.epsilon_optimal);
}

TEST(Bp, ConcaveUtilityBabbles) {
  const auto s = bp_solve(PiecewiseUtility::interpolate({{0, 0}, {0.4, 1}, {1, 0.5}}), 0.4);
  EXPECT_TRUE(s.tau.is_degenerate());
}

TEST(Bp, ValueMatchesEnvelopeOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 40; ++t) {
    std::vector<std::pair<double, double>> pts{{0, u(rng)}};
    for (int i = 1; i < 5; ++i) pts.push_back({i / 5.0, u(rng)});
    pts.push_back({1, u(rng)});
    const auto f = PiecewiseUtility::interpolate(pts);
    const double prior = 0.05 + 0.9 * u(rng);
    const auto s = bp_solve(f, prior);
    EXPECT_NEAR(s.value, oracle::envelope_at([&](double b) { return f(b); }, 0, 1, 100, prior),
                1e-9);
    EXPECT_NEAR(expected_utility(f, s.tau), s.value, 1e-9);
  }
}

TEST(SenderBr, Fig19) {
  const auto g = fig19();
  const auto r = sender_best_response(g.sender, mat(2. / 3, 1. / 3, 1. / 3, 2. / 3), 0.5);
  EXPECT_NEAR(r.value, 6.0, 1e-9);
  EXPECT_NEAR(r.x(0, 0), 1.0, 1e-9);
  EXPECT_NEAR(r.x(1, 1), 1.0, 1e-9);
}

TEST(SenderBr, BabblingWinsTies) {
  const auto r = sender_best_response(PiecewiseUtility::affine(1, 0), mat(0.7, 0.2, 0.3, 0.8), 0.4);
  EXPECT_TRUE(r.babbling);
  EXPECT_NEAR(r.value, 0.4, 1e-12);
}

TEST(SenderBr, NeverBelowGridOracle) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 12; ++t) {
    const auto sigma = StochasticMatrixd::binary(u(rng), u(rng));
    if (!is_full_rank(sigma)) continue;
    std::vector<std::pair<double, double>> pts{{0, u(rng)}};
    for (int i = 1; i < 4; ++i) pts.push_back({i / 4.0, u(rng)});
    pts.push_back({1, u(rng)});
    const auto f = PiecewiseUtility::interpolate(pts);
    const double prior = 0.1 + 0.8 * u(rng);
    const auto r = sender_best_response(f, sigma, prior);
    const double grid = oracle::sender_value([&](double b) { return f(b); }, plain(sigma), prior,
                                            0.01);
    EXPECT_GE(r.value, grid - 1e-9);
    EXPECT_LE(r.value, grid + 0.02);
    EXPECT_NEAR(expected_utility(f, induced_tau(compose(sigma, r.x), Belief(prior))), r.value,
                1e-7);
  }
}

TEST(MediatorBr, Fig19) {
  const auto g = fig19();
  const auto r = mediator_best_response(g.mediator, StochasticMatrixd::identity(2), 0.5);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
  ASSERT_EQ(r.tau.size(), 2u);
  EXPECT_NEAR(r.tau.lowest(), 1. / 3, 1e-9);
  EXPECT_NEAR(r.tau.highest(), 2. / 3, 1e-9);
}

TEST(MediatorBr, ConvexUtilityKeepsEverything) {
  const auto r = mediator_best_response(PiecewiseUtility::interpolate({{0, 1}, {0.5, 0}, {1, 1}}),
                                        mat(0.8, 0.3, 0.2, 0.7), 0.4);
  EXPECT_NEAR(std::abs(r.sigma(0, 0) - r.sigma(0, 1)), 1.0, 1e-9);
}

TEST(Check, Fig19Equilibria) {
  const auto g = fig19();
  const auto eq = check_equilibrium(g, StochasticMatrixd::identity(2), mat(2. / 3, 1. / 3, 1. / 3, 2. / 3));
  EXPECT_TRUE(eq.verified);
  EXPECT_NEAR(eq.sender_value, 6.0, 1e-9);

  const auto bp = check_equilibrium(g, mat(0.75, 0.25, 0.25, 0.75), StochasticMatrixd::identity(2));
  EXPECT_FALSE(bp.verified);
  EXPECT_NEAR(bp.mediator_gap, 0.15, 1e-9);
  const auto dev = compose(bp.mediator_deviation.sigma, mat(0.75, 0.25, 0.25, 0.75));
  const auto tau = induced_tau(dev, Belief(0.5));
  EXPECT_NEAR(tau.lowest(), 1. / 3, 1e-9);

  const auto babble = StochasticMatrixd::uninformative(2, 2);
  EXPECT_TRUE(check_equilibrium(g, babble, babble).verified);
}

TEST(Check, Fig20Equilibrium) {
  const auto g = fig20();
  const auto c = check_equilibrium(g, StochasticMatrixd::identity(2), mat(0.01, 0.5, 0.99, 0.5));
  EXPECT_TRUE(c.verified) << c.sender_gap << " " << c.mediator_gap;
  ASSERT_EQ(c.tau.size(), 2u);
  EXPECT_NEAR(c.tau.lowest(), 0.1779, 1e-3);
  EXPECT_NEAR(c.tau.highest(), 0.9554, 1e-3);
  EXPECT_NEAR(c.tau.atoms()[0].prob, 0.843, 1e-3);

  const auto bp = bp_solve(g.sender, g.prior);
  EXPECT_NEAR(bp.tau.lowest(), 0.2, 1e-9);
  EXPECT_NEAR(bp.tau.highest(), 0.5, 1e-9);
  const auto cmp = compare_outcomes(g, c.tau, bp.tau);
  EXPECT_EQ(cmp.rank, InformativenessRank::MediatedMore);
  EXPECT_TRUE(cmp.strictly_more_informative);
  EXPECT_TRUE(cmp.receiver_benefits);
}

// Under any strictly increasing three-step sender the natural pair near
// (3/8, 2/3) is reachable through this garbling and beats the identity.
TEST(Check, Fig22ProfileHasSenderDeviation) {
  const ActionGame game{{"a1", "a2", "a3"},
                        {{1, 0}, {2. / 3, 2. / 3}, {0, 1}},
                        {{0, 0}, {2, 2}, {3, 3}},
                        {{0, 0}, {0, 0}, {0, 0}}};
  const auto iu = induce_belief_utilities(game);
  GameSpec g;
  g.prior = 0.5;
  g.sender = iu.sender;
  g.receiver = iu.receiver;
  g.mediator = PiecewiseUtility::interpolate({{0, 0}, {1. / 3, 1}, {0.55, 0}, {0.8, 1}, {1, 0}});
  const auto sigma = mat(6. / 7, 3. / 7, 1. / 7, 4. / 7);
  const auto c = check_equilibrium(g, StochasticMatrixd::identity(2), sigma);
  EXPECT_NEAR(c.tau.lowest(), 1. / 3, 1e-9);
  EXPECT_NEAR(c.tau.atoms()[0].prob, 9. / 14, 1e-9);
  EXPECT_NEAR(c.mediator_gap, 0.0, 1e-9);
  EXPECT_FALSE(c.verified);
  EXPECT_NEAR(c.sender_gap, 1. / 14, 1e-6);
  const double brute = oracle::sender_value([&](double b) { return g.sender(b); }, plain(sigma),
                                            0.5, 0.005);
  EXPECT_GT(brute, c.sender_value + 0.05);
}

TEST(Check, Fig22ArithmeticUnderOneFiveUtilities) {
  const auto u = PiecewiseUtility::step({1. / 3, 2. / 3}, {0, 1, 5});
  const auto tau = BeliefDistributiond::make({{1. / 3, 9. / 14}, {0.8, 5. / 14}}, 0.5);
  EXPECT_NEAR(expected_utility(u, tau), 34. / 14, 1e-12);
}

TEST(Search, Fig19Clusters) {
  auto g = fig19();
  g.grid = 0.02;
  const auto r = search_equilibria(g);
  ASSERT_EQ(r.clusters.size(), 2u);
  EXPECT_TRUE(r.clusters[0].representative.tau.is_degenerate());
  const auto& tau = r.clusters[1].representative.tau;
  EXPECT_NEAR(tau.lowest(), 1. / 3, 0.02);
  EXPECT_NEAR(tau.highest(), 2. / 3, 0.02);
  for (const auto& c : r.clusters) EXPECT_LE(c.best_gap, g.tol_search);
}

TEST(Compare, OutcomeDistanceAndRanks) {
  const auto a = BeliefDistributiond::make({{0.2, 0.5}, {0.6, 0.5}}, 0.4);
  const auto b = BeliefDistributiond::make({{0.3, 0.5}, {0.5, 0.5}}, 0.4);
  EXPECT_NEAR(outcome_distance(a, b), 0.1, 1e-12);
  GameSpec g;
  g.prior = 0.4;
  g.receiver = PiecewiseUtility::interpolate({{0, 1}, {0.5, 0.5}, {1, 1}});
  EXPECT_EQ(compare_outcomes(g, a, b).rank, InformativenessRank::MediatedMore);
  EXPECT_EQ(compare_outcomes(g, b, a).rank, InformativenessRank::UnmediatedMore);
  EXPECT_EQ(compare_outcomes(g, a, a).rank, InformativenessRank::Equivalent);
  const auto c = BeliefDistributiond::make({{0.1, 0.25}, {0.5, 0.75}}, 0.4);
  EXPECT_EQ(compare_outcomes(g, a, c).rank, InformativenessRank::Unranked);
}
