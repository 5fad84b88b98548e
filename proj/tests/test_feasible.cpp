#include "medpers/feasible.hpp"
#include "medpers/geometry.hpp"

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

oracle::Mat2 plain(const StochasticMatrixd& s) {
  return {{{s(0, 0), s(0, 1)}, {s(1, 0), s(1, 1)}}};
}

}  // namespace

TEST(Geometry, HullAreaAndContainment) {
  const auto h = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}});
  ASSERT_EQ(h.size(), 4u);
  EXPECT_NEAR(polygon_area(h), 1.0, 1e-12);
  EXPECT_TRUE(is_convex(h));
  EXPECT_TRUE(polygon_contains(h, {0.2, 0.7}));
  EXPECT_TRUE(polygon_contains(h, {1.0, 0.5}));
  EXPECT_FALSE(polygon_contains(h, {1.01, 0.5}));
  EXPECT_NEAR(boundary_distance(h, {0.2, 0.5}), 0.2, 1e-12);
}

TEST(Families, Endpoints) {
  const auto x = family_experiment(Family::X1, 0.25);
  EXPECT_DOUBLE_EQ(x(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(x(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(family_experiment(Family::X3, 0.4)(1, 0), 0.6);
  EXPECT_STREQ(to_string(Family::X4), "X4");
}

TEST(Feasible, IdentityWingsAreQuadrants) {
  const auto set = wing_polygons(StochasticMatrixd::identity(2), 0.3);
  EXPECT_NEAR(polygon_area(set.left), 0.3 * 0.7, 1e-9);
  EXPECT_NEAR(polygon_area(set.right), 0.3 * 0.7, 1e-9);
  EXPECT_TRUE(set.contains({0.0, 1.0}));
  EXPECT_TRUE(set.contains({1.0, 0.0}));
}

TEST(Feasible, Fig14VertexA) {
  const auto sigma = mat(0.75, 1. / 3, 0.25, 2. / 3);
  const auto set = wing_polygons(sigma, 0.3);
  bool found = false;
  for (const auto& v : set.left) {
    found = found || (std::abs(v.b1 - 0.16) < 1e-6 && std::abs(v.b2 - 8. / 15) < 1e-6);
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(membership(sigma, 0.3, 0.16, 8. / 15).has_value());
  EXPECT_FALSE(membership(sigma, 0.3, 0.0, 1.0).has_value());
}

TEST(Feasible, SingularGarblingRejected) {
  try {
    wing_polygons(StochasticMatrixd::binary(0.4, 0.4), 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularGarbling);
  }
}

TEST(Feasible, WingsAreConvexAndContainCurves) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto sigma = random_experiment(rng);
    if (!is_full_rank(sigma) || std::abs(sigma(0, 0) - sigma(0, 1)) < 0.05) continue;
    const double prior = 0.1 + 0.8 * std::uniform_real_distribution<double>(0, 1)(rng);
    const auto set = wing_polygons(sigma, prior);
    EXPECT_TRUE(is_convex(set.left));
    EXPECT_TRUE(is_convex(set.right));
    for (const auto& curve : boundary_curves(sigma, prior, set.samples_per_curve)) {
      for (const auto& s : curve.samples) EXPECT_TRUE(set.contains(s.point, 1e-9));
    }
    for (const auto& curve : boundary_curves(sigma, prior, 33)) {
      for (const auto& s : curve.samples) EXPECT_TRUE(set.contains(s.point, 1e-5));
    }
  }
}

TEST(Feasible, MembershipAgreesWithGridOracle) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  for (int t = 0; t < 6; ++t) {
    const auto sigma = StochasticMatrixd::binary(u(rng), u(rng));
    if (!is_full_rank(sigma) || std::abs(sigma(0, 0) - sigma(0, 1)) < 0.1) continue;
    const double prior = 0.15 + 0.7 * u(rng);
    auto pts = oracle::grid_pairs(plain(sigma), prior, 0.02);
    std::vector<oracle::Pair> nat{{prior, prior}}, per{{prior, prior}};
    for (auto p : pts) (p.b1 <= prior ? nat : per).push_back(p);
    const auto hn = oracle::hull(nat), hp = oracle::hull(per);
    for (int k = 0; k < 400; ++k) {
      const oracle::Pair q{u(rng), u(rng)};
      const auto& h = q.b1 <= prior ? hn : hp;
      const double d = oracle::signed_distance(h, q);
      if (std::abs(d) < 0.03) continue;
      EXPECT_EQ(membership(sigma, prior, q.b1, q.b2).has_value(), d > 0)
          << q.b1 << ", " << q.b2;
      ++checked;
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(Feasible, ReconstructionRoundTrip) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 200; ++t) {
    const auto sigma = StochasticMatrixd::binary(u(rng), u(rng));
    if (!is_full_rank(sigma)) continue;
    const double prior = 0.05 + 0.9 * u(rng);
    const auto x = random_experiment(rng);
    const auto tau = induced_tau(compose(sigma, x), Belief(prior));
    const auto back = reconstruct_experiment(sigma, prior, tau);
    const auto again = induced_tau(compose(sigma, back), Belief(prior));
    ASSERT_EQ(again.size(), tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) {
      EXPECT_NEAR(again.atoms()[i].belief, tau.atoms()[i].belief, 1e-9);
      EXPECT_NEAR(again.atoms()[i].prob, tau.atoms()[i].prob, 1e-9);
    }
  }
}

TEST(Feasible, InfeasibleOutcomeIsNotSigmaPlausible) {
  const auto sigma = mat(2. / 3, 1. / 3, 1. / 3, 2. / 3);
  const auto tau = BeliefDistributiond::make({{0.0, 0.5}, {1.0, 0.5}}, 0.5);
  try {
    reconstruct_experiment(sigma, 0.5, tau);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSigmaPlausible);
  }
}

TEST(Feasible, RankedPairNests) {
  const auto r = nesting_report(mat(0.9, 0.01, 0.1, 0.99), mat(2. / 3, 0.25, 1. / 3, 0.75), 0.3,
                                2000);
  EXPECT_TRUE(r.nested);
  EXPECT_EQ(r.witness_failures, 0u);
  EXPECT_GT(r.witnesses_checked, 0u);
}

TEST(Feasible, UnrankedPairViolatesBothWays) {
  const auto a = mat(2. / 3, 1. / 3, 1. / 3, 2. / 3);
  const auto b = mat(0.8, 0.5, 0.2, 0.5);
  EXPECT_FALSE(nesting_report(a, b, 0.3, 2000).violations.empty());
  EXPECT_FALSE(nesting_report(b, a, 0.3, 2000).violations.empty());
}

TEST(Feasible, SymmetricGarblingHasSymmetricSet) {
  EXPECT_TRUE(symmetry_report(mat(2. / 3, 1. / 3, 1. / 3, 2. / 3), 0.5, 500).symmetric);
  EXPECT_FALSE(symmetry_report(mat(2. / 3, 0.25, 1. / 3, 0.75), 0.5, 500).symmetric);
}

TEST(Feasible, GeneralSamplerBarycenters) {
  DenseMatrix<double> m(3, 3);
  m << 1. / 3, 1. / 9, 2. / 3, 1. / 3, 4. / 9, 1. / 3, 1. / 3, 4. / 9, 0;
  const auto sigma = StochasticMatrixd::validate(m);
  std::size_t n = 0;
  visit_feasible_general(sigma, 0.3, 0.1, [&](const StochasticMatrixd& b,
                                              const BeliefDistributiond& tau) {
    EXPECT_EQ(b.realizations(), 3);
    double mean = 0;
    for (const auto& a : tau.atoms()) mean += a.belief * a.prob;
    EXPECT_NEAR(mean, 0.3, 1e-9);
    ++n;
  });
  EXPECT_GT(n, 100u);
}
