#include "medpers/scenario.hpp"

#include <gtest/gtest.h>

using namespace medpers;
using nlohmann::json;

namespace {

ErrorKind kind_of(const json& doc) {
  try {
    scenario_from_json(doc);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "accepted " << doc.dump();
  return ErrorKind::Tolerance;
}

}  // namespace

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("6/7"), Rational(6, 7));
  EXPECT_EQ(parse_rational(" 0.25 "), Rational(1, 4));
  EXPECT_EQ(parse_rational("-1.5e-2"), Rational(-3, 200));
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
  EXPECT_EQ(format_rational(Rational(4, 8)), "1/2");
}

TEST(Rational, MatrixRoundTrip) {
  const std::string text = "6/7,3/7;1/7,4/7";
  EXPECT_EQ(format_matrix(parse_matrix(text)), text);
  EXPECT_EQ(format_matrix(parse_matrix("identity")), "1,0;0,1");
  EXPECT_THROW(parse_matrix("1,0;0"), Error);
  const auto m = matrix_flag(text);
  EXPECT_NEAR(m(1, 0), 1. / 7, 1e-15);
}

TEST(Scenario, Fig19Fixture) {
  const auto s = load_scenario(MEDPERS_FIXTURES "/fig19.json");
  EXPECT_DOUBLE_EQ(s.game.prior, 0.5);
  ASSERT_TRUE(s.sigma.has_value());
  EXPECT_NEAR((*s.sigma)(0, 0), 2. / 3, 1e-15);
  EXPECT_DOUBLE_EQ(s.game.sender(0.25), 7.0);
  EXPECT_DOUBLE_EQ(s.game.grid, 0.02);
}

TEST(Scenario, ActionUtilities) {
  const auto s = load_scenario(MEDPERS_FIXTURES "/kg.json");
  EXPECT_DOUBLE_EQ(s.game.sender(0.5), 1.0);
  EXPECT_DOUBLE_EQ(s.game.mediator(0.2), 0.8);
}

TEST(Scenario, ThreeSignalGarbling) {
  const auto s = load_scenario(MEDPERS_FIXTURES "/fig18.json");
  ASSERT_TRUE(s.sigma.has_value());
  EXPECT_EQ(s.sigma->realizations(), 3);
}

TEST(Scenario, RejectsUnknownKeys) {
  EXPECT_EQ(kind_of({{"prior", 0.3}, {"extra", 1}}), ErrorKind::Schema);
  EXPECT_EQ(kind_of({{"prior", 0.3}, {"search", {{"grdi", 0.1}}}}), ErrorKind::Schema);
  const auto extra = json::parse(
      R"({"prior": 0.3, "utilities": {"sender": {"type": "pwl", "points": [[0, 0], [1, 1]], "x": 1}}})");
  EXPECT_EQ(kind_of(extra), ErrorKind::Schema);
}

TEST(Scenario, RejectsBadValues) {
  EXPECT_EQ(kind_of({{"sigma", {{1, 0}, {0, 1}}}}), ErrorKind::Schema);
  EXPECT_EQ(kind_of({{"prior", 1.3}}), ErrorKind::Schema);
  EXPECT_EQ(kind_of({{"prior", 0.3}, {"sigma", {{0.5, 0.5}, {0.4, 0.5}}}}), ErrorKind::Schema);
  EXPECT_EQ(kind_of({{"prior", 0.3}, {"search", {{"grid", 0.0}}}}), ErrorKind::Schema);
  EXPECT_EQ(kind_of({{"prior", 0.3}, {"seed", "x"}}), ErrorKind::Schema);
}

TEST(Scenario, MissingUtilitiesAreZero) {
  const auto s = scenario_from_json({{"prior", "3/10"}});
  EXPECT_DOUBLE_EQ(s.game.prior, 0.3);
  EXPECT_DOUBLE_EQ(s.game.sender(0.7), 0.0);
  EXPECT_FALSE(s.sigma.has_value());
}
