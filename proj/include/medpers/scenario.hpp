#pragma once

#include "medpers/solver.hpp"

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace medpers {

using Rational = boost::rational<std::int64_t>;

/// Exact value of "n", "n/d" or a plain decimal such as "0.25" or "-1.5e-2".
/// Throws Error(Schema) on anything else.
Rational parse_rational(const std::string& text);

/// "n" or "n/d" in lowest terms.
std::string format_rational(const Rational& r);

/// A number that may be written either as a JSON number or as a string
/// accepted by parse_rational.
double parse_number(const nlohmann::json& value);

/// Matrix entries kept exact as entered.
struct RationalMatrix {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<Rational> entries;  ///< row-major

  DenseMatrix<double> to_dense() const;
};

/// Flag syntax: rows separated by ';', entries by ',' ("6/7,3/7;1/7,4/7"),
/// or the word "identity" for the 2x2 identity.
RationalMatrix parse_matrix(const std::string& text);

/// Inverse of parse_matrix for exact matrices.
std::string format_matrix(const RationalMatrix& m);

/// A validated stochastic matrix from flag syntax.
StochasticMatrixd matrix_flag(const std::string& text);

struct Scenario {
  GameSpec game;
  std::optional<StochasticMatrixd> sigma;  ///< may be any m x m garbling
};

/// Builds a scenario from a parsed JSON document. Unknown keys anywhere in
/// the schema are rejected with Error(Schema).
Scenario scenario_from_json(const nlohmann::json& doc);

Scenario load_scenario(const std::string& path);

}  // namespace medpers
