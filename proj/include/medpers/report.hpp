#pragma once

#include "medpers/feasible.hpp"
#include "medpers/order.hpp"
#include "medpers/solver.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <ostream>

namespace medpers {

/// Reports carry this under "spec_version".
inline constexpr const char* kReportVersion = "1";

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

nlohmann::json matrix_json(const DenseMatrix<double>& m);
nlohmann::json tau_json(const BeliefDistributiond& tau);

nlohmann::json bp_json(const BpSolution& s);
nlohmann::json sender_json(const SenderResponse& r);
nlohmann::json mediator_json(const MediatorResponse& r);
nlohmann::json certificate_json(const EquilibriumCertificate& c);
nlohmann::json search_json(const SearchResult& r);
nlohmann::json comparison_json(const ComparisonReport& r, const BeliefDistributiond& tau_mp,
                               const BeliefDistributiond& tau_bp);
nlohmann::json blackwell_json(const BlackwellResult<double>& r);

/// Boundary samples and wing vertices. Each record has the columns
/// family, p, b1, b2, prob1, prob2; wing vertices use the family names
/// "natural-wing" and "perverse-wing" and their index as p.
void write_feasible_csv(std::ostream& out, const std::array<BoundaryCurve, 4>& curves,
                        const FeasibleSet& set);
nlohmann::json feasible_json(const std::array<BoundaryCurve, 4>& curves, const FeasibleSet& set);

}  // namespace medpers
