#include "medpers/report.hpp"

#include <charconv>

namespace medpers {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

json matrix_json(const DenseMatrix<double>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json tau_json(const BeliefDistributiond& tau) {
  json atoms = json::array();
  for (const auto& a : tau.atoms()) atoms.push_back({a.belief, a.prob});
  return atoms;
}

json bp_json(const BpSolution& s) {
  return {{"tau", tau_json(s.tau)},
          {"x", matrix_json(s.x.matrix())},
          {"value", s.value},
          {"epsilon_optimal", s.epsilon_optimal}};
}

json sender_json(const SenderResponse& r) {
  return {{"x", matrix_json(r.x.matrix())},
          {"tau", tau_json(r.tau)},
          {"pair", {r.pair.b1, r.pair.b2}},
          {"value", r.value},
          {"babbling", r.babbling}};
}

json mediator_json(const MediatorResponse& r) {
  return {{"sigma", matrix_json(r.sigma.matrix())},
          {"tau", tau_json(r.tau)},
          {"value", r.value},
          {"epsilon_optimal", r.epsilon_optimal}};
}

json certificate_json(const EquilibriumCertificate& c) {
  return {{"verdict", c.verified ? "verified" : "refuted"},
          {"x", matrix_json(c.x.matrix())},
          {"sigma", matrix_json(c.sigma.matrix())},
          {"tau", tau_json(c.tau)},
          {"values",
           {{"sender", c.sender_value}, {"mediator", c.mediator_value},
            {"receiver", c.receiver_value}}},
          {"gaps", {{"sender", c.sender_gap}, {"mediator", c.mediator_gap}}},
          {"tolerance", c.tolerance},
          {"sender_deviation", sender_json(c.sender_deviation)},
          {"mediator_deviation", mediator_json(c.mediator_deviation)}};
}

json search_json(const SearchResult& r) {
  json clusters = json::array();
  for (const auto& c : r.clusters) {
    clusters.push_back({{"tau", tau_json(c.representative.tau)},
                        {"babbling", c.representative.tau.is_degenerate()},
                        {"members", c.members},
                        {"gap", c.best_gap},
                        {"representative", certificate_json(c.representative)}});
  }
  return {{"clusters", clusters},
          {"profiles", r.profiles},
          {"screened", r.screened},
          {"within_tolerance", r.within_tolerance},
          {"screen_tolerance", r.screen_tolerance},
          {"cluster_radius", 0.02}};
}

namespace {

json mps_json(const MpsResult<double>& m) {
  json out = {{"holds", m.holds}};
  if (m.transition) out["transition"] = matrix_json(*m.transition);
  if (m.holds) out["support"] = m.support;
  return out;
}

}  // namespace

json comparison_json(const ComparisonReport& r, const BeliefDistributiond& tau_mp,
                     const BeliefDistributiond& tau_bp) {
  return {{"tau_mediated", tau_json(tau_mp)},
          {"tau_unmediated", tau_json(tau_bp)},
          {"rank", to_string(r.rank)},
          {"strictly_more_informative", r.strictly_more_informative},
          {"deltas",
           {{"sender", r.sender_delta}, {"mediator", r.mediator_delta},
            {"receiver", r.receiver_delta}}},
          {"receiver_benefits", r.receiver_benefits},
          {"mediated_spreads_unmediated", mps_json(r.mediated_spreads)},
          {"unmediated_spreads_mediated", mps_json(r.unmediated_spreads)}};
}

json blackwell_json(const BlackwellResult<double>& r) {
  json out = {{"order", to_string(r.order)}};
  if (r.forward) out["gamma"] = matrix_json(*r.forward);
  if (r.backward) out["gamma_reverse"] = matrix_json(*r.backward);
  return out;
}

namespace {

std::pair<double, double> split(BeliefPair v, double prior) {
  if (std::abs(v.b2 - v.b1) <= kMergeTolerance) return {0.5, 0.5};
  const double p1 = (v.b2 - prior) / (v.b2 - v.b1);
  return {p1, 1 - p1};
}

}  // namespace

void write_feasible_csv(std::ostream& out, const std::array<BoundaryCurve, 4>& curves,
                        const FeasibleSet& set) {
  out << "family,p,b1,b2,prob1,prob2\n";
  for (const auto& curve : curves) {
    for (const auto& s : curve.samples) {
      out << to_string(curve.family) << ',' << format_double(s.p) << ','
          << format_double(s.point.b1) << ',' << format_double(s.point.b2) << ','
          << format_double(s.prob1) << ',' << format_double(s.prob2) << '\n';
    }
  }
  auto wing = [&](const char* name, const std::vector<BeliefPair>& poly) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const auto [p1, p2] = split(poly[i], set.prior);
      out << name << ',' << i << ',' << format_double(poly[i].b1) << ','
          << format_double(poly[i].b2) << ',' << format_double(p1) << ',' << format_double(p2)
          << '\n';
    }
  };
  wing("natural-wing", set.left);
  wing("perverse-wing", set.right);
}

json feasible_json(const std::array<BoundaryCurve, 4>& curves, const FeasibleSet& set) {
  json families = json::array();
  for (const auto& curve : curves) {
    json samples = json::array();
    for (const auto& s : curve.samples) {
      samples.push_back({s.p, s.point.b1, s.point.b2, s.prob1, s.prob2});
    }
    families.push_back({{"family", to_string(curve.family)}, {"samples", samples}});
  }
  auto poly = [](const std::vector<BeliefPair>& vs) {
    json out = json::array();
    for (const auto& v : vs) out.push_back({v.b1, v.b2});
    return out;
  };
  return {{"prior", set.prior},
          {"sigma", matrix_json(set.garbling.matrix())},
          {"columns", {"p", "b1", "b2", "prob1", "prob2"}},
          {"curves", families},
          {"natural_wing", poly(set.left)},
          {"perverse_wing", poly(set.right)},
          {"samples_per_curve", set.samples_per_curve}};
}

}  // namespace medpers
