// Command-line front end: feasible sets, solver modes and Blackwell order.

#include "medpers/feasible.hpp"
#include "medpers/order.hpp"
#include "medpers/report.hpp"
#include "medpers/scenario.hpp"
#include "medpers/solver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace medpers;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kSchema = 2, kSingular = 3, kRefuted = 4, kInternal = 5 };

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::SingularGarbling: return kSingular;
    case ErrorKind::Tolerance: return kInternal;
    default: return kSchema;
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error(ErrorKind::Schema, "cannot write " + out_path);
  out << text;
}

json envelope(const std::string& command, json body) {
  json out = {{"spec_version", kReportVersion}, {"command", command}};
  out.update(body);
  return out;
}

StochasticMatrixd require_sigma(const Scenario& s, const std::string& flag) {
  if (!flag.empty()) return matrix_flag(flag);
  if (s.sigma) return *s.sigma;
  throw Error(ErrorKind::Schema, "a garbling is required: pass --sigma or set \"sigma\"");
}

int run_feasible(const std::string& path, int points, const std::string& format,
                 double resolution, const std::string& out_path) {
  const Scenario s = load_scenario(path);
  if (!s.sigma) throw Error(ErrorKind::Schema, "scenario has no \"sigma\"");
  const double prior = s.game.prior;
  const StochasticMatrixd& sigma = *s.sigma;

  if (sigma.realizations() > 2) {
    // Larger garblings have no planar boundary; list the sampled outcomes.
    std::set<std::vector<std::pair<double, double>>> seen;
    std::vector<std::vector<std::pair<double, double>>> rows;
    visit_feasible_general(sigma, prior, resolution,
                           [&](const StochasticMatrixd&, const BeliefDistributiond& tau) {
                             std::vector<std::pair<double, double>> key;
                             for (const auto& a : tau.atoms()) {
                               key.emplace_back(std::round(a.belief * 1e9) / 1e9,
                                                std::round(a.prob * 1e9) / 1e9);
                             }
                             if (seen.insert(key).second) rows.push_back(key);
                           });
    std::ostringstream text;
    if (format == "csv") {
      text << "sample,atom,belief,prob\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < rows[i].size(); ++k) {
          text << i << ',' << k << ',' << format_double(rows[i][k].first) << ','
               << format_double(rows[i][k].second) << '\n';
        }
      }
    } else {
      json samples = json::array();
      for (const auto& r : rows) {
        json atoms = json::array();
        for (const auto& [b, p] : r) atoms.push_back({b, p});
        samples.push_back(atoms);
      }
      text << envelope("feasible", {{"prior", prior},
                                    {"sigma", matrix_json(sigma.matrix())},
                                    {"resolution", resolution},
                                    {"samples", samples}})
                  .dump(2)
           << '\n';
    }
    emit(text.str(), out_path);
    return kOk;
  }

  if (!is_full_rank(sigma)) {
    std::ostringstream msg;
    msg << "garbling [" << sigma(0, 0) << ' ' << sigma(0, 1) << "; " << sigma(1, 0) << ' '
        << sigma(1, 1) << "] is rank-deficient (rank 1): every experiment leaves the prior";
    throw Error(ErrorKind::SingularGarbling, msg.str());
  }
  const auto curves = boundary_curves(sigma, prior, points);
  const FeasibleSet set = wing_polygons(sigma, prior, points);
  std::ostringstream text;
  if (format == "csv") {
    write_feasible_csv(text, curves, set);
  } else {
    text << envelope("feasible", feasible_json(curves, set)).dump(2) << '\n';
  }
  emit(text.str(), out_path);
  return kOk;
}

int run_solve(const std::string& path, const std::string& mode, const std::string& x_flag,
              const std::string& sigma_flag, const std::string& out_path) {
  const Scenario s = load_scenario(path);
  const GameSpec& g = s.game;
  json body;
  int code = kOk;
  if (mode == "bp") {
    body = bp_json(bp_solve(g.sender, g.prior));
  } else if (mode == "sender-br") {
    body = sender_json(sender_best_response(g.sender, require_sigma(s, sigma_flag), g.prior));
  } else if (mode == "mediator-br") {
    if (x_flag.empty()) throw Error(ErrorKind::Schema, "--mode mediator-br needs --x");
    body = mediator_json(mediator_best_response(g.mediator, matrix_flag(x_flag), g.prior));
  } else if (mode == "check") {
    if (x_flag.empty()) throw Error(ErrorKind::Schema, "--mode check needs --x");
    const auto cert = check_equilibrium(g, matrix_flag(x_flag), require_sigma(s, sigma_flag));
    body = certificate_json(cert);
    if (!cert.verified) code = kRefuted;
  } else if (mode == "search") {
    body = search_json(search_equilibria(g));
    body["grid"] = g.grid;
    body["tol_dev"] = g.tol_dev;
    body["tol_search"] = g.tol_search;
  } else {  // compare
    if (x_flag.empty()) throw Error(ErrorKind::Schema, "--mode compare needs --x");
    const auto x = matrix_flag(x_flag);
    const auto sigma = require_sigma(s, sigma_flag);
    const auto tau_mp = induced_tau(compose(sigma, x), Belief(g.prior));
    const auto tau_bp = bp_solve(g.sender, g.prior).tau;
    body = comparison_json(compare_outcomes(g, tau_mp, tau_bp), tau_mp, tau_bp);
  }
  body["mode"] = mode;
  body["prior"] = g.prior;
  const std::string text = envelope("solve", body).dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) emit(text, out_path);
  return code;
}

int run_order(std::string a_flag, std::string b_flag, const std::string& pair_path) {
  if (!pair_path.empty()) {
    std::ifstream in(pair_path);
    if (!in) throw Error(ErrorKind::Schema, "cannot open " + pair_path);
    try {
      const json doc = json::parse(in);
      for (const auto& [key, value] : doc.items()) {
        if (key != "a" && key != "b") throw Error(ErrorKind::Schema, "unknown key \"" + key + "\"");
      }
      a_flag = doc.at("a").get<std::string>();
      b_flag = doc.at("b").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Schema, pair_path + ": " + e.what());
    }
  }
  if (a_flag.empty() || b_flag.empty()) {
    throw Error(ErrorKind::Schema, "order needs --a and --b, or --pair");
  }
  const auto a = matrix_flag(a_flag);
  const auto b = matrix_flag(b_flag);
  const auto r = blackwell_compare(a, b);
  json body = blackwell_json(r);
  body["a"] = format_matrix(parse_matrix(a_flag));
  body["b"] = format_matrix(parse_matrix(b_flag));
  std::cout << envelope("order", body).dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mediated persuasion: feasible sets, best responses, equilibria"};
  app.require_subcommand(1);

  std::string scenario, out, format = "csv", mode, x_flag, sigma_flag, a_flag, b_flag, pair;
  int points = 256;
  double resolution = 0.1;

  auto* feasible = app.add_subcommand("feasible", "Boundary curves and wings of F(sigma, prior)");
  feasible->add_option("scenario", scenario, "Scenario JSON")->required();
  feasible->add_option("--points", points, "Samples per boundary family")
      ->check(CLI::Range(2, 1 << 16));
  feasible->add_option("--out", out, "Output file (default stdout)");
  feasible->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  feasible->add_option("--resolution", resolution,
                       "Simplex grid step for garblings with more than two signals")
      ->check(CLI::Range(1e-3, 0.5));

  auto* solve = app.add_subcommand("solve", "Run one solver mode on a scenario");
  solve->add_option("scenario", scenario, "Scenario JSON")->required();
  solve->add_option("--mode", mode)
      ->required()
      ->check(CLI::IsMember({"bp", "sender-br", "mediator-br", "check", "search", "compare"}));
  solve->add_option("--x", x_flag, "Experiment, e.g. \"2/3,1/3;1/3,2/3\" or identity");
  solve->add_option("--sigma", sigma_flag, "Garbling (defaults to the scenario's)");
  solve->add_option("--out", out, "Also write the report here");

  auto* order = app.add_subcommand("order", "Blackwell order between two garblings");
  order->add_option("--a", a_flag, "First garbling");
  order->add_option("--b", b_flag, "Second garbling");
  order->add_option("--pair", pair, "JSON file with keys \"a\" and \"b\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSchema;
  }

  try {
    if (*feasible) return run_feasible(scenario, points, format, resolution, out);
    if (*solve) return run_solve(scenario, mode, x_flag, sigma_flag, out);
    return run_order(a_flag, b_flag, pair);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
}
