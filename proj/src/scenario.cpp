#include "medpers/scenario.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace medpers {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::Schema, what); }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\n");
  return s.substr(first, last - first + 1);
}

std::int64_t parse_integer(const std::string& text, const std::string& whole) {
  std::int64_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) schema("not a number: \"" + whole + "\"");
  return v;
}

std::int64_t pow10(int n) {
  std::int64_t p = 1;
  for (int i = 0; i < n; ++i) {
    if (p > INT64_MAX / 10) schema("too many digits");
    p *= 10;
  }
  return p;
}

Rational parse_decimal(const std::string& text, const std::string& whole) {
  std::string mantissa = text;
  int exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    std::string exp = text.substr(e + 1);
    if (!exp.empty() && exp.front() == '+') exp.erase(0, 1);
    exponent = static_cast<int>(parse_integer(exp, whole));
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.erase(0, 1);
  }
  int decimals = 0;
  if (const auto dot = mantissa.find('.'); dot != std::string::npos) {
    decimals = static_cast<int>(mantissa.size() - dot - 1);
    mantissa.erase(dot, 1);
  }
  if (mantissa.empty() || mantissa.find_first_not_of("0123456789") != std::string::npos) {
    schema("not a number: \"" + whole + "\"");
  }
  Rational r(parse_integer(mantissa, whole));
  const int shift = exponent - decimals;
  if (shift >= 0) {
    r *= pow10(shift);
  } else {
    r /= pow10(-shift);
  }
  return negative ? -r : r;
}

void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!obj.is_object()) schema(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) schema("unknown key \"" + key + "\" in " + where);
  }
}

std::vector<std::pair<double, double>> point_list(const nlohmann::json& arr,
                                                  const std::string& where) {
  if (!arr.is_array()) schema(where + " must be an array of [belief, value] pairs");
  std::vector<std::pair<double, double>> out;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2) schema(where + " entries must be [belief, value]");
    out.emplace_back(parse_number(p[0]), parse_number(p[1]));
  }
  return out;
}

std::vector<std::array<double, 2>> payoff_rows(const nlohmann::json& arr, std::size_t n,
                                               const std::string& where) {
  if (!arr.is_array() || arr.size() != n) {
    schema(where + " must list one [state 1, state 2] row per action");
  }
  std::vector<std::array<double, 2>> out;
  for (const auto& row : arr) {
    if (!row.is_array() || row.size() != 2) schema(where + " rows must have two entries");
    out.push_back({parse_number(row[0]), parse_number(row[1])});
  }
  return out;
}

PiecewiseUtility utility_from_json(const nlohmann::json& spec, const std::string& player) {
  const std::string where = "utilities." + player;
  if (!spec.is_object() || !spec.contains("type")) schema(where + " needs a \"type\"");
  const std::string type = spec.at("type").get<std::string>();
  if (type == "pwl") {
    check_keys(spec, {"type", "points", "singletons", "continuity"}, where);
    if (!spec.contains("points")) schema(where + " needs \"points\"");
    Continuity continuity = Continuity::Right;
    if (spec.contains("continuity")) {
      const std::string c = spec.at("continuity").get<std::string>();
      if (c == "left") {
        continuity = Continuity::Left;
      } else if (c != "right") {
        schema(where + ".continuity must be \"left\" or \"right\"");
      }
    }
    PiecewiseUtility u =
        PiecewiseUtility::interpolate(point_list(spec.at("points"), where + ".points"), continuity);
    if (spec.contains("singletons")) {
      u = u.with_singletons(point_list(spec.at("singletons"), where + ".singletons"));
    }
    return u;
  }
  if (type == "actions") {
    check_keys(spec, {"type", "actions", "payoffs"}, where);
    if (!spec.contains("actions") || !spec.contains("payoffs")) {
      schema(where + " needs \"actions\" and \"payoffs\"");
    }
    ActionGame game;
    for (const auto& a : spec.at("actions")) game.actions.push_back(a.get<std::string>());
    const std::size_t n = game.actions.size();
    const auto& payoffs = spec.at("payoffs");
    check_keys(payoffs, {"receiver", "sender", "mediator"}, where + ".payoffs");
    if (!payoffs.contains("receiver")) schema(where + ".payoffs needs \"receiver\"");
    if (!payoffs.contains(player)) schema(where + ".payoffs needs \"" + player + "\"");
    const std::vector<std::array<double, 2>> zeros(n, {0.0, 0.0});
    auto rows = [&](const char* who) {
      return payoffs.contains(who) ? payoff_rows(payoffs.at(who), n, where + ".payoffs." + who)
                                   : zeros;
    };
    game.receiver = rows("receiver");
    game.sender = rows("sender");
    game.mediator = rows("mediator");
    const InducedUtilities induced = induce_belief_utilities(game);
    if (player == "sender") return induced.sender;
    if (player == "mediator") return induced.mediator;
    return induced.receiver;
  }
  schema(where + ".type must be \"pwl\" or \"actions\"");
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  const std::string text = trim(raw);
  try {
    if (const auto slash = text.find('/'); slash != std::string::npos) {
      const std::int64_t num = parse_integer(trim(text.substr(0, slash)), raw);
      const std::int64_t den = parse_integer(trim(text.substr(slash + 1)), raw);
      if (den == 0) schema("zero denominator in \"" + raw + "\"");
      return Rational(num, den);
    }
    return parse_decimal(text, raw);
  } catch (const boost::bad_rational&) {
    schema("not a rational: \"" + raw + "\"");
  }
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double parse_number(const nlohmann::json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return boost::rational_cast<double>(parse_rational(value.get<std::string>()));
  schema("expected a number or a fraction string, got " + value.dump());
}

DenseMatrix<double> RationalMatrix::to_dense() const {
  DenseMatrix<double> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = boost::rational_cast<double>(entries[static_cast<std::size_t>(i * cols + j)]);
    }
  }
  return m;
}

RationalMatrix parse_matrix(const std::string& raw) {
  const std::string text = trim(raw);
  RationalMatrix m;
  if (text == "identity") {
    m.rows = m.cols = 2;
    m.entries = {Rational(1), Rational(0), Rational(0), Rational(1)};
    return m;
  }
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::stringstream cells(row);
    std::string cell;
    Eigen::Index count = 0;
    while (std::getline(cells, cell, ',')) {
      m.entries.push_back(parse_rational(cell));
      ++count;
    }
    if (m.rows == 0) {
      m.cols = count;
    } else if (count != m.cols) {
      schema("matrix rows have different lengths in \"" + raw + "\"");
    }
    ++m.rows;
  }
  if (m.rows == 0 || m.cols == 0) schema("empty matrix \"" + raw + "\"");
  return m;
}

std::string format_matrix(const RationalMatrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows; ++i) {
    if (i) out += ';';
    for (Eigen::Index j = 0; j < m.cols; ++j) {
      if (j) out += ',';
      out += format_rational(m.entries[static_cast<std::size_t>(i * m.cols + j)]);
    }
  }
  return out;
}

StochasticMatrixd matrix_flag(const std::string& text) {
  return StochasticMatrixd::validate(parse_matrix(text).to_dense());
}

Scenario scenario_from_json(const nlohmann::json& doc) {
  check_keys(doc, {"prior", "sigma", "utilities", "search", "seed"}, "scenario");
  Scenario s;
  if (!doc.contains("prior")) schema("scenario needs \"prior\"");
  s.game.prior = parse_number(doc.at("prior"));
  if (!(s.game.prior >= 0 && s.game.prior <= 1)) schema("prior must lie in [0, 1]");

  if (doc.contains("sigma")) {
    const auto& rows = doc.at("sigma");
    if (!rows.is_array() || rows.empty()) schema("sigma must be an array of rows");
    const std::size_t n = rows.size();
    DenseMatrix<double> m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (!rows[i].is_array() || rows[i].size() != n) schema("sigma must be square");
      for (std::size_t j = 0; j < n; ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_number(rows[i][j]);
      }
    }
    try {
      s.sigma = StochasticMatrixd::validate(m);
    } catch (const Error& e) {
      schema(std::string("sigma: ") + e.what());
    }
  }

  if (doc.contains("utilities")) {
    const auto& u = doc.at("utilities");
    check_keys(u, {"sender", "mediator", "receiver"}, "utilities");
    try {
      if (u.contains("sender")) s.game.sender = utility_from_json(u.at("sender"), "sender");
      if (u.contains("mediator")) s.game.mediator = utility_from_json(u.at("mediator"), "mediator");
      if (u.contains("receiver")) s.game.receiver = utility_from_json(u.at("receiver"), "receiver");
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Schema) throw;
      schema(std::string("utilities: ") + e.what());
    }
  }

  if (doc.contains("search")) {
    const auto& search = doc.at("search");
    check_keys(search, {"grid", "tol_dev", "tol_search"}, "search");
    if (search.contains("grid")) s.game.grid = parse_number(search.at("grid"));
    if (search.contains("tol_dev")) s.game.tol_dev = parse_number(search.at("tol_dev"));
    if (search.contains("tol_search")) s.game.tol_search = parse_number(search.at("tol_search"));
    if (!(s.game.grid > 0 && s.game.grid <= 0.5)) schema("search.grid must lie in (0, 0.5]");
    if (!(s.game.tol_dev >= 0) || !(s.game.tol_search >= 0)) {
      schema("search tolerances must be nonnegative");
    }
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer()) schema("seed must be an integer");
    s.game.seed = doc.at("seed").get<std::uint64_t>();
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot open scenario " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    schema(path + ": " + e.what());
  }
  try {
    return scenario_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    schema(path + ": " + e.what());
  }
}

}  // namespace medpers
