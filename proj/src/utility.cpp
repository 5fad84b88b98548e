#include "medpers/utility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace medpers {

namespace {

constexpr double kSnap = 1e-12;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidUtility, what); }

bool same_line(const Piece& a, const Piece& b) {
  return a.slope == b.slope && a.intercept == b.intercept;
}

/// Joins neighbours that carry the same affine function.
std::vector<Piece> merge_pieces(const std::vector<Piece>& pieces) {
  std::vector<Piece> out;
  for (const Piece& p : pieces) {
    if (!out.empty() && same_line(out.back(), p)) {
      out.back().hi = p.hi;
      out.back().hi_closed = p.hi_closed;
      continue;
    }
    out.push_back(p);
  }
  for (Piece& p : out) {
    if (p.is_point()) {
      p.intercept = p.at(p.lo);
      p.slope = 0;
    }
  }
  return out;
}

}  // namespace

PiecewiseUtility::PiecewiseUtility(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  for (const Piece& p : pieces_) {
    breaks_.push_back(p.lo);
    breaks_.push_back(p.hi);
  }
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
}

PiecewiseUtility PiecewiseUtility::from_pieces(std::vector<Piece> pieces) {
  if (pieces.empty()) invalid("utility has no pieces");
  if (!pieces.front().lo_closed || !pieces.back().hi_closed) {
    invalid("utility domain must be a closed interval");
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !std::isfinite(p.slope) ||
        !std::isfinite(p.intercept)) {
      invalid("utility piece has a non-finite entry");
    }
    if (p.lo < 0 || p.hi > 1 || p.lo > p.hi) invalid("utility piece lies outside [0, 1]");
    if (p.is_point() && !(p.lo_closed && p.hi_closed)) invalid("isolated point must be closed");
    if (i == 0) continue;
    const Piece& q = pieces[i - 1];
    if (q.hi != p.lo || q.hi_closed == p.lo_closed) {
      std::ostringstream msg;
      msg << "utility pieces overlap or leave a gap at " << p.lo;
      invalid(msg.str());
    }
  }
  return PiecewiseUtility(std::move(pieces));
}

PiecewiseUtility PiecewiseUtility::interpolate(std::vector<std::pair<double, double>> points,
                                               Continuity continuity) {
  std::stable_sort(points.begin(), points.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  // Group by belief: each group holds its first (left) and last (right) value.
  struct Group {
    double beta, left, right;
    int count;
  };
  std::vector<Group> groups;
  for (const auto& [beta, value] : points) {
    if (!std::isfinite(beta) || !std::isfinite(value)) invalid("utility point is not finite");
    if (!groups.empty() && groups.back().beta == beta) {
      if (++groups.back().count > 2) invalid("more than two values at one belief");
      groups.back().right = value;
    } else {
      groups.push_back({beta, value, value, 1});
    }
  }
  if (groups.size() < 2) invalid("utility needs at least two distinct beliefs");

  std::vector<Piece> pieces;
  for (std::size_t j = 0; j + 1 < groups.size(); ++j) {
    const Group& a = groups[j];
    const Group& b = groups[j + 1];
    Piece p;
    p.lo = a.beta;
    p.hi = b.beta;
    p.slope = (b.left - a.right) / (b.beta - a.beta);
    p.intercept = a.right - p.slope * a.beta;
    if (continuity == Continuity::Right) {
      p.lo_closed = true;
      p.hi_closed = j + 2 == groups.size();
    } else {
      p.lo_closed = j == 0;
      p.hi_closed = true;
    }
    pieces.push_back(p);
  }
  return from_pieces(std::move(pieces));
}

PiecewiseUtility PiecewiseUtility::affine(double slope, double intercept, double lo, double hi) {
  return from_pieces({Piece{lo, hi, true, true, slope, intercept}});
}

PiecewiseUtility PiecewiseUtility::step(const std::vector<double>& cutoffs,
                                        const std::vector<double>& levels,
                                        Continuity continuity) {
  if (levels.size() != cutoffs.size() + 1) invalid("step needs one more level than cutoffs");
  std::vector<std::pair<double, double>> points{{0.0, levels.front()}};
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] <= 0 || cutoffs[i] >= 1) invalid("step cutoffs must lie inside (0, 1)");
    if (i > 0 && cutoffs[i] <= cutoffs[i - 1]) invalid("step cutoffs must increase");
    points.emplace_back(cutoffs[i], levels[i]);
    points.emplace_back(cutoffs[i], levels[i + 1]);
  }
  points.emplace_back(1.0, levels.back());
  return interpolate(std::move(points), continuity);
}

PiecewiseUtility PiecewiseUtility::with_singletons(
    const std::vector<std::pair<double, double>>& points) const {
  std::vector<Piece> pieces = pieces_;
  for (const auto& [beta, value] : points) {
    if (!std::isfinite(value)) invalid("isolated value is not finite");
    if (beta < lo() || beta > hi()) invalid("isolated point lies outside the utility domain");
    const Piece point{beta, beta, true, true, 0.0, value};
    auto it = std::partition_point(pieces.begin(), pieces.end(), [&](const Piece& p) {
      return p.hi < beta || (p.hi == beta && !p.hi_closed);
    });
    Piece cover = *it;
    std::vector<Piece> repl;
    if (cover.is_point()) {
      repl.push_back(point);
    } else {
      if (beta > cover.lo) {
        Piece left = cover;
        left.hi = beta;
        left.hi_closed = false;
        repl.push_back(left);
      }
      repl.push_back(point);
      if (beta < cover.hi) {
        Piece right = cover;
        right.lo = beta;
        right.lo_closed = false;
        repl.push_back(right);
      }
    }
    it = pieces.erase(it);
    pieces.insert(it, repl.begin(), repl.end());
  }
  return from_pieces(std::move(pieces));
}

const Piece& PiecewiseUtility::covering(double beta) const {
  auto near = std::lower_bound(breaks_.begin(), breaks_.end(), beta);
  if (near != breaks_.end() && *near - beta <= kSnap) {
    beta = *near;
  } else if (near != breaks_.begin() && beta - *(near - 1) <= kSnap) {
    beta = *(near - 1);
  }
  beta = std::clamp(beta, lo(), hi());
  auto it = std::partition_point(pieces_.begin(), pieces_.end(), [&](const Piece& p) {
    return p.hi < beta || (p.hi == beta && !p.hi_closed);
  });
  if (it == pieces_.end()) --it;
  return *it;
}

double PiecewiseUtility::operator()(double beta) const {
  const Piece& p = covering(beta);
  if (p.is_point()) return p.intercept;
  return p.at(std::clamp(beta, p.lo, p.hi));
}

std::vector<double> PiecewiseUtility::breakpoints() const { return breaks_; }

double PiecewiseUtility::max_slope() const {
  double m = 0;
  for (const Piece& p : pieces_) m = std::max(m, std::abs(p.slope));
  return m;
}

double eval_utility(const PiecewiseUtility& u, Belief beta) { return u(beta.value()); }

double expected_utility(const PiecewiseUtility& u, const BeliefDistributiond& tau) {
  double total = 0;
  for (const auto& a : tau.atoms()) total += a.prob * u(a.belief);
  return total;
}

// ---------------------------------------------------------------------------
// Induced utilities

namespace {

double line_at(const std::array<double, 2>& row, double beta) {
  return (1 - beta) * row[0] + beta * row[1];
}

void check_game(const ActionGame& g) {
  const std::size_t n = g.receiver.size();
  if (n < 2) invalid("an action game needs at least two actions");
  if (g.sender.size() != n || g.mediator.size() != n ||
      (!g.actions.empty() && g.actions.size() != n)) {
    invalid("payoff tables must list every action");
  }
}

/// Beliefs in (0, 1) where two payoff lines cross.
void crossings(const std::vector<std::array<double, 2>>& rows, std::vector<double>& out) {
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      const double da = rows[a][1] - rows[a][0];
      const double db = rows[b][1] - rows[b][0];
      if (da == db) continue;
      const double beta = (rows[b][0] - rows[a][0]) / (da - db);
      if (beta > 0 && beta < 1) out.push_back(beta);
    }
  }
}

Piece piece_for(const std::array<double, 2>& row, double lo, double hi, bool lc, bool hc) {
  return Piece{lo, hi, lc, hc, row[1] - row[0], row[0]};
}

}  // namespace

std::size_t receiver_action(const ActionGame& game, double beta) {
  check_game(game);
  std::size_t best = 0;
  double best_r = line_at(game.receiver[0], beta);
  double best_s = line_at(game.sender[0], beta);
  for (std::size_t a = 1; a < game.receiver.size(); ++a) {
    const double r = line_at(game.receiver[a], beta);
    const double s = line_at(game.sender[a], beta);
    const double tie = kSnap * std::max(1.0, std::abs(best_r));
    if (r > best_r + tie || (std::abs(r - best_r) <= tie && s > best_s + kSnap)) {
      best = a;
      best_r = r;
      best_s = s;
    }
  }
  return best;
}

InducedUtilities induce_belief_utilities(const ActionGame& game) {
  check_game(game);
  std::vector<double> cuts{0.0, 1.0};
  crossings(game.receiver, cuts);
  crossings(game.sender, cuts);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) <= kSnap; }),
             cuts.end());

  // Action on every breakpoint and on every open cell between breakpoints.
  std::vector<std::size_t> at_point(cuts.size());
  std::vector<std::size_t> on_cell(cuts.size() - 1);
  for (std::size_t i = 0; i < cuts.size(); ++i) at_point[i] = receiver_action(game, cuts[i]);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    on_cell[i] = receiver_action(game, 0.5 * (cuts[i] + cuts[i + 1]));
  }

  // A breakpoint joins the neighbouring cell that plays the same action,
  // preferring the left one; otherwise it is an isolated point.
  const std::size_t last = cuts.size() - 1;
  std::vector<int> joins(cuts.size(), 0);  // -1 left, +1 right, 0 alone
  for (std::size_t j = 0; j <= last; ++j) {
    if (j > 0 && at_point[j] == on_cell[j - 1]) {
      joins[j] = -1;
    } else if (j < last && at_point[j] == on_cell[j]) {
      joins[j] = 1;
    }
  }

  auto build = [&](const std::vector<std::array<double, 2>>& rows) {
    std::vector<Piece> pieces;
    for (std::size_t j = 0; j <= last; ++j) {
      if (joins[j] == 0) pieces.push_back(piece_for(rows[at_point[j]], cuts[j], cuts[j], true, true));
      if (j == last) break;
      pieces.push_back(piece_for(rows[on_cell[j]], cuts[j], cuts[j + 1], joins[j] == 1,
                                 joins[j + 1] == -1));
    }
    return PiecewiseUtility::from_pieces(merge_pieces(pieces));
  };
  return {build(game.sender), build(game.mediator), build(game.receiver)};
}

// ---------------------------------------------------------------------------
// Concavification

bool Interval::contains(double x, double tol) const {
  const bool above = lo_closed ? x >= lo - tol : x > lo - tol;
  const bool below = hi_closed ? x <= hi + tol : x < hi + tol;
  return above && below;
}

bool Concavification::coincides(double beta, double tol) const {
  for (const Interval& i : coincident) {
    if (i.contains(beta, tol)) return true;
  }
  return false;
}

std::size_t Concavification::segment(double beta) const {
  for (std::size_t i = 0; i + 2 < vertices.size(); ++i) {
    if (beta < vertices[i + 1].beta) return i;
  }
  return vertices.size() - 2;
}

bool Concavification::first_coincident(double from, double to, double& out) const {
  for (const Interval& i : coincident) {
    if (i.hi < from || i.lo > to) continue;
    out = std::max(i.lo, from);
    return true;
  }
  return false;
}

bool Concavification::last_coincident(double from, double to, double& out) const {
  for (auto it = coincident.rbegin(); it != coincident.rend(); ++it) {
    if (it->hi < from || it->lo > to) continue;
    out = std::min(it->hi, to);
    return true;
  }
  return false;
}

namespace {

struct Candidate {
  double beta;
  double value;
  bool attained;
};

double cross(const Candidate& o, const Candidate& a, const Candidate& b) {
  return (a.beta - o.beta) * (b.value - o.value) - (a.value - o.value) * (b.beta - o.beta);
}

}  // namespace

Concavification concavify(const PiecewiseUtility& u, double lo, double hi, int grid) {
  if (!(lo >= u.lo() - kSnap && hi <= u.hi() + kSnap && hi - lo > kSnap)) {
    std::ostringstream msg;
    msg << "cannot concavify over [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::EmptyDomain, msg.str());
  }
  lo = std::max(lo, u.lo());
  hi = std::min(hi, u.hi());

  std::vector<Candidate> cands;
  cands.push_back({lo, u(lo), true});
  cands.push_back({hi, u(hi), true});
  for (const Piece& p : u.pieces()) {
    if (p.hi < lo || p.lo > hi) continue;
    if (p.is_point()) {
      cands.push_back({p.lo, p.intercept, true});
      continue;
    }
    const double a = std::max(p.lo, lo);
    const double b = std::min(p.hi, hi);
    if (a >= b) continue;
    cands.push_back({a, p.at(a), a > p.lo || p.lo_closed});
    cands.push_back({b, p.at(b), b < p.hi || p.hi_closed});
  }
  for (int k = 1; k < grid; ++k) {
    const double beta = lo + (hi - lo) * k / grid;
    cands.push_back({beta, u(beta), true});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return a.beta < b.beta || (a.beta == b.beta && a.value > b.value);
  });
  // Keep the best value at each belief; an attained tie wins.
  std::vector<Candidate> uniq;
  for (const Candidate& c : cands) {
    if (!uniq.empty() && c.beta - uniq.back().beta <= kSnap) {
      Candidate& k = uniq.back();
      if (c.value > k.value + kSnap) {
        k = c;
      } else if (std::abs(c.value - k.value) <= kSnap) {
        k.attained = k.attained || c.attained;
      }
      continue;
    }
    uniq.push_back(c);
  }

  std::vector<Candidate> hull;
  for (const Candidate& c : uniq) {
    while (hull.size() >= 2) {
      const double scale = 1.0 + std::abs(hull[hull.size() - 2].value) +
                           std::abs(hull.back().value) + std::abs(c.value);
      if (cross(hull[hull.size() - 2], hull.back(), c) >= -1e-15 * scale) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(c);
  }
  // Merge segments whose slopes agree to rounding.
  std::vector<Candidate> verts{hull.front()};
  for (std::size_t i = 1; i < hull.size(); ++i) {
    if (verts.size() >= 2 && i + 1 <= hull.size()) {
      const Candidate& a = verts[verts.size() - 2];
      const Candidate& b = verts.back();
      const Candidate& c = hull[i];
      const double s1 = (b.value - a.value) / (b.beta - a.beta);
      const double s2 = (c.value - b.value) / (c.beta - b.beta);
      if (std::abs(s1 - s2) <= 1e-9 * std::max(1.0, std::abs(s1))) verts.pop_back();
    }
    verts.push_back(hull[i]);
  }

  Concavification out;
  out.lo = lo;
  out.hi = hi;
  std::vector<Piece> env;
  for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
    const Candidate& a = verts[i];
    const Candidate& b = verts[i + 1];
    Piece p;
    p.lo = a.beta;
    p.hi = b.beta;
    p.lo_closed = true;
    p.hi_closed = i + 2 == verts.size();
    p.slope = (b.value - a.value) / (b.beta - a.beta);
    p.intercept = a.value - p.slope * a.beta;
    env.push_back(p);
  }
  out.envelope = PiecewiseUtility::from_pieces(env);
  for (const Candidate& v : verts) out.vertices.push_back({v.beta, v.value, v.attained});

  // Coincident set: where the utility reaches the envelope.
  std::vector<Interval> hits;
  for (const Piece& seg : env) {
    for (const Piece& p : u.pieces()) {
      if (p.hi < seg.lo || p.lo > seg.hi) continue;
      Interval ov;
      ov.lo = std::max(p.lo, seg.lo);
      ov.hi = std::min(p.hi, seg.hi);
      if (ov.lo > ov.hi) continue;
      ov.lo_closed = p.lo < ov.lo || p.lo_closed;
      ov.hi_closed = p.hi > ov.hi || p.hi_closed;
      if (ov.lo == ov.hi && !(ov.lo_closed && ov.hi_closed)) continue;
      const double tol = kTolerance * std::max(1.0, std::abs(seg.at(ov.lo)));
      if (p.is_point()) {
        if (std::abs(p.intercept - seg.at(p.lo)) <= tol) hits.push_back(ov);
        continue;
      }
      const bool lo_hit = std::abs(p.at(ov.lo) - seg.at(ov.lo)) <= tol;
      const bool hi_hit = std::abs(p.at(ov.hi) - seg.at(ov.hi)) <= tol;
      if (lo_hit && hi_hit && ov.hi > ov.lo) {
        hits.push_back(ov);
      } else {
        if (lo_hit && ov.lo_closed) hits.push_back({ov.lo, ov.lo, true, true});
        if (hi_hit && ov.hi_closed) hits.push_back({ov.hi, ov.hi, true, true});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.lo_closed && !b.lo_closed);
  });
  for (const Interval& h : hits) {
    if (!out.coincident.empty()) {
      Interval& last = out.coincident.back();
      const bool touch = h.lo < last.hi || (h.lo == last.hi && (h.lo_closed || last.hi_closed));
      if (touch) {
        if (h.hi > last.hi || (h.hi == last.hi && h.hi_closed)) {
          last.hi = h.hi;
          last.hi_closed = h.hi_closed || (h.hi == last.hi && last.hi_closed);
        }
        if (h.lo == last.lo) last.lo_closed = last.lo_closed || h.lo_closed;
        continue;
      }
    }
    out.coincident.push_back(h);
  }
  return out;
}

}  // namespace medpers
