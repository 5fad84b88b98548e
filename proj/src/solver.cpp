#include "medpers/solver.hpp"

#include "medpers/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace medpers {

namespace {

constexpr double kTie = 1e-10;

double pair_value(const PiecewiseUtility& u, double b1, double b2, double prior) {
  if (std::abs(b2 - b1) <= 1e-15) return u(prior);
  const double p1 = std::clamp((b2 - prior) / (b2 - b1), 0.0, 1.0);
  return p1 * u(b1) + (1 - p1) * u(b2);
}

void require_square2(const StochasticMatrixd& m, const char* what) {
  if (m.realizations() != 2 || m.conditions() != 2) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be 2x2");
  }
}

bool interior_prior(double prior) { return prior > 0 && prior < 1; }

/// The experiment producing posteriors (b1, b2) when no garbling intervenes.
StochasticMatrixd direct_experiment(double b1, double b2, double prior) {
  return reconstruct_experiment(
      StochasticMatrixd::identity(2), prior,
      BeliefDistributiond::make(
          {{b1, (b2 - prior) / (b2 - b1)}, {b2, (prior - b1) / (b2 - b1)}}, prior));
}

}  // namespace

BpSolution bp_solve(const PiecewiseUtility& u, double prior) {
  BpSolution out;
  out.tau = BeliefDistributiond::point_mass(prior);
  out.value = u(prior);
  if (!interior_prior(prior)) return out;
  const Concavification c = concavify(u, 0.0, 1.0);
  const double env = c.envelope(prior);
  if (env - u(prior) <= kTolerance * std::max(1.0, std::abs(env))) return out;

  const std::size_t seg = c.segment(prior);
  const HullVertex& left = c.vertices[seg];
  const HullVertex& right = c.vertices[seg + 1];
  double b2 = right.beta;
  c.first_coincident(prior, right.beta, b2);
  if (b2 <= prior) b2 = right.beta;
  const double b1 = left.beta;
  out.epsilon_optimal = !left.attained || (b2 == right.beta && !right.attained);
  out.x = direct_experiment(b1, b2, prior);
  out.tau = induced_tau(out.x, Belief(prior));
  out.value = out.epsilon_optimal ? env : expected_utility(u, out.tau);
  return out;
}

SenderSearch SenderSearch::light() {
  SenderSearch s;
  s.curve_samples = 65;
  s.refine_wings = false;
  s.interior = 0;
  s.golden_steps = 24;
  s.slice_bisections = 30;
  return s;
}

SenderResponse sender_best_response(const PiecewiseUtility& u, const StochasticMatrixd& sigma,
                                    double prior, const SenderSearch& search) {
  require_square2(sigma, "garbling");
  SenderResponse babble;
  babble.tau = BeliefDistributiond::point_mass(prior);
  babble.pair = {prior, prior};
  babble.value = u(prior);
  if (!interior_prior(prior) || !is_full_rank(sigma)) return babble;

  struct Candidate {
    double b1, b2, value;
    std::optional<StochasticMatrixd> x;
  };
  std::vector<Candidate> cands;
  auto add = [&](double b1, double b2, std::optional<StochasticMatrixd> x = std::nullopt) {
    cands.push_back({b1, b2, pair_value(u, b1, b2, prior), std::move(x)});
  };

  const FeasibleSet fs = wing_polygons(sigma, prior, search.curve_samples, search.refine_wings);
  for (const auto& v : fs.left) add(v.b1, v.b2);
  for (const auto& v : fs.right) add(v.b1, v.b2);

  // Boundary families, then golden-section refinement around each family's best sample.
  const auto curves = boundary_curves(sigma, prior, search.curve_samples);
  for (const auto& curve : curves) {
    DenseMatrix<double> dir(2, 2);
    const auto x0 = family_experiment(curve.family, 0.0).matrix();
    dir = family_experiment(curve.family, 1.0).matrix() - x0;
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
      const auto& s = curve.samples[i];
      const double v = pair_value(u, s.point.b1, s.point.b2, prior);
      if (v > best_value) {
        best_value = v;
        best = i;
      }
      // A sample with a null signal is only a limit of the family; its
      // experiment does not produce the pair, so leave reconstruction to membership.
      if (std::min(s.prob1, s.prob2) > 1e-12) {
        add(s.point.b1, s.point.b2, family_experiment(curve.family, s.p));
      } else {
        add(s.point.b1, s.point.b2);
      }
    }
    if (search.golden_steps <= 0) continue;
    auto eval = [&](double p) {
      const auto x = family_experiment(curve.family, p);
      const CurveSample s = posterior_pair(sigma, x, prior, &dir);
      return std::make_tuple(pair_value(u, s.point.b1, s.point.b2, prior), s.point,
                             std::min(s.prob1, s.prob2) > 1e-12);
    };
    double a = curve.samples[best == 0 ? 0 : best - 1].p;
    double b = curve.samples[std::min(best + 1, curve.samples.size() - 1)].p;
    const double phi = 0.5 * (std::sqrt(5.0) - 1);
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    auto fc = eval(c);
    auto fd = eval(d);
    double best_p = curve.samples[best].p;
    double top = best_value;
    for (int it = 0; it < search.golden_steps; ++it) {
      if (std::get<0>(fc) > top) { top = std::get<0>(fc); best_p = c; }
      if (std::get<0>(fd) > top) { top = std::get<0>(fd); best_p = d; }
      if (std::get<0>(fc) >= std::get<0>(fd)) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = eval(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = eval(d);
      }
    }
    const auto [v, point, proper] = eval(best_p);
    (void)v;
    if (proper) {
      add(point.b1, point.b2, family_experiment(curve.family, best_p));
    } else {
      add(point.b1, point.b2);
    }
  }

  // Slices through the utility's breakpoints: on a line where one posterior
  // is fixed the objective is monotone between breakpoints of the other, so
  // the slice ends and the breakpoints inside it suffice.
  std::vector<double> knots;
  for (double t : u.breakpoints()) {
    for (double d : {-1e-9, 0.0, 1e-9}) {
      const double k = t + d;
      if (k >= 0 && k <= 1) knots.push_back(k);
    }
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  auto feasible = [&](double b1, double b2) {
    return membership(sigma, prior, b1, b2).has_value();
  };
  // Fix one coordinate at t; the other ranges over [lo, hi] (quadrant bounds).
  auto slice = [&](const std::vector<BeliefPair>& wing, bool fix_first, double t, double lo,
                   double hi) {
    double smin = std::numeric_limits<double>::infinity();
    double smax = -smin;
    for (std::size_t i = 0; i < wing.size(); ++i) {
      const BeliefPair& p = wing[i];
      const BeliefPair& q = wing[(i + 1) % wing.size()];
      const double pf = fix_first ? p.b1 : p.b2;
      const double qf = fix_first ? q.b1 : q.b2;
      const double po = fix_first ? p.b2 : p.b1;
      const double qo = fix_first ? q.b2 : q.b1;
      if ((pf - t) * (qf - t) > 0) continue;
      if (pf == qf) {
        smin = std::min({smin, po, qo});
        smax = std::max({smax, po, qo});
      } else {
        const double o = po + (qo - po) * (t - pf) / (qf - pf);
        smin = std::min(smin, o);
        smax = std::max(smax, o);
      }
    }
    if (smin > smax) return;
    auto at = [&](double o) { return fix_first ? feasible(t, o) : feasible(o, t); };
    const double mid = 0.5 * (smin + smax);
    if (!at(mid)) return;
    auto extend = [&](double inside, double outside) {
      if (at(outside)) return outside;
      for (int i = 0; i < search.slice_bisections; ++i) {
        const double m = 0.5 * (inside + outside);
        (at(m) ? inside : outside) = m;
      }
      return inside;
    };
    const double s_lo = extend(mid, lo);
    const double s_hi = extend(mid, hi);
    auto push = [&](double o) { fix_first ? add(t, o) : add(o, t); };
    push(s_lo);
    push(s_hi);
    for (double k : knots) {
      if (k > s_lo && k < s_hi) push(k);
    }
  };
  for (double t : knots) {
    if (t < prior) {
      slice(fs.left, true, t, prior, 1.0);    // natural: b1 = t
      slice(fs.right, false, t, prior, 1.0);  // perverse: b2 = t
    } else if (t > prior) {
      slice(fs.left, false, t, 0.0, prior);   // natural: b2 = t
      slice(fs.right, true, t, 0.0, prior);   // perverse: b1 = t
    }
  }

  if (search.interior > 1) {
    const int n = search.interior;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double lowb = prior * i / (n - 1);
        const double highb = prior + (1 - prior) * j / (n - 1);
        if (feasible(lowb, highb)) add(lowb, highb);
        if (feasible(highb, lowb)) add(highb, lowb);
      }
    }
  }

  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return a.value > b.value;
  });
  if (cands.empty() || babble.value >= cands.front().value - kTie * std::max(1.0, std::abs(babble.value))) {
    return babble;
  }
  const double top = cands.front().value;
  const double tol = kTie * std::max(1.0, std::abs(top));
  std::vector<const Candidate*> tied;
  for (const auto& c : cands) {
    if (c.value < top - tol) break;
    tied.push_back(&c);
  }
  std::stable_sort(tied.begin(), tied.end(), [](const Candidate* a, const Candidate* b) {
    if (std::abs(a->b1 - b->b1) > 1e-12) return a->b1 < b->b1;
    return a->b2 < b->b2;
  });
  // Prefer the tied winner. Reconstruction rounding can move a boundary pair
  // across a utility jump, so fall back down the ranking until the realised
  // value matches the candidate's.
  std::vector<const Candidate*> order = tied;
  for (const auto& c : cands) order.push_back(&c);
  SenderResponse best = babble;
  for (const Candidate* c : order) {
    std::optional<StochasticMatrixd> x = c->x;
    if (!x) x = membership(sigma, prior, c->b1, c->b2);
    if (!x) continue;
    SenderResponse out;
    out.x = *x;
    out.tau = induced_tau(compose(sigma, *x), Belief(prior));
    out.pair = {c->b1, c->b2};
    out.value = expected_utility(u, out.tau);
    out.babbling = out.tau.is_degenerate();
    if (out.value > best.value + kTie * std::max(1.0, std::abs(best.value))) best = out;
    if (out.value >= c->value - kTie * std::max(1.0, std::abs(c->value))) break;
  }
  return best;
}

MediatorResponse mediator_best_response(const PiecewiseUtility& u, const StochasticMatrixd& x,
                                        double prior) {
  require_square2(x, "experiment");
  MediatorResponse out;
  out.sigma = StochasticMatrixd::identity(2);
  out.tau = BeliefDistributiond::point_mass(prior);
  out.value = u(prior);
  if (!interior_prior(prior)) return out;
  const BeliefDistributiond tx = induced_tau(x, Belief(prior));
  if (tx.is_degenerate() || tx.highest() - tx.lowest() <= 1e-12 || !is_full_rank(x)) {
    return out;
  }

  const Concavification c = concavify(u, tx.lowest(), tx.highest());
  double c1 = prior;
  double c2 = prior;
  bool at_kink = false;
  for (std::size_t k = 1; k + 1 < c.vertices.size(); ++k) {
    if (std::abs(c.vertices[k].beta - prior) <= 1e-12) at_kink = true;
  }
  const bool coincident = c.envelope(prior) - u(prior) <= kTolerance;
  if (!(at_kink && coincident)) {
    const std::size_t seg = c.segment(prior);
    const HullVertex& a = c.vertices[seg];
    const HullVertex& b = c.vertices[seg + 1];
    c1 = a.beta;
    c2 = b.beta;
    c.first_coincident(a.beta, prior, c1);
    c.last_coincident(prior, b.beta, c2);
    out.epsilon_optimal = (c1 == a.beta && !a.attained) || (c2 == b.beta && !b.attained);
    if (c1 > prior - 1e-12 || c2 < prior + 1e-12) {
      c1 = prior;
      c2 = prior;
    }
  }

  if (c1 == prior && c2 == prior) {
    out.sigma = StochasticMatrixd::uninformative(2, 2);
  } else {
    const double p1 = (c2 - prior) / (c2 - c1);
    const double p2 = 1 - p1;
    DenseMatrix<double> b(2, 2);
    b << (1 - c1) * p1 / (1 - prior), c1 * p1 / prior,
         (1 - c2) * p2 / (1 - prior), c2 * p2 / prior;
    const DenseMatrix<double> xinv = x.matrix().inverse();
    std::optional<StochasticMatrixd> best;
    double best_trace = -1;
    for (int flip = 0; flip < 2; ++flip) {
      DenseMatrix<double> bb = b;
      if (flip) bb.row(0).swap(bb.row(1));
      DenseMatrix<double> s = bb * xinv;
      if (s.minCoeff() < -kTolerance || s.maxCoeff() > 1 + kTolerance) continue;
      s = s.cwiseMax(0.0).cwiseMin(1.0);
      for (Eigen::Index j = 0; j < 2; ++j) s.col(j) /= s.col(j).sum();
      if (s.trace() > best_trace + 1e-12) {
        best_trace = s.trace();
        best = StochasticMatrixd::validate(s);
      }
    }
    if (!best) {
      throw Error(ErrorKind::Tolerance,
                  "no stochastic garbling reproduces the mediator's optimal posteriors");
    }
    out.sigma = *best;
  }
  out.tau = induced_tau(compose(out.sigma, x), Belief(prior));
  out.value = expected_utility(u, out.tau);
  return out;
}

EquilibriumCertificate check_equilibrium(const GameSpec& game, const StochasticMatrixd& x,
                                         const StochasticMatrixd& sigma,
                                         const SenderSearch& search) {
  require_square2(x, "experiment");
  require_square2(sigma, "garbling");
  EquilibriumCertificate cert;
  cert.x = x;
  cert.sigma = sigma;
  cert.tau = induced_tau(compose(sigma, x), Belief(game.prior));
  cert.sender_value = expected_utility(game.sender, cert.tau);
  cert.mediator_value = expected_utility(game.mediator, cert.tau);
  cert.receiver_value = expected_utility(game.receiver, cert.tau);
  cert.sender_deviation = sender_best_response(game.sender, sigma, game.prior, search);
  cert.mediator_deviation = mediator_best_response(game.mediator, x, game.prior);
  cert.sender_gap = std::max(0.0, cert.sender_deviation.value - cert.sender_value);
  cert.mediator_gap = std::max(0.0, cert.mediator_deviation.value - cert.mediator_value);
  cert.tolerance = game.tol_dev;
  cert.verified = cert.sender_gap <= game.tol_dev && cert.mediator_gap <= game.tol_dev;
  return cert;
}

double outcome_distance(const BeliefDistributiond& a, const BeliefDistributiond& b) {
  return std::max(std::abs(a.lowest() - b.lowest()), std::abs(a.highest() - b.highest()));
}

// ---------------------------------------------------------------------------
// Equilibrium search

namespace {

struct Profile {
  double a, b, s1, s2;
};

struct Outcome {
  double lo, hi;
  double us, um;
};

Outcome evaluate(const GameSpec& g, const Profile& p) {
  const double pi = g.prior;
  const double b00 = p.s1 * p.a + p.s2 * (1 - p.a);
  const double b01 = p.s1 * p.b + p.s2 * (1 - p.b);
  const double q0 = (1 - pi) * b00 + pi * b01;
  const double q1 = 1 - q0;
  if (q0 <= 1e-14 || q1 <= 1e-14) return {pi, pi, g.sender(pi), g.mediator(pi)};
  const double post0 = std::clamp(pi * b01 / q0, 0.0, 1.0);
  const double post1 = std::clamp(pi * (1 - b01) / q1, 0.0, 1.0);
  if (std::abs(post0 - post1) <= kMergeTolerance) return {pi, pi, g.sender(pi), g.mediator(pi)};
  return {std::min(post0, post1), std::max(post0, post1),
          q0 * g.sender(post0) + q1 * g.sender(post1),
          q0 * g.mediator(post0) + q1 * g.mediator(post1)};
}

StochasticMatrixd experiment_of(const Profile& p) { return StochasticMatrixd::binary(p.a, p.b); }
StochasticMatrixd garbling_of(const Profile& p) { return StochasticMatrixd::binary(p.s1, p.s2); }

struct Member {
  double gap;
  std::size_t sigma_index, x_index;
  double lo, hi;
};

bool member_less(const Member& a, const Member& b) {
  return std::tie(a.gap, a.sigma_index, a.x_index) < std::tie(b.gap, b.sigma_index, b.x_index);
}

struct Bucket {
  std::size_t count = 0;
  std::vector<Member> best;  // up to kKeep lowest-gap members
};

constexpr std::size_t kKeep = 3;

void keep(Bucket& bucket, const Member& m) {
  ++bucket.count;
  bucket.best.push_back(m);
  std::sort(bucket.best.begin(), bucket.best.end(), member_less);
  if (bucket.best.size() > kKeep) bucket.best.pop_back();
}

/// Deviation gains at a profile using coarse sender search, with the
/// deviations themselves.
struct Probe {
  double gap = 0;
  double sender_gap = 0;
  double mediator_gap = 0;
  StochasticMatrixd sender_x = StochasticMatrixd::identity(2);
  StochasticMatrixd mediator_sigma = StochasticMatrixd::identity(2);
};

struct GapEval {
  const GameSpec& game;
  SenderSearch search = SenderSearch::light();

  Probe operator()(const Profile& p) const {
    const Outcome o = evaluate(game, p);
    const SenderResponse s =
        sender_best_response(game.sender, garbling_of(p), game.prior, search);
    const MediatorResponse m =
        mediator_best_response(game.mediator, experiment_of(p), game.prior);
    Probe out;
    out.sender_gap = std::max(0.0, s.value - o.us);
    out.mediator_gap = std::max(0.0, m.value - o.um);
    out.gap = std::max(out.sender_gap, out.mediator_gap);
    out.sender_x = s.x;
    out.mediator_sigma = m.sigma;
    return out;
  }
};

/// Local descent on the larger deviation gain: best-response jumps first,
/// then a compass search with shrinking steps, within a fixed budget.
Profile refine(const GapEval& gap, Profile p, double step, int budget = 60) {
  Probe cur = gap(p);
  const double tol = gap.game.tol_dev;
  auto try_move = [&](const Profile& q) {
    --budget;
    Probe next = gap(q);
    if (next.gap < cur.gap - 1e-12) {
      p = q;
      cur = std::move(next);
      return true;
    }
    return false;
  };
  for (int it = 0; it < 8 && cur.gap > tol && budget > 0; ++it) {
    const Profile jump_x{cur.sender_x(0, 0), cur.sender_x(0, 1), p.s1, p.s2};
    const Profile jump_s{p.a, p.b, cur.mediator_sigma(0, 0), cur.mediator_sigma(0, 1)};
    const bool sender_first = cur.sender_gap >= cur.mediator_gap;
    if (!try_move(sender_first ? jump_x : jump_s) && !try_move(sender_first ? jump_s : jump_x)) {
      break;
    }
  }
  for (int level = 0; level <= 5 && cur.gap > tol && budget > 0; ++level) {
    bool improved = true;
    while (improved && cur.gap > tol && budget > 0) {
      improved = false;
      for (int c = 0; c < 4 && !improved && budget > 0; ++c) {
        for (double sgn : {-1.0, 1.0}) {
          Profile q = p;
          double* coord[4] = {&q.a, &q.b, &q.s1, &q.s2};
          *coord[c] = std::clamp(*coord[c] + sgn * step, 0.0, 1.0);
          if (try_move(q)) {
            improved = true;
            break;
          }
        }
      }
    }
    step *= 0.5;
  }
  return p;
}

}  // namespace

SearchResult search_equilibria(const GameSpec& game) {
  SearchResult result;
  const int n = static_cast<int>(std::lround(1.0 / game.grid)) + 1;
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) vals[static_cast<std::size_t>(k)] = static_cast<double>(k) / (n - 1);
  const std::size_t count = vals.size() * vals.size();
  auto pair_at = [&](std::size_t idx) {
    return std::make_pair(vals[idx / vals.size()], vals[idx % vals.size()]);
  };

  // Best-response values for every garbling and every experiment on the grid.
  std::vector<double> sender_br(count);
  std::vector<double> mediator_br(count);
  const SenderSearch light = SenderSearch::light();
  parallel_for(count, [&](std::size_t i) {
    const auto [v, w] = pair_at(i);
    const auto m = StochasticMatrixd::binary(v, w);
    sender_br[i] = sender_best_response(game.sender, m, game.prior, light).value;
    mediator_br[i] = mediator_best_response(game.mediator, m, game.prior).value;
  });

  const double slope = std::max(game.sender.max_slope(), game.mediator.max_slope());
  result.screen_tolerance = std::max(game.tol_search, 0.5 * game.grid * slope);
  result.profiles = count * count;

  // Sweep every profile; bucket passing ones by outcome on a 0.01 lattice.
  using Key = std::pair<long, long>;
  std::vector<std::map<Key, Bucket>> per_sigma(count);
  std::vector<std::size_t> passing(count, 0);
  std::vector<std::size_t> tight(count, 0);
  parallel_for(count, [&](std::size_t si) {
    const auto [s1, s2] = pair_at(si);
    for (std::size_t xi = 0; xi < count; ++xi) {
      const auto [a, b] = pair_at(xi);
      const Outcome o = evaluate(game, {a, b, s1, s2});
      const double gap =
          std::max({0.0, sender_br[si] - o.us, mediator_br[xi] - o.um});
      if (gap <= game.tol_dev) ++tight[si];
      if (gap > result.screen_tolerance) continue;
      ++passing[si];
      const Key key{std::lround(o.lo * 100), std::lround(o.hi * 100)};
      keep(per_sigma[si][key], {gap, si, xi, o.lo, o.hi});
    }
  });
  std::map<Key, Bucket> buckets;
  for (std::size_t si = 0; si < count; ++si) {
    result.screened += passing[si];
    result.within_tolerance += tight[si];
    for (const auto& [key, bucket] : per_sigma[si]) {
      Bucket& into = buckets[key];
      into.count += bucket.count - bucket.best.size();
      for (const Member& m : bucket.best) keep(into, m);
    }
  }

  // Group buckets into outcome clusters around their best members.
  struct Group {
    double lo, hi;
    std::size_t members = 0;
    std::vector<Member> best;
  };
  std::vector<std::pair<Key, const Bucket*>> order;
  for (const auto& [key, bucket] : buckets) order.emplace_back(key, &bucket);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return member_less(a.second->best.front(), b.second->best.front());
  });
  std::vector<Group> groups;
  for (const auto& [key, bucket] : order) {
    const Member& lead = bucket->best.front();
    Group* home = nullptr;
    for (Group& g : groups) {
      if (std::max(std::abs(g.lo - lead.lo), std::abs(g.hi - lead.hi)) <= 0.02) {
        home = &g;
        break;
      }
    }
    if (!home) {
      groups.push_back({lead.lo, lead.hi, 0, {}});
      home = &groups.back();
    }
    home->members += bucket->count;
    for (const Member& m : bucket->best) {
      home->best.push_back(m);
      std::sort(home->best.begin(), home->best.end(), member_less);
      if (home->best.size() > kKeep) home->best.pop_back();
    }
  }

  // Refine the leading members of every group and certify the result.
  const GapEval gap{game};
  std::vector<EquilibriumCluster> found(groups.size());
  std::vector<char> accepted(groups.size(), 0);
  parallel_for(groups.size(), [&](std::size_t gi) {
    const Group& g = groups[gi];
    double best = std::numeric_limits<double>::infinity();
    for (const Member& m : g.best) {
      if (&m != &g.best.front() && best > result.screen_tolerance) break;
      const auto [s1, s2] = pair_at(m.sigma_index);
      const auto [a, b] = pair_at(m.x_index);
      const Profile p = refine(gap, {a, b, s1, s2}, 0.5 * game.grid);
      const EquilibriumCertificate cert =
          check_equilibrium(game, experiment_of(p), garbling_of(p));
      if (cert.gap() < best) {
        best = cert.gap();
        found[gi].representative = cert;
        found[gi].best_gap = cert.gap();
      }
      if (best <= game.tol_dev) break;
    }
    found[gi].members = g.members;
    accepted[gi] = best <= game.tol_search;
  });

  // Refinement can move neighbouring groups onto the same outcome.
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    if (!accepted[gi]) continue;
    EquilibriumCluster& c = found[gi];
    bool merged = false;
    for (EquilibriumCluster& kept : result.clusters) {
      if (outcome_distance(kept.representative.tau, c.representative.tau) <= 0.02) {
        kept.members += c.members;
        if (c.best_gap < kept.best_gap) {
          const std::size_t members = kept.members;
          kept = c;
          kept.members = members;
        }
        merged = true;
        break;
      }
    }
    if (!merged) result.clusters.push_back(c);
  }
  std::sort(result.clusters.begin(), result.clusters.end(),
            [](const EquilibriumCluster& a, const EquilibriumCluster& b) {
              const auto& ta = a.representative.tau;
              const auto& tb = b.representative.tau;
              if (ta.is_degenerate() != tb.is_degenerate()) return ta.is_degenerate();
              return std::make_pair(ta.lowest(), ta.highest()) <
                     std::make_pair(tb.lowest(), tb.highest());
            });
  return result;
}

const char* to_string(InformativenessRank rank) {
  switch (rank) {
    case InformativenessRank::Equivalent: return "equivalent";
    case InformativenessRank::MediatedMore: return "mediated-more-informative";
    case InformativenessRank::UnmediatedMore: return "unmediated-more-informative";
    case InformativenessRank::Unranked: return "unranked";
  }
  return "unranked";
}

ComparisonReport compare_outcomes(const GameSpec& game, const BeliefDistributiond& tau_mp,
                                  const BeliefDistributiond& tau_bp) {
  ComparisonReport r;
  r.mediated_spreads = is_mps(tau_mp, tau_bp);
  r.unmediated_spreads = is_mps(tau_bp, tau_mp);
  const bool fwd = r.mediated_spreads.holds;
  const bool bwd = r.unmediated_spreads.holds;
  if (fwd && bwd) {
    r.rank = InformativenessRank::Equivalent;
  } else if (fwd) {
    r.rank = InformativenessRank::MediatedMore;
  } else if (bwd) {
    r.rank = InformativenessRank::UnmediatedMore;
  }
  r.strictly_more_informative = fwd && !bwd;
  r.sender_delta = expected_utility(game.sender, tau_mp) - expected_utility(game.sender, tau_bp);
  r.mediator_delta =
      expected_utility(game.mediator, tau_mp) - expected_utility(game.mediator, tau_bp);
  r.receiver_delta =
      expected_utility(game.receiver, tau_mp) - expected_utility(game.receiver, tau_bp);
  r.receiver_benefits = r.receiver_delta > kTolerance;
  return r;
}

}  // namespace medpers
