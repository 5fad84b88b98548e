#include "medpers/feasible.hpp"

#include "medpers/parallel.hpp"

#include <cmath>
#include <sstream>

namespace medpers {

const char* to_string(Family family) {
  switch (family) {
    case Family::X1: return "X1";
    case Family::X2: return "X2";
    case Family::X3: return "X3";
    case Family::X4: return "X4";
  }
  return "X1";
}

namespace {

constexpr std::array<Family, 4> kFamilies = {Family::X1, Family::X2, Family::X3, Family::X4};

DenseMatrix<double> family_direction(Family family) {
  DenseMatrix<double> d(2, 2);
  switch (family) {
    case Family::X1:
    case Family::X2: d << 0, 1, 0, -1; break;
    case Family::X3:
    case Family::X4: d << 1, 0, -1, 0; break;
  }
  return d;
}

void require_full_rank(const StochasticMatrixd& sigma) {
  if (sigma.realizations() != 2 || sigma.conditions() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "feasible sets need a 2x2 garbling");
  }
  if (!is_full_rank(sigma)) {
    throw Error(ErrorKind::SingularGarbling,
                "garbling is rank-deficient; every experiment yields the prior");
  }
}

bool near(double a, double b) { return std::abs(a - b) <= kMergeTolerance; }

std::optional<StochasticMatrixd> preimage(const StochasticMatrixd& sigma, double prior,
                                          double b1, double b2) {
  if (near(b1, prior) && near(b2, prior)) return StochasticMatrixd::uninformative(2, 2);
  if (prior <= 0 || prior >= 1) {
    throw Error(ErrorKind::DegeneratePrior,
                "a prior of 0 or 1 admits only the uninformative outcome");
  }
  const bool natural = b1 <= prior + kMergeTolerance && b2 >= prior - kMergeTolerance;
  const bool perverse = b1 >= prior - kMergeTolerance && b2 <= prior + kMergeTolerance;
  if ((!natural && !perverse) || near(b1, b2)) return std::nullopt;

  const double p1 = std::clamp((b2 - prior) / (b2 - b1), 0.0, 1.0);
  const double p2 = 1.0 - p1;
  DenseMatrix<double> b(2, 2);
  b << (1 - b1) * p1 / (1 - prior), b1 * p1 / prior,
       (1 - b2) * p2 / (1 - prior), b2 * p2 / prior;
  DenseMatrix<double> x = sigma.matrix().inverse() * b;
  if (x.minCoeff() < -kTolerance || x.maxCoeff() > 1 + kTolerance) return std::nullopt;
  x = x.cwiseMax(0.0).cwiseMin(1.0);
  for (Eigen::Index j = 0; j < 2; ++j) x.col(j) /= x.col(j).sum();
  return StochasticMatrixd::validate(x);
}

}  // namespace

StochasticMatrixd family_experiment(Family family, double p) {
  DenseMatrix<double> x(2, 2);
  switch (family) {
    case Family::X1: x << 1, p, 0, 1 - p; break;
    case Family::X2: x << 0, p, 1, 1 - p; break;
    case Family::X3: x << p, 1, 1 - p, 0; break;
    case Family::X4: x << p, 0, 1 - p, 1; break;
  }
  return StochasticMatrixd::validate(x);
}

CurveSample posterior_pair(const StochasticMatrixd& sigma, const StochasticMatrixd& x,
                           double prior, const DenseMatrix<double>* direction) {
  const DenseMatrix<double> b = sigma.matrix() * x.matrix();
  DenseMatrix<double> d = DenseMatrix<double>::Zero(2, 2);
  if (direction) d = sigma.matrix() * *direction;
  CurveSample out;
  double post[2];
  double prob[2];
  for (int s = 0; s < 2; ++s) {
    prob[s] = (1 - prior) * b(s, 0) + prior * b(s, 1);
    if (prob[s] > 0 || direction) {
      post[s] = limiting_posterior(b(s, 0), b(s, 1), d(s, 0), d(s, 1), prior);
      if (!std::isfinite(post[s])) post[s] = prior;
    } else {
      post[s] = prior;
    }
    post[s] = std::clamp(post[s], 0.0, 1.0);
  }
  out.point = {post[0], post[1]};
  out.prob1 = prob[0];
  out.prob2 = prob[1];
  return out;
}

std::array<BoundaryCurve, 4> boundary_curves(const StochasticMatrixd& sigma, double prior,
                                             int n_points) {
  require_full_rank(sigma);
  if (n_points < 2) throw Error(ErrorKind::DimensionMismatch, "need at least two samples");
  std::array<BoundaryCurve, 4> curves;
  for (std::size_t f = 0; f < kFamilies.size(); ++f) {
    curves[f].family = kFamilies[f];
    const DenseMatrix<double> dir = family_direction(kFamilies[f]);
    curves[f].samples.resize(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
      const double p = static_cast<double>(i) / (n_points - 1);
      CurveSample s = posterior_pair(sigma, family_experiment(kFamilies[f], p), prior, &dir);
      s.p = p;
      curves[f].samples[static_cast<std::size_t>(i)] = s;
    }
  }
  return curves;
}

StochasticMatrixd reconstruct_experiment(const StochasticMatrixd& sigma, double prior,
                                         const BeliefDistributiond& tau) {
  require_full_rank(sigma);
  if (tau.size() > 2) {
    throw Error(ErrorKind::DimensionMismatch, "two signals support at most two posteriors");
  }
  if (std::abs(tau.prior() - prior) > kTolerance) {
    throw Error(ErrorKind::BarycenterMismatch, "distribution does not average to the prior");
  }
  if (tau.is_degenerate()) {
    if (!near(tau.lowest(), prior) && std::abs(tau.lowest() - prior) > kTolerance) {
      throw Error(ErrorKind::BarycenterMismatch, "point mass away from the prior");
    }
    return StochasticMatrixd::uninformative(2, 2);
  }
  const double lo = tau.lowest();
  const double hi = tau.highest();
  if (auto x = preimage(sigma, prior, lo, hi)) return *x;
  if (auto x = preimage(sigma, prior, hi, lo)) return *x;
  std::ostringstream msg;
  msg << "posteriors {" << lo << ", " << hi << "} cannot be induced through this garbling";
  throw Error(ErrorKind::NotSigmaPlausible, msg.str());
}

std::optional<StochasticMatrixd> membership(const StochasticMatrixd& sigma, double prior,
                                            double b1, double b2) {
  require_full_rank(sigma);
  return preimage(sigma, prior, b1, b2);
}

bool is_natural(BeliefPair p, double prior, double tol) {
  return p.b1 <= prior + tol && p.b2 >= prior - tol;
}

bool is_perverse(BeliefPair p, double prior, double tol) {
  return p.b1 >= prior - tol && p.b2 <= prior + tol;
}

bool FeasibleSet::contains(BeliefPair p, double tol) const {
  return polygon_contains(left, p, tol) || polygon_contains(right, p, tol);
}

FeasibleSet wing_polygons(const StochasticMatrixd& sigma, double prior, int n_points,
                          bool refine) {
  require_full_rank(sigma);
  FeasibleSet set;
  set.garbling = sigma;
  set.prior = prior;
  set.origin = {prior, prior};

  auto build = [&](int n) {
    std::vector<BeliefPair> left{set.origin};
    std::vector<BeliefPair> right{set.origin};
    for (const auto& curve : boundary_curves(sigma, prior, n)) {
      for (const auto& s : curve.samples) {
        if (is_natural(s.point, prior)) left.push_back(s.point);
        if (is_perverse(s.point, prior)) right.push_back(s.point);
      }
    }
    set.left = convex_hull(std::move(left));
    set.right = convex_hull(std::move(right));
    set.samples_per_curve = n;
    return polygon_area(set.left) + polygon_area(set.right);
  };

  int n = std::max(n_points, 2);
  double area = build(n);
  constexpr int kMaxSamples = (1 << 14) + 1;
  while (refine && n < kMaxSamples) {
    const int finer = 2 * (n - 1) + 1;
    const double next = build(finer);
    n = finer;
    if (std::abs(next - area) < 1e-6) break;
    area = next;
  }
  return set;
}

StochasticMatrixd random_experiment(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double a = unit(rng);
  const double b = unit(rng);
  return StochasticMatrixd::binary(a, b);
}

NestingReport nesting_report(const StochasticMatrixd& s1, const StochasticMatrixd& s2,
                             double prior, std::size_t n_samples, std::uint64_t seed) {
  require_full_rank(s1);
  require_full_rank(s2);
  std::mt19937_64 rng(seed);
  std::vector<StochasticMatrixd> xs;
  xs.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) xs.push_back(random_experiment(rng));

  std::optional<DenseMatrix<double>> lift;
  if (auto gamma = find_garbling(s1, s2)) {
    lift = s1.matrix().inverse() * (*gamma) * s1.matrix();
  }

  struct Outcome {
    bool member = true;
    bool witness_checked = false;
    bool witness_ok = true;
    BeliefPair point;
  };
  std::vector<Outcome> outcomes(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    const auto& x = xs[i];
    const CurveSample s = posterior_pair(s2, x, prior);
    Outcome& o = outcomes[i];
    o.point = s.point;
    o.member = membership(s1, prior, s.point.b1, s.point.b2).has_value();
    if (lift) {
      o.witness_checked = true;
      const DenseMatrix<double> y = (*lift) * x.matrix();
      bool ok = y.minCoeff() >= -kTolerance && y.maxCoeff() <= 1 + kTolerance;
      for (Eigen::Index j = 0; ok && j < 2; ++j) ok = std::abs(y.col(j).sum() - 1) <= kTolerance;
      if (ok) {
        const auto direct = induced_tau(compose(s2, x), Belief(prior));
        const auto via = induced_tau(
            compose(s1, StochasticMatrixd::validate(y.cwiseMax(0.0))), Belief(prior));
        ok = direct.size() == via.size();
        for (std::size_t a = 0; ok && a < direct.size(); ++a) {
          ok = std::abs(direct.atoms()[a].belief - via.atoms()[a].belief) <= kTolerance &&
               std::abs(direct.atoms()[a].prob - via.atoms()[a].prob) <= kTolerance;
        }
      }
      o.witness_ok = ok;
    }
  });

  NestingReport report;
  report.samples = n_samples;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Outcome& o = outcomes[i];
    if (o.witness_checked) ++report.witnesses_checked;
    if (!o.witness_ok) ++report.witness_failures;
    if (!o.member) report.violations.push_back({o.point, xs[i]});
  }
  report.nested = report.violations.empty();
  return report;
}

SymmetryReport symmetry_report(const StochasticMatrixd& sigma, double prior,
                               std::size_t n_samples, std::uint64_t seed) {
  require_full_rank(sigma);
  std::mt19937_64 rng(seed);
  std::vector<StochasticMatrixd> xs;
  xs.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) xs.push_back(random_experiment(rng));
  std::vector<BeliefPair> points(n_samples);
  std::vector<char> mirrored(n_samples, 1);
  parallel_for(n_samples, [&](std::size_t i) {
    points[i] = posterior_pair(sigma, xs[i], prior).point;
    mirrored[i] = membership(sigma, prior, points[i].b2, points[i].b1).has_value();
  });
  SymmetryReport report;
  report.samples = n_samples;
  for (std::size_t i = 0; i < n_samples; ++i) {
    if (!mirrored[i]) {
      report.symmetric = false;
      report.witness = points[i];
      break;
    }
  }
  return report;
}

namespace {

void simplex_grid(int parts, int units, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    current.push_back(units);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int k = 0; k <= units; ++k) {
    current.push_back(k);
    simplex_grid(parts - 1, units - k, current, out);
    current.pop_back();
  }
}

}  // namespace

void visit_feasible_general(
    const StochasticMatrixd& sigma, double prior, double resolution,
    const std::function<void(const StochasticMatrixd&, const BeliefDistributiond&)>& visit) {
  if (!(resolution > 0 && resolution <= 1)) {
    throw Error(ErrorKind::DimensionMismatch, "grid resolution must lie in (0, 1]");
  }
  const Eigen::Index m = sigma.realizations();
  if (sigma.conditions() != m) {
    throw Error(ErrorKind::DimensionMismatch, "general sampler needs a square garbling");
  }
  const int units = static_cast<int>(std::lround(1.0 / resolution));
  std::vector<std::vector<int>> columns;
  std::vector<int> scratch;
  simplex_grid(static_cast<int>(m), units, scratch, columns);

  DenseMatrix<double> x(m, 2);
  for (const auto& c1 : columns) {
    for (const auto& c2 : columns) {
      for (Eigen::Index i = 0; i < m; ++i) {
        x(i, 0) = static_cast<double>(c1[static_cast<std::size_t>(i)]) / units;
        x(i, 1) = static_cast<double>(c2[static_cast<std::size_t>(i)]) / units;
      }
      const auto b = StochasticMatrixd::validate(sigma.matrix() * x, Richness::NotRequired);
      visit(b, induced_tau(b, Belief(prior)));
    }
  }
}

std::vector<BeliefDistributiond> sample_feasible_general(const StochasticMatrixd& sigma,
                                                         double prior, double resolution) {
  std::vector<BeliefDistributiond> out;
  visit_feasible_general(sigma, prior, resolution,
                         [&](const StochasticMatrixd&, const BeliefDistributiond& tau) {
                           out.push_back(tau);
                         });
  return out;
}

}  // namespace medpers
