#pragma once

#include "medpers/info.hpp"
#include "medpers/linprog.hpp"

#include <optional>
#include <vector>

namespace medpers {

/// Outcome of a mean-preserving-spread test. When `holds`, `transition` is a
/// column-stochastic matrix over `support` (the union of both supports,
/// ascending) that maps the contracted mass vector onto the spread one while
/// preserving each point's mean.
template <typename Scalar = double>
struct MpsResult {
  bool holds = false;
  std::vector<Scalar> support;
  std::optional<DenseMatrix<Scalar>> transition;
};

namespace detail {

template <typename Scalar>
std::vector<Scalar> union_support(const BeliefDistribution<Scalar>& a,
                                  const BeliefDistribution<Scalar>& b) {
  std::vector<Scalar> pts;
  for (const auto& at : a.atoms()) pts.push_back(at.belief);
  for (const auto& at : b.atoms()) pts.push_back(at.belief);
  std::sort(pts.begin(), pts.end());
  std::vector<Scalar> out;
  for (Scalar p : pts) {
    if (out.empty() || std::abs(out.back() - p) > Scalar(kMergeTolerance)) out.push_back(p);
  }
  return out;
}

template <typename Scalar>
DenseVector<Scalar> mass_on(const BeliefDistribution<Scalar>& tau,
                            const std::vector<Scalar>& support) {
  DenseVector<Scalar> mass = DenseVector<Scalar>::Zero(static_cast<Eigen::Index>(support.size()));
  for (const auto& at : tau.atoms()) {
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (std::abs(support[i] - at.belief) <= Scalar(kMergeTolerance)) {
        mass(static_cast<Eigen::Index>(i)) += at.prob;
        break;
      }
    }
  }
  return mass;
}

}  // namespace detail

/// Checks that a transition matrix is a valid mean-preserving-spread witness:
/// column-stochastic, mean-preserving column by column, and T * contracted = spread.
template <typename Scalar>
bool validate_mps_witness(const DenseMatrix<Scalar>& transition,
                          const std::vector<Scalar>& support,
                          const BeliefDistribution<Scalar>& spread,
                          const BeliefDistribution<Scalar>& contracted,
                          Scalar tol = Scalar(kTolerance)) {
  const auto k = static_cast<Eigen::Index>(support.size());
  if (transition.rows() != k || transition.cols() != k) return false;
  if (transition.minCoeff() < -tol) return false;
  DenseVector<Scalar> points(k);
  for (Eigen::Index i = 0; i < k; ++i) points(i) = support[static_cast<std::size_t>(i)];
  for (Eigen::Index j = 0; j < k; ++j) {
    if (std::abs(transition.col(j).sum() - Scalar(1)) > tol) return false;
    if (std::abs(transition.col(j).dot(points) - points(j)) > tol) return false;
  }
  const DenseVector<Scalar> pushed = transition * detail::mass_on(contracted, support);
  return (pushed - detail::mass_on(spread, support)).cwiseAbs().maxCoeff() <= tol;
}

/// Whether `spread` is a mean-preserving spread of `contracted`.
///
/// Two-point spreads use the interval-containment criterion: a contraction is
/// reachable iff all of its mass sits inside the spread's hull, and the
/// transition is then forced. Larger supports are solved as a linear
/// feasibility problem over the transport plan from contracted to spread atoms.
template <typename Scalar>
MpsResult<Scalar> is_mps(const BeliefDistribution<Scalar>& spread,
                         const BeliefDistribution<Scalar>& contracted) {
  if (std::abs(spread.prior() - contracted.prior()) > Scalar(kTolerance)) {
    throw Error(ErrorKind::BarycenterMismatch,
                "distributions with different priors cannot be compared");
  }
  MpsResult<Scalar> result;
  result.support = detail::union_support(spread, contracted);
  const auto k = static_cast<Eigen::Index>(result.support.size());
  auto index_of = [&](Scalar b) {
    for (Eigen::Index i = 0; i < k; ++i) {
      if (std::abs(result.support[static_cast<std::size_t>(i)] - b) <= Scalar(kMergeTolerance))
        return i;
    }
    return Eigen::Index{-1};
  };

  DenseMatrix<Scalar> transition = DenseMatrix<Scalar>::Identity(k, k);
  const Scalar lo = spread.lowest();
  const Scalar hi = spread.highest();
  const Scalar eps = Scalar(kMergeTolerance);

  if (spread.size() <= 2) {
    for (const auto& at : contracted.atoms()) {
      if (at.belief < lo - eps || at.belief > hi + eps) return result;
    }
    if (spread.size() == 1) {
      // Only the point mass at the prior contracts onto itself.
      if (contracted.size() != 1) return result;
    } else {
      const Eigen::Index ilo = index_of(lo);
      const Eigen::Index ihi = index_of(hi);
      for (const auto& at : contracted.atoms()) {
        const Eigen::Index j = index_of(at.belief);
        const Scalar up = std::clamp((at.belief - lo) / (hi - lo), Scalar(0), Scalar(1));
        transition.col(j).setZero();
        transition(ilo, j) = Scalar(1) - up;
        transition(ihi, j) = up;
      }
    }
    result.holds = true;
    result.transition = std::move(transition);
    return result;
  }

  // Unknowns t(i, j): mass moved from contracted atom j to spread atom i.
  const auto& from = contracted.atoms();
  const auto& to = spread.atoms();
  const auto nf = static_cast<Eigen::Index>(from.size());
  const auto nt = static_cast<Eigen::Index>(to.size());
  const Eigen::Index rows = 2 * nf + nt;
  DenseMatrix<Scalar> A = DenseMatrix<Scalar>::Zero(rows, nf * nt);
  DenseVector<Scalar> b = DenseVector<Scalar>::Zero(rows);
  auto var = [nt](Eigen::Index i, Eigen::Index j) { return j * nt + i; };
  for (Eigen::Index j = 0; j < nf; ++j) {
    for (Eigen::Index i = 0; i < nt; ++i) {
      A(j, var(i, j)) = 1;
      A(nf + j, var(i, j)) = to[static_cast<std::size_t>(i)].belief;
      A(2 * nf + i, var(i, j)) = from[static_cast<std::size_t>(j)].prob;
    }
    b(j) = 1;
    b(nf + j) = from[static_cast<std::size_t>(j)].belief;
  }
  for (Eigen::Index i = 0; i < nt; ++i) b(2 * nf + i) = to[static_cast<std::size_t>(i)].prob;

  const auto plan = nonnegative_solution<Scalar>(A, b);
  if (!plan) return result;
  for (Eigen::Index j = 0; j < nf; ++j) {
    const Eigen::Index col = index_of(from[static_cast<std::size_t>(j)].belief);
    transition.col(col).setZero();
    for (Eigen::Index i = 0; i < nt; ++i) {
      transition(index_of(to[static_cast<std::size_t>(i)].belief), col) = (*plan)(var(i, j));
    }
  }
  result.holds = true;
  result.transition = std::move(transition);
  return result;
}

enum class BlackwellOrder { Dominates, DominatedBy, Equivalent, Unranked };

inline const char* to_string(BlackwellOrder order) {
  switch (order) {
    case BlackwellOrder::Dominates: return "dominates";
    case BlackwellOrder::DominatedBy: return "dominated";
    case BlackwellOrder::Equivalent: return "equivalent";
    case BlackwellOrder::Unranked: return "unranked";
  }
  return "unranked";
}

/// Result of comparing two information structures. `forward` garbles the
/// first into the second (forward * first == second), `backward` the reverse.
template <typename Scalar = double>
struct BlackwellResult {
  BlackwellOrder order = BlackwellOrder::Unranked;
  std::optional<DenseMatrix<Scalar>> forward;
  std::optional<DenseMatrix<Scalar>> backward;
};

template <typename Scalar>
bool validate_garbling_witness(const DenseMatrix<Scalar>& gamma,
                               const StochasticMatrix<Scalar>& from,
                               const StochasticMatrix<Scalar>& to,
                               Scalar tol = Scalar(kTolerance)) {
  if (gamma.cols() != from.realizations() || gamma.rows() != to.realizations()) return false;
  if (gamma.minCoeff() < -tol) return false;
  for (Eigen::Index j = 0; j < gamma.cols(); ++j) {
    if (std::abs(gamma.col(j).sum() - Scalar(1)) > tol) return false;
  }
  return (gamma * from.matrix() - to.matrix()).cwiseAbs().maxCoeff() < tol;
}

/// Garbling witness through the linear feasibility route: find a
/// column-stochastic gamma with gamma * from == to.
template <typename Scalar>
std::optional<DenseMatrix<Scalar>> garbling_via_feasibility(const StochasticMatrix<Scalar>& from,
                                                            const StochasticMatrix<Scalar>& to) {
  if (from.conditions() != to.conditions()) {
    throw Error(ErrorKind::DimensionMismatch,
                "structures condition on different numbers of outcomes");
  }
  const Eigen::Index m1 = from.realizations();
  const Eigen::Index m2 = to.realizations();
  const Eigen::Index n = from.conditions();
  // Unknown gamma(r, c) stored at c * m2 + r.
  DenseMatrix<Scalar> A = DenseMatrix<Scalar>::Zero(m2 * n + m1, m1 * m2);
  DenseVector<Scalar> b = DenseVector<Scalar>::Zero(m2 * n + m1);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index r = 0; r < m2; ++r) {
      for (Eigen::Index c = 0; c < m1; ++c) A(j * m2 + r, c * m2 + r) = from(c, j);
      b(j * m2 + r) = to(r, j);
    }
  }
  for (Eigen::Index c = 0; c < m1; ++c) {
    for (Eigen::Index r = 0; r < m2; ++r) A(m2 * n + c, c * m2 + r) = 1;
    b(m2 * n + c) = 1;
  }
  const auto sol = nonnegative_solution<Scalar>(A, b);
  if (!sol) return std::nullopt;
  DenseMatrix<Scalar> gamma(m2, m1);
  for (Eigen::Index c = 0; c < m1; ++c)
    for (Eigen::Index r = 0; r < m2; ++r) gamma(r, c) = (*sol)(c * m2 + r);
  if (!validate_garbling_witness(gamma, from, to)) return std::nullopt;
  return gamma;
}

/// Garbling witness in closed form for a square invertible `from`: the only
/// candidate is to * from^{-1}, whose columns already sum to one, so only
/// nonnegativity needs checking. Returns nullopt when `from` is singular.
template <typename Scalar>
std::optional<std::optional<DenseMatrix<Scalar>>> garbling_closed_form(
    const StochasticMatrix<Scalar>& from, const StochasticMatrix<Scalar>& to) {
  if (from.realizations() != from.conditions() || !is_full_rank(from)) return std::nullopt;
  if (to.conditions() != from.conditions()) {
    throw Error(ErrorKind::DimensionMismatch,
                "structures condition on different numbers of outcomes");
  }
  DenseMatrix<Scalar> gamma = to.matrix() * from.matrix().inverse();
  if (gamma.minCoeff() < -Scalar(kTolerance)) return std::optional<DenseMatrix<Scalar>>{};
  gamma = gamma.cwiseMax(Scalar(0));
  return std::optional<DenseMatrix<Scalar>>{gamma};
}

template <typename Scalar>
std::optional<DenseMatrix<Scalar>> find_garbling(const StochasticMatrix<Scalar>& from,
                                                 const StochasticMatrix<Scalar>& to) {
  if (auto closed = garbling_closed_form(from, to)) return *closed;
  return garbling_via_feasibility(from, to);
}

/// Blackwell comparison of s1 against s2 in both directions.
template <typename Scalar>
BlackwellResult<Scalar> blackwell_compare(const StochasticMatrix<Scalar>& s1,
                                          const StochasticMatrix<Scalar>& s2) {
  if (s1.conditions() != s2.conditions()) {
    throw Error(ErrorKind::DimensionMismatch,
                "structures condition on different numbers of outcomes");
  }
  BlackwellResult<Scalar> result;
  result.forward = find_garbling(s1, s2);
  result.backward = find_garbling(s2, s1);
  if (result.forward && result.backward) {
    result.order = BlackwellOrder::Equivalent;
  } else if (result.forward) {
    result.order = BlackwellOrder::Dominates;
  } else if (result.backward) {
    result.order = BlackwellOrder::DominatedBy;
  }
  return result;
}

}  // namespace medpers
