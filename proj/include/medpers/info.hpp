#pragma once

#include "medpers/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

namespace medpers {

/// Tolerance applied to every algebraic identity (column sums, Bayes
/// plausibility, witness checks). All published examples are exact rationals,
/// so double precision leaves a wide margin.
inline constexpr double kTolerance = 1e-9;

/// Two beliefs closer than this are the same atom of a belief distribution.
inline constexpr double kMergeTolerance = 1e-12;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Whether a validated matrix must have at least as many realizations (rows)
/// as conditioning outcomes (columns). Experiments and garblings do; garbling
/// witnesses between structures of different sizes need not.
enum class Richness { Required, NotRequired };

/// Column-stochastic matrix: entry (i, j) is the probability of realization i
/// conditional on j. Experiments, garblings and their composites all use it.
template <typename Scalar = double>
class StochasticMatrix {
 public:
  using Matrix = DenseMatrix<Scalar>;

  static StochasticMatrix validate(const Matrix& raw,
                                   Richness richness = Richness::Required,
                                   Scalar tol = Scalar(kTolerance)) {
    if (raw.rows() < 1 || raw.cols() < 1) {
      throw Error(ErrorKind::DimensionMismatch, "stochastic matrix is empty");
    }
    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
      for (Eigen::Index i = 0; i < raw.rows(); ++i) {
        const Scalar v = raw(i, j);
        if (!std::isfinite(static_cast<double>(v)) || v < -tol) {
          std::ostringstream msg;
          msg << "entry (" << i + 1 << ", " << j + 1 << ") = " << v
              << " is negative";
          throw Error(ErrorKind::NegativeEntry, msg.str());
        }
      }
    }
    Eigen::Index worst = 0;
    Scalar worst_dev = 0;
    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
      const Scalar dev = std::abs(raw.col(j).sum() - Scalar(1));
      if (dev > worst_dev) {
        worst_dev = dev;
        worst = j;
      }
    }
    if (worst_dev > tol) {
      std::ostringstream msg;
      msg << "column " << worst + 1 << " sums to " << raw.col(worst).sum()
          << " (deviation " << worst_dev << ")";
      throw Error(ErrorKind::ColumnSumMismatch, msg.str());
    }
    if (richness == Richness::Required && raw.rows() < raw.cols()) {
      std::ostringstream msg;
      msg << raw.rows() << " realizations for " << raw.cols()
          << " conditioning outcomes; need at least as many realizations";
      throw Error(ErrorKind::TooFewRealizations, msg.str());
    }
    return StochasticMatrix(raw.cwiseMax(Scalar(0)).cwiseMin(Scalar(1)));
  }

  static StochasticMatrix identity(Eigen::Index n) {
    return StochasticMatrix(Matrix::Identity(n, n));
  }

  /// Every column the uniform distribution: the canonical babbling structure.
  static StochasticMatrix uninformative(Eigen::Index rows, Eigen::Index cols) {
    return StochasticMatrix(Matrix::Constant(rows, cols, Scalar(1) / Scalar(rows)));
  }

  /// The 2x2 matrix (a b; 1-a 1-b).
  static StochasticMatrix binary(Scalar a, Scalar b) {
    Matrix m(2, 2);
    m << a, b, Scalar(1) - a, Scalar(1) - b;
    return validate(m);
  }

  Eigen::Index realizations() const { return m_.rows(); }
  Eigen::Index conditions() const { return m_.cols(); }
  const Matrix& matrix() const { return m_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  friend bool operator==(const StochasticMatrix& a, const StochasticMatrix& b) {
    return a.m_ == b.m_;
  }

 private:
  explicit StochasticMatrix(Matrix m) : m_(std::move(m)) {}

  Matrix m_;
};

using StochasticMatrixd = StochasticMatrix<double>;

/// Receiver posterior: probability of the second-listed (target) state.
template <typename Scalar = double>
class BasicBelief {
 public:
  constexpr BasicBelief() = default;
  explicit BasicBelief(Scalar value) : value_(value) {
    if (!(value >= Scalar(0) && value <= Scalar(1))) {
      std::ostringstream msg;
      msg << "belief " << value << " is outside [0, 1]";
      throw Error(ErrorKind::InvalidDistribution, msg.str());
    }
  }

  constexpr Scalar value() const { return value_; }

  friend constexpr auto operator<=>(const BasicBelief&, const BasicBelief&) = default;

 private:
  Scalar value_ = 0;
};

using Belief = BasicBelief<double>;

template <typename Scalar = double>
struct BeliefAtom {
  Scalar belief;
  Scalar prob;
};

/// Finite distribution over posteriors whose barycenter is the prior.
///
/// Atoms are kept sorted by belief with duplicates merged and zero-mass atoms
/// dropped, so two distributions describing the same outcome compare equal
/// atom by atom.
template <typename Scalar = double>
class BeliefDistribution {
 public:
  using Atom = BeliefAtom<Scalar>;

  static BeliefDistribution make(std::vector<Atom> atoms, Scalar prior,
                                 Scalar tol = Scalar(kTolerance)) {
    if (!(prior >= Scalar(0) && prior <= Scalar(1))) {
      throw Error(ErrorKind::InvalidDistribution, "prior is outside [0, 1]");
    }
    std::vector<Atom> kept;
    kept.reserve(atoms.size());
    Scalar total = 0;
    for (const Atom& a : atoms) {
      if (a.prob < -tol || !(a.belief >= -tol && a.belief <= Scalar(1) + tol)) {
        throw Error(ErrorKind::InvalidDistribution,
                    "atom has a negative probability or a belief outside [0, 1]");
      }
      total += a.prob;
      if (a.prob > Scalar(0)) {
        kept.push_back({std::clamp(a.belief, Scalar(0), Scalar(1)), a.prob});
      }
    }
    if (std::abs(total - Scalar(1)) > tol) {
      std::ostringstream msg;
      msg << "atom probabilities sum to " << total;
      throw Error(ErrorKind::InvalidDistribution, msg.str());
    }
    std::sort(kept.begin(), kept.end(),
              [](const Atom& a, const Atom& b) { return a.belief < b.belief; });
    std::vector<Atom> merged;
    for (const Atom& a : kept) {
      if (!merged.empty() &&
          std::abs(merged.back().belief - a.belief) <= Scalar(kMergeTolerance)) {
        Atom& m = merged.back();
        m.belief = (m.belief * m.prob + a.belief * a.prob) / (m.prob + a.prob);
        m.prob += a.prob;
      } else {
        merged.push_back(a);
      }
    }
    Scalar barycenter = 0;
    for (const Atom& a : merged) barycenter += a.prob * a.belief;
    if (std::abs(barycenter - prior) > tol) {
      std::ostringstream msg;
      msg << "barycenter " << barycenter << " differs from prior " << prior;
      throw Error(ErrorKind::BarycenterMismatch, msg.str());
    }
    return BeliefDistribution(std::move(merged), prior);
  }

  /// The babbling outcome: all mass on the prior.
  static BeliefDistribution point_mass(Scalar prior) { return make({{prior, Scalar(1)}}, prior); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  Scalar prior() const { return prior_; }
  bool is_degenerate() const { return atoms_.size() == 1; }

  Scalar lowest() const { return atoms_.front().belief; }
  Scalar highest() const { return atoms_.back().belief; }

 private:
  BeliefDistribution(std::vector<Atom> atoms, Scalar prior)
      : atoms_(std::move(atoms)), prior_(prior) {}

  std::vector<Atom> atoms_;
  Scalar prior_;
};

using BeliefDistributiond = BeliefDistribution<double>;

/// B = sigma * x: the distribution of signals given states when the signal is
/// drawn through sigma from the realization of x.
template <typename Scalar>
StochasticMatrix<Scalar> compose(const StochasticMatrix<Scalar>& sigma,
                                 const StochasticMatrix<Scalar>& x) {
  if (sigma.conditions() != x.realizations()) {
    std::ostringstream msg;
    msg << "cannot compose a " << sigma.realizations() << "x" << sigma.conditions()
        << " garbling with a " << x.realizations() << "x" << x.conditions()
        << " experiment";
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  DenseMatrix<Scalar> product = sigma.matrix() * x.matrix();
  return StochasticMatrix<Scalar>::validate(product, Richness::NotRequired);
}

namespace detail {

template <typename Scalar>
void require_binary_states(const StochasticMatrix<Scalar>& b) {
  if (b.conditions() != 2) {
    throw Error(ErrorKind::DimensionMismatch,
                "posterior computations need exactly two states (columns)");
  }
}

/// Posterior of the target state from the two state-conditional likelihoods.
template <typename Scalar>
Scalar bayes(Scalar likelihood_other, Scalar likelihood_target, Scalar prior) {
  const Scalar target = prior * likelihood_target;
  return target / (target + (Scalar(1) - prior) * likelihood_other);
}

}  // namespace detail

/// Unconditional probability of a signal under prior.
template <typename Scalar>
Scalar signal_probability(const StochasticMatrix<Scalar>& b, BasicBelief<Scalar> prior,
                          Eigen::Index signal) {
  detail::require_binary_states(b);
  return (Scalar(1) - prior.value()) * b(signal, 0) + prior.value() * b(signal, 1);
}

template <typename Scalar>
BasicBelief<Scalar> posterior_after_signal(const StochasticMatrix<Scalar>& b,
                                           BasicBelief<Scalar> prior, Eigen::Index signal) {
  detail::require_binary_states(b);
  if (signal < 0 || signal >= b.realizations()) {
    throw Error(ErrorKind::DimensionMismatch, "signal index out of range");
  }
  if (signal_probability(b, prior, signal) <= Scalar(0)) {
    std::ostringstream msg;
    msg << "signal " << signal + 1 << " has zero probability";
    throw Error(ErrorKind::ZeroProbabilitySignal, msg.str());
  }
  const Scalar p = detail::bayes(b(signal, 0), b(signal, 1), prior.value());
  return BasicBelief<Scalar>(std::clamp(p, Scalar(0), Scalar(1)));
}

/// The distribution of receiver posteriors generated by b at the prior.
/// Signals with zero probability are not part of the support.
template <typename Scalar>
BeliefDistribution<Scalar> induced_tau(const StochasticMatrix<Scalar>& b,
                                       BasicBelief<Scalar> prior) {
  detail::require_binary_states(b);
  std::vector<BeliefAtom<Scalar>> atoms;
  for (Eigen::Index s = 0; s < b.realizations(); ++s) {
    const Scalar prob = signal_probability(b, prior, s);
    if (prob <= Scalar(0)) continue;
    atoms.push_back({posterior_after_signal(b, prior, s).value(), prob});
  }
  Scalar total = 0;
  for (auto& a : atoms) total += a.prob;
  for (auto& a : atoms) a.prob /= total;
  return BeliefDistribution<Scalar>::make(std::move(atoms), prior.value());
}

/// Probabilities (p1, p2) placing b1 and b2 so the mean is the prior.
/// With b1 == b2 == prior the split is (1/2, 1/2) by convention.
template <typename Scalar>
std::pair<Scalar, Scalar> bayes_plausible_weights(BasicBelief<Scalar> b1,
                                                  BasicBelief<Scalar> b2,
                                                  BasicBelief<Scalar> prior) {
  const Scalar lo = std::min(b1.value(), b2.value());
  const Scalar hi = std::max(b1.value(), b2.value());
  const Scalar pi = prior.value();
  const Scalar eps = Scalar(kMergeTolerance);
  if (pi < lo - eps || pi > hi + eps) {
    std::ostringstream msg;
    msg << "prior " << pi << " is not between " << b1.value() << " and " << b2.value();
    throw Error(ErrorKind::PriorOutsideSupport, msg.str());
  }
  if (hi - lo <= eps) return {Scalar(0.5), Scalar(0.5)};
  const Scalar p1 = std::clamp((b2.value() - pi) / (b2.value() - b1.value()), Scalar(0),
                               Scalar(1));
  return {p1, Scalar(1) - p1};
}

struct GarblingRank {
  bool full = false;
  Eigen::Index rank = 0;
};

/// Numerical rank with singular values above 1e-9 counted.
template <typename Scalar>
GarblingRank garbling_rank(const StochasticMatrix<Scalar>& s) {
  Eigen::JacobiSVD<DenseMatrix<Scalar>> svd(s.matrix());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > Scalar(kTolerance)) ++rank;
  }
  const Eigen::Index most = std::min(s.realizations(), s.conditions());
  return {rank == most, rank};
}

template <typename Scalar>
bool is_full_rank(const StochasticMatrix<Scalar>& s) {
  return garbling_rank(s).full;
}

/// Posterior of a signal row along an affine path of matrices when the row has
/// vanished: the limit taken in the direction the row is moving.
template <typename Scalar>
Scalar limiting_posterior(Scalar row_other, Scalar row_target, Scalar dir_other,
                          Scalar dir_target, Scalar prior) {
  const Scalar mass = (Scalar(1) - prior) * row_other + prior * row_target;
  if (mass > Scalar(1e-300)) return detail::bayes(row_other, row_target, prior);
  return detail::bayes(std::abs(dir_other), std::abs(dir_target), prior);
}

}  // namespace medpers
