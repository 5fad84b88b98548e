#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace medpers {

/// Finds x >= 0 with A x = b, or reports that none exists.
///
/// Phase one of the tableau simplex method with Bland's rule: an artificial
/// variable is attached to every row and their sum is driven to zero. The
/// instances solved here (Blackwell garbling witnesses and mean-preserving
/// transition matrices) have at most a few dozen unknowns, so a dense tableau
/// is adequate. Redundant equality rows are allowed; their artificials simply
/// stay basic at zero.
template <typename Scalar>
std::optional<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> nonnegative_solution(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
    Scalar tol = Scalar(1e-9)) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  const Eigen::Index rows = A.rows();
  const Eigen::Index vars = A.cols();
  const Eigen::Index width = vars + rows + 1;
  const Scalar pivot_eps = Scalar(1e-12);

  Matrix tableau = Matrix::Zero(rows + 1, width);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Scalar sign = b(i) < 0 ? Scalar(-1) : Scalar(1);
    tableau.row(i).head(vars) = sign * A.row(i);
    tableau(i, vars + i) = Scalar(1);
    tableau(i, width - 1) = sign * b(i);
    basis[static_cast<std::size_t>(i)] = vars + i;
  }
  // Reduced costs of the phase-one objective (sum of artificials).
  for (Eigen::Index i = 0; i < rows; ++i) {
    tableau.row(rows).head(vars) -= tableau.row(i).head(vars);
    tableau(rows, width - 1) -= tableau(i, width - 1);
  }

  const int max_iterations = 50 * static_cast<int>(width + rows);
  for (int iter = 0; iter < max_iterations; ++iter) {
    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < width - 1; ++j) {
      if (tableau(rows, j) < -pivot_eps) {
        entering = j;
        break;
      }
    }
    if (entering < 0) break;

    Eigen::Index leaving = -1;
    Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Scalar coeff = tableau(i, entering);
      if (coeff <= pivot_eps) continue;
      const Scalar ratio = tableau(i, width - 1) / coeff;
      if (ratio < best_ratio - pivot_eps ||
          (std::abs(ratio - best_ratio) <= pivot_eps && leaving >= 0 &&
           basis[static_cast<std::size_t>(i)] <
               basis[static_cast<std::size_t>(leaving)])) {
        best_ratio = ratio;
        leaving = i;
      }
    }
    if (leaving < 0) break;  // unbounded direction; cannot happen in phase one

    tableau.row(leaving) /= tableau(leaving, entering);
    for (Eigen::Index i = 0; i <= rows; ++i) {
      if (i == leaving) continue;
      const Scalar factor = tableau(i, entering);
      if (factor != Scalar(0)) tableau.row(i) -= factor * tableau.row(leaving);
    }
    basis[static_cast<std::size_t>(leaving)] = entering;
  }

  if (-tableau(rows, width - 1) > tol) return std::nullopt;

  Vector x = Vector::Zero(vars);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index j = basis[static_cast<std::size_t>(i)];
    if (j < vars) x(j) = std::max(Scalar(0), tableau(i, width - 1));
  }
  if ((A * x - b).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  return x;
}

}  // namespace medpers
