#include "circirf/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "circirf/errors.hpp"

namespace circirf {

SymmetricIndefiniteSolver::SymmetricIndefiniteSolver(Eigen::MatrixXd matrix, double condition_limit,
                                                     int refinement_steps)
    : matrix_(std::move(matrix)), factor_(matrix_), refinement_steps_(refinement_steps) {
  const auto n = static_cast<lapack_int>(matrix_.rows());
  if (matrix_.cols() != matrix_.rows()) throw std::invalid_argument("solver needs a square matrix");
  pivots_.assign(static_cast<std::size_t>(n), 0);
  if (n == 0) return;

  const double anorm = matrix_.cwiseAbs().colwise().sum().maxCoeff();
  const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, factor_.data(), n, pivots_.data());
  if (info < 0) throw NumericalError("dsytrf rejected its arguments");
  if (info > 0) {
    std::ostringstream msg;
    msg << "bordered system is exactly singular (zero pivot at " << info << ")";
    throw ConditioningError(msg.str());
  }
  const lapack_int cinfo =
      LAPACKE_dsycon(LAPACK_COL_MAJOR, 'L', n, factor_.data(), n, pivots_.data(), anorm, &rcond_);
  if (cinfo != 0) throw NumericalError("dsycon failed");
  if (!(rcond_ * condition_limit >= 1.0)) {
    std::ostringstream msg;
    msg << "bordered system is numerically singular (estimated reciprocal condition " << rcond_ << ")";
    throw ConditioningError(msg.str());
  }
}

Eigen::VectorXd SymmetricIndefiniteSolver::solve_once(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = rhs;
  const auto n = static_cast<lapack_int>(matrix_.rows());
  if (n == 0) return x;
  const lapack_int info =
      LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', n, 1, factor_.data(), n, pivots_.data(), x.data(), n);
  if (info != 0) throw NumericalError("dsytrs failed");
  return x;
}

Eigen::VectorXd SymmetricIndefiniteSolver::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = solve_once(rhs);
  double last = std::numeric_limits<double>::infinity();
  for (int step = 0; step < refinement_steps_; ++step) {
    const Eigen::VectorXd r = rhs - matrix_ * x;
    const double norm = r.lpNorm<Eigen::Infinity>();
    if (norm == 0.0 || !(norm < last)) break;
    last = norm;
    x += solve_once(r);
  }
  return x;
}

double min_eigenvalue_ratio(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("eigenvalue computation did not converge");
  const auto& ev = eig.eigenvalues();
  const double radius = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  if (radius == 0.0) return 0.0;
  return ev.minCoeff() / radius;
}

}  // namespace circirf
