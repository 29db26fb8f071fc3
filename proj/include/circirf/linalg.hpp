#pragma once

#include <vector>

#include <Eigen/Dense>

namespace circirf {

/// Symmetric-indefinite (Bunch-Kaufman) factorization with iterative
/// refinement against the unfactored matrix.
class SymmetricIndefiniteSolver {
public:
  /// Throws ConditioningError when the matrix is exactly singular or its
  /// estimated reciprocal condition number falls below 1 / condition_limit.
  SymmetricIndefiniteSolver(Eigen::MatrixXd matrix, double condition_limit, int refinement_steps);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  double rcond() const noexcept { return rcond_; }

private:
  Eigen::VectorXd solve_once(const Eigen::VectorXd& rhs) const;

  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd factor_;
  std::vector<int> pivots_;
  double rcond_ = 0.0;
  int refinement_steps_ = 0;
};

/// Smallest eigenvalue divided by the spectral radius of a symmetric matrix.
double min_eigenvalue_ratio(const Eigen::MatrixXd& symmetric);

}  // namespace circirf
