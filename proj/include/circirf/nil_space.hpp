#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "circirf/angle.hpp"

namespace circirf {

/// Trigonometric polynomials of degree < kappa:
/// {1, cos t, sin t, ..., cos (kappa-1)t, sin (kappa-1)t}, dimension 2 kappa - 1.
class NilSpaceBasis {
public:
  explicit NilSpaceBasis(int kappa);

  int kappa() const noexcept { return kappa_; }
  int dimension() const noexcept { return 2 * kappa_ - 1; }

  /// All basis functions at t, in the order listed above.
  Eigen::VectorXd evaluate(Angle t) const;

  /// Rows are points, columns are basis functions.
  Eigen::MatrixXd design(const std::vector<Angle>& points) const;

private:
  int kappa_;
};

/// Condition number above which a collocation matrix counts as singular.
inline constexpr double kUnisolvencyConditionLimit = 1e12;

/// Unisolvent points tau_1..tau_l with their cardinal functions p_nu,
/// p_nu(tau_mu) = delta(nu, mu). Column nu of `cardinal_coeffs` holds p_nu in
/// the nil-space basis.
class RkhsBasis {
public:
  const NilSpaceBasis& nil_space() const noexcept { return nil_space_; }
  int kappa() const noexcept { return nil_space_.kappa(); }
  int dimension() const noexcept { return nil_space_.dimension(); }
  const std::vector<Angle>& tau_points() const noexcept { return tau_; }
  const Eigen::MatrixXd& cardinal_coeffs() const noexcept { return coeffs_; }

  /// (p_1(t), ..., p_l(t)).
  Eigen::VectorXd cardinal(Angle t) const;

private:
  friend RkhsBasis build_rkhs_basis(int kappa, std::optional<std::vector<Angle>> tau_points);
  RkhsBasis(NilSpaceBasis nil, std::vector<Angle> tau, Eigen::MatrixXd coeffs)
      : nil_space_(nil), tau_(std::move(tau)), coeffs_(std::move(coeffs)) {}

  NilSpaceBasis nil_space_;
  std::vector<Angle> tau_;
  Eigen::MatrixXd coeffs_;
};

/// Equispaced tau_nu = 2 pi (nu - 1) / l.
std::vector<Angle> equispaced_tau(int kappa);

/// Solve the collocation system for the cardinal functions. Without points,
/// the equispaced set is used. Throws ConfigurationError when the points are
/// not unisolvent (collocation condition number above 1e12).
RkhsBasis build_rkhs_basis(int kappa, std::optional<std::vector<Angle>> tau_points = std::nullopt);

}  // namespace circirf
