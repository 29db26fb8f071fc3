#pragma once

#include <vector>

#include <Eigen/Dense>

#include "circirf/angle.hpp"
#include "circirf/covariance.hpp"
#include "circirf/nil_space.hpp"
#include "circirf/spectral.hpp"

namespace circirf {

/// f(t) = a0 + sum_{n=1}^{N} (a_{n,c} cos nt + a_{n,s} sin nt).
///
/// Finite trigonometric series stand in for members of the function space;
/// every object the library reasons about (nil-space elements, kernel
/// sections with finite spectra, fitted predictors) has this form.
class TruncatedFunction {
public:
  TruncatedFunction() = default;
  /// cos_coeffs[k] and sin_coeffs[k] belong to frequency k + 1.
  TruncatedFunction(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  static TruncatedFunction constant(double a0) { return TruncatedFunction(a0, {}, {}); }
  static TruncatedFunction cosine(int n, double amplitude = 1.0);
  static TruncatedFunction sine(int n, double amplitude = 1.0);

  double a0() const noexcept { return a0_; }
  double cos_coeff(int n) const noexcept;
  double sin_coeff(int n) const noexcept;
  int degree() const noexcept { return static_cast<int>(cos_.size()); }

  double operator()(Angle t) const;

  TruncatedFunction operator+(const TruncatedFunction& other) const;
  TruncatedFunction operator*(double scale) const;

private:
  double a0_ = 0.0;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// <f, g>_kappa = sum_{n >= kappa} (a_{n,c,f} a_{n,c,g} + a_{n,s,f} a_{n,s,g}) / gamma_n.
/// Throws InfiniteNormError when both f and g carry energy at a frequency the
/// model gives no spectral mass.
double semi_inner_product(const TruncatedFunction& f, const TruncatedFunction& g, const SpectralModel& model);

/// The reproducing kernel H(x, y) built from an intrinsic covariance and a set
/// of unisolvent points:
///
///   H(x,y) = phi(x-y) - sum_nu [phi(x-tau_nu) p_nu(y) + phi(y-tau_nu) p_nu(x)]
///          + sum_nu sum_mu phi(tau_nu - tau_mu) p_nu(x) p_mu(y)
///          + sum_nu p_nu(x) p_nu(y).
///
/// H itself is treated as the canonical covariance of the equivalence class;
/// a different tau set changes H but not any aggregate under allowable
/// measures.
class RkhsKernel {
public:
  RkhsKernel(IntrinsicCovariance covariance, RkhsBasis basis);

  const IntrinsicCovariance& covariance() const noexcept { return cov_; }
  const RkhsBasis& basis() const noexcept { return basis_; }
  int kappa() const noexcept { return basis_.kappa(); }

  double operator()(Angle x, Angle y) const;
  Eigen::MatrixXd gram(const std::vector<Angle>& points) const;

  /// H(x, .) as a trigonometric series, read off the regrouped expansion
  ///   sum_nu p_nu(x) p_nu(y) + sum_n gamma_n [C_n(x) C_n(y) + S_n(x) S_n(y)],
  ///   C_n(t) = cos nt - sum_nu cos(n tau_nu) p_nu(t)  (S_n likewise),
  /// over the spectral model's represented frequencies.
  TruncatedFunction section(Angle x) const;

private:
  IntrinsicCovariance cov_;
  RkhsBasis basis_;
  Eigen::MatrixXd phi_tau_;  // phi(tau_nu - tau_mu)
};

double kernel_eval(const RkhsKernel& k, Angle x, Angle y);

/// sum_nu f(tau_nu) g(tau_nu) + <f, g>_kappa.
double full_inner_product(const TruncatedFunction& f, const TruncatedFunction& g, const RkhsKernel& k);

}  // namespace circirf
