#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "circirf/angle.hpp"
#include "circirf/covariance.hpp"
#include "circirf/linalg.hpp"
#include "circirf/measure.hpp"
#include "circirf/nil_space.hpp"

namespace circirf {

struct SolverOptions {
  /// Bordered systems whose estimated condition number exceeds this are rejected.
  double condition_limit = 1e14;
  int refinement_steps = 3;
  /// Two data angles closer than this (radians) count as the same location.
  double duplicate_tol = 1e-12;
};

/// Observations (t_i, y_i) on the circle. Locations must be distinct.
class Dataset {
public:
  Dataset(std::vector<Angle> points, std::vector<double> values, double duplicate_tol = 1e-12);

  const std::vector<Angle>& points() const noexcept { return points_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return points_.size(); }
  Eigen::VectorXd y() const;
  /// max_i |y_i|, or 1 for all-zero data.
  double scale() const;

private:
  std::vector<Angle> points_;
  std::vector<double> values_;
};

/// Functions q_1..q_l spanning the nil space: the elementary trigonometric
/// basis, or the cardinal functions p_nu of an RkhsBasis.
class TrendBasis {
public:
  static TrendBasis elementary(int kappa);
  static TrendBasis cardinal(RkhsBasis basis);

  int kappa() const noexcept { return nil_.kappa(); }
  int dimension() const noexcept { return nil_.dimension(); }
  bool is_cardinal() const noexcept { return cardinal_.has_value(); }
  Eigen::VectorXd operator()(Angle t) const;

private:
  explicit TrendBasis(NilSpaceBasis nil, std::optional<RkhsBasis> cardinal)
      : nil_(nil), cardinal_(std::move(cardinal)) {}

  NilSpaceBasis nil_;
  std::optional<RkhsBasis> cardinal_;
};

struct Prediction {
  Angle location;
  double value = 0.0;
  double kriging_variance = 0.0;
};

/// Kriging weights eta and Lagrange multipliers rho at one target point.
struct PrimalWeights {
  Eigen::VectorXd eta;
  Eigen::VectorXd rho;
};

/// A fitted universal kriging / smoothing model.
///
/// The bordered matrix [[K + nugget I, Q], [Q^T, 0]] is factorized once. The
/// dual coefficients (c, d) solve it against (y, 0) and give the smoothing
/// form  f(t0) = sum_nu d_nu q_nu(t0) + sum_i c_i k(t_i - t0);  the primal
/// weights solve it against (k(t_i - t0), q(t0)) and give eta^T y together
/// with the squared prediction error. K is the intrinsic covariance for
/// fit_universal and minus the semivariogram for fit_ordinary.
///
/// `nugget` is both the measurement-noise variance of the kriging reading and
/// the smoothing parameter alpha of the spline reading.
class UniversalKrigingModel {
public:
  int kappa() const noexcept { return trend_.kappa(); }
  double nugget() const noexcept { return nugget_; }
  const Dataset& data() const noexcept { return data_; }
  const TrendBasis& trend() const noexcept { return trend_; }
  const Eigen::VectorXd& dual_weights() const noexcept { return c_; }
  const Eigen::VectorXd& trend_coeffs() const noexcept { return d_; }

  /// Value from the cached dual coefficients only.
  double predict_value(Angle t0) const;
  /// Value from the dual path, variance from the primal weights at t0.
  Prediction predict(Angle t0) const;

  PrimalWeights primal_weights(Angle t0) const;
  /// eta^T y.
  double predict_primal(Angle t0) const;

  /// The aggregate k(0) - 2 eta^T k0 + eta^T (K + nugget I) eta at given weights.
  double squared_prediction_error(Angle t0, const Eigen::VectorXd& eta) const;

private:
  friend UniversalKrigingModel fit_universal(const Dataset&, const IntrinsicCovariance&, double,
                                             const std::optional<TrendBasis>&, const SolverOptions&);
  friend UniversalKrigingModel fit_ordinary(const Dataset&, const Semivariogram&, const SolverOptions&);

  UniversalKrigingModel(Dataset data, std::function<double(double)> structure, TrendBasis trend, double nugget,
                        const SolverOptions& options);

  Eigen::VectorXd structure_vector(Angle t0) const;

  Dataset data_;
  std::function<double(double)> structure_;
  TrendBasis trend_;
  double nugget_;
  Eigen::MatrixXd k_;  // K + nugget I
  Eigen::MatrixXd q_;
  std::shared_ptr<const SymmetricIndefiniteSolver> solver_;
  Eigen::VectorXd c_;
  Eigen::VectorXd d_;
};

/// Universal kriging with intrinsic covariance `cov`. Without an explicit
/// trend basis the elementary trigonometric functions of order < kappa are
/// used.
UniversalKrigingModel fit_universal(const Dataset& data, const IntrinsicCovariance& cov, double nugget,
                                    const std::optional<TrendBasis>& basis = std::nullopt,
                                    const SolverOptions& options = {});

/// Ordinary kriging from a semivariogram: Gamma eta - rho 1 = tau,
/// 1^T eta = 1, with Gamma = {tau(t_i - t_j)}.
UniversalKrigingModel fit_ordinary(const Dataset& data, const Semivariogram& sv, const SolverOptions& options = {});

/// sum_i eta_i delta(t_i) - delta(t0).
DiscreteMeasure unbiasedness_measure(const UniversalKrigingModel& model, Angle t0);

/// Least-squares fit of the elementary nil-space basis; the large-nugget limit.
Eigen::VectorXd trig_regression(const Dataset& data, int kappa);
double evaluate_trend(const Eigen::VectorXd& coeffs, Angle t);

}  // namespace circirf
