#pragma once

#include <vector>

#include <Eigen/Dense>

#include "circirf/angle.hpp"
#include "circirf/spectral.hpp"

namespace circirf {

/// A covariance value with the bound on what truncation left out. Closed-form
/// evaluations report a zero bound.
struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// Periodic spline kernel R(s, t) = 2 sum_{n>=1} n^-2m cos n(s - t) for
/// m in {1, 2}, through its polynomial closed form. Throws
/// UnsupportedOrderError for any other m.
double spline_kernel(int m, Angle s, Angle t);
/// Same kernel as a function of the lag.
double spline_kernel_lag(int m, double lag);

/// phi(theta) = offset + sum_{n >= kappa} gamma_n cos(n theta).
///
/// `offset` is zero for a plain spectral model; it carries the constant c0 -
/// phi(0) when the covariance was rebuilt from a semivariogram.
class IntrinsicCovariance {
public:
  enum class Mode { ClosedForm, Series };

  /// Picks the closed form whenever the spectrum is a scaled spline kernel.
  explicit IntrinsicCovariance(SpectralModel model, double offset = 0.0);
  IntrinsicCovariance(SpectralModel model, Mode mode, double offset = 0.0);

  const SpectralModel& model() const noexcept { return model_; }
  int kappa() const noexcept { return model_.kappa(); }
  Mode mode() const noexcept { return mode_; }
  double offset() const noexcept { return offset_; }

  SeriesValue evaluate(double lag) const;
  double operator()(double lag) const { return evaluate(lag).value; }

  /// {phi(t_i - t_j)}.
  Eigen::MatrixXd gram(const std::vector<Angle>& points) const;

private:
  SpectralModel model_;
  Mode mode_;
  double offset_;
};

SeriesValue phi_eval(const IntrinsicCovariance& cov, Angle theta);

/// tau(theta) = phi(0) - phi(theta) for an order-1 spectral model, plus the
/// shift c0 used to turn it back into a covariance.
class Semivariogram {
public:
  explicit Semivariogram(SpectralModel model, double c0 = 0.0);

  const SpectralModel& model() const noexcept { return model_; }
  double c0() const noexcept { return c0_; }

  double operator()(double lag) const;

private:
  SpectralModel model_;
  IntrinsicCovariance cov_;
  double c0_;
};

double semivariogram_eval(const Semivariogram& sv, Angle theta);

/// (1/pi) int_0^pi tau, by composite Simpson with 10^4 panels.
double variogram_shift_bound(const Semivariogram& sv);

/// phi = c0 - tau. Throws InvalidShiftError when c0 is below
/// variogram_shift_bound (relative tolerance 1e-6).
IntrinsicCovariance phi_from_variogram(const Semivariogram& sv);

}  // namespace circirf
