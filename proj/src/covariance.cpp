#include "circirf/covariance.hpp"

#include <cmath>
#include <sstream>

#include "circirf/errors.hpp"

namespace circirf {

namespace {

constexpr int kSimpsonPanels = 10000;
constexpr double kShiftRelTol = 1e-6;

// Canonical lag representative in [0, 2pi).
double lag_representative(double lag) { return canonical_radians(lag); }

}  // namespace

double spline_kernel_lag(int m, double lag) {
  const double d = lag_representative(lag);
  // d (2pi - d) is symmetric under d -> 2pi - d, which is what makes the
  // polynomial forms periodic on [0, 2pi).
  const double u = d * (kTwoPi - d);
  switch (m) {
    case 1:
      // d^2/2 - pi d + pi^2/3
      return kPi * kPi / 3.0 - 0.5 * u;
    case 2:
      // -d^4/24 + pi d^3/6 - pi^2 d^2/6 + pi^4/45
      return kPi * kPi * kPi * kPi / 45.0 - u * u / 24.0;
    default: {
      std::ostringstream msg;
      msg << "spline kernel order m = " << m << " is not supported; use 1 or 2";
      throw UnsupportedOrderError(msg.str());
    }
  }
}

double spline_kernel(int m, Angle s, Angle t) { return spline_kernel_lag(m, s.radians() - t.radians()); }

IntrinsicCovariance::IntrinsicCovariance(SpectralModel model, double offset)
    : IntrinsicCovariance(model, model.spline_order() ? Mode::ClosedForm : Mode::Series, offset) {}

IntrinsicCovariance::IntrinsicCovariance(SpectralModel model, Mode mode, double offset)
    : model_(std::move(model)), mode_(mode), offset_(offset) {
  if (mode_ == Mode::ClosedForm && !model_.spline_order())
    throw ConfigurationError("closed-form evaluation needs a power-law spectrum with p = 2 or p = 4");
}

SeriesValue IntrinsicCovariance::evaluate(double lag) const {
  const double theta = lag_representative(lag);
  if (mode_ == Mode::ClosedForm) {
    // a n^-p = (a/2) * 2 n^-2m, minus the frequencies below kappa.
    const int m = *model_.spline_order();
    double v = 0.5 * model_.power_scale() * spline_kernel_lag(m, theta);
    for (int n = 1; n < model_.kappa(); ++n) v -= model_.power_term(n) * std::cos(n * theta);
    return {offset_ + v, 0.0};
  }
  // Smallest terms first.
  double sum = 0.0;
  for (int n = model_.n_max(); n >= model_.kappa(); --n) {
    const double g = model_.gamma(n);
    if (g != 0.0) sum += g * std::cos(n * theta);
  }
  return {offset_ + sum, model_.tail_bound()};
}

Eigen::MatrixXd IntrinsicCovariance::gram(const std::vector<Angle>& points) const {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = (*this)(0.0);
    for (Eigen::Index j = 0; j < i; ++j) {
      g(i, j) = (*this)(points[static_cast<std::size_t>(i)].radians() - points[static_cast<std::size_t>(j)].radians());
      g(j, i) = g(i, j);
    }
  }
  return g;
}

SeriesValue phi_eval(const IntrinsicCovariance& cov, Angle theta) { return cov.evaluate(theta.radians()); }

Semivariogram::Semivariogram(SpectralModel model, double c0)
    : model_(model), cov_(std::move(model)), c0_(c0) {
  if (model_.kappa() != 1) throw ConfigurationError("a semivariogram needs an order-1 spectral model");
  if (!(c0 >= 0.0) || !std::isfinite(c0)) throw ConfigurationError("semivariogram shift c0 must be nonnegative");
}

double Semivariogram::operator()(double lag) const {
  const double theta = lag_representative(lag);
  if (cov_.mode() == IntrinsicCovariance::Mode::ClosedForm) return cov_(0.0) - cov_(theta);
  // 1 - cos x = 2 sin^2(x/2) keeps small lags accurate.
  double sum = 0.0;
  for (int n = model_.n_max(); n >= 1; --n) {
    const double g = model_.gamma(n);
    if (g == 0.0) continue;
    const double s = std::sin(0.5 * n * theta);
    sum += 2.0 * g * s * s;
  }
  return sum;
}

double semivariogram_eval(const Semivariogram& sv, Angle theta) { return sv(theta.radians()); }

double variogram_shift_bound(const Semivariogram& sv) {
  const double h = kPi / kSimpsonPanels;
  double acc = sv(0.0) + sv(kPi);
  for (int i = 1; i < kSimpsonPanels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * sv(i * h);
  return acc * h / 3.0 / kPi;
}

IntrinsicCovariance phi_from_variogram(const Semivariogram& sv) {
  const double bound = variogram_shift_bound(sv);
  if (sv.c0() < bound * (1.0 - kShiftRelTol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "semivariogram shift c0 = " << sv.c0() << " is below the admissible bound (1/pi) int_0^pi tau = "
        << bound;
    throw InvalidShiftError(msg.str(), bound);
  }
  // c0 - tau(theta) = c0 - phi(0) + phi(theta)
  IntrinsicCovariance base(sv.model());
  return IntrinsicCovariance(sv.model(), base.mode(), sv.c0() - base(0.0));
}

}  // namespace circirf
