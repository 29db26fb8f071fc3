#include "circirf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "circirf/errors.hpp"

namespace circirf {

namespace {

void check_kappa(int kappa) {
  if (kappa < 1) throw ConfigurationError("spectral model order kappa must be at least 1");
}

}  // namespace

SpectralModel SpectralModel::list(int kappa, std::vector<double> gammas) {
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] >= 0.0) || !std::isfinite(gammas[i])) {
      std::ostringstream msg;
      msg << "spectral coefficient gamma_" << (kappa + static_cast<int>(i)) << " = " << gammas[i]
          << " must be finite and nonnegative";
      throw ConfigurationError(msg.str());
    }
  }
  return unchecked_list(kappa, std::move(gammas));
}

SpectralModel SpectralModel::unchecked_list(int kappa, std::vector<double> gammas) {
  check_kappa(kappa);
  SpectralModel m;
  m.kind_ = Kind::List;
  m.kappa_ = kappa;
  m.values_ = std::move(gammas);
  return m;
}

SpectralModel SpectralModel::power(int kappa, double a, double p, int n_max) {
  check_kappa(kappa);
  if (!(a > 0.0) || !std::isfinite(a)) throw ConfigurationError("power-law scale a must be positive");
  if (!(p > 1.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "power-law exponent p = " << p << " gives a non-summable spectrum; need p > 1";
    throw ConfigurationError(msg.str());
  }
  if (n_max < kappa) throw ConfigurationError("power-law truncation n_max must be at least kappa");
  SpectralModel m;
  m.kind_ = Kind::Power;
  m.kappa_ = kappa;
  m.a_ = a;
  m.p_ = p;
  m.n_max_ = n_max;
  return m;
}

SpectralModel SpectralModel::spline(int m, int n_max) {
  if (m != 1 && m != 2) {
    std::ostringstream msg;
    msg << "spline order m = " << m << " is not supported; use 1 or 2";
    throw UnsupportedOrderError(msg.str());
  }
  return power(1, 2.0, 2.0 * m, n_max);
}

int SpectralModel::n_max() const noexcept {
  if (kind_ == Kind::Power) return n_max_;
  return kappa_ + static_cast<int>(values_.size()) - 1;
}

double SpectralModel::gamma(int n) const {
  if (n < kappa_ || n > n_max()) return 0.0;
  if (kind_ == Kind::Power) return a_ * std::pow(static_cast<double>(n), -p_);
  return values_[static_cast<std::size_t>(n - kappa_)];
}

double SpectralModel::power_term(int n) const {
  if (kind_ != Kind::Power) throw ConfigurationError("power_term needs a power-law spectrum");
  return a_ * std::pow(static_cast<double>(n), -p_);
}

double SpectralModel::tail_bound(int cutoff) const {
  if (kind_ == Kind::List) {
    double rest = 0.0;
    for (int n = std::max(cutoff + 1, kappa_); n <= n_max(); ++n) rest += std::abs(gamma(n));
    return rest;
  }
  if (cutoff < kappa_) cutoff = kappa_ - 1;
  if (cutoff < 1) {
    // Only reachable with kappa = 1 and cutoff 0: gamma_1 plus the integral tail.
    return a_ + a_ / (p_ - 1.0);
  }
  return a_ * std::pow(static_cast<double>(cutoff), 1.0 - p_) / (p_ - 1.0);
}

SpectralModel SpectralModel::with_n_max(int n_max) const {
  if (kind_ != Kind::Power) throw ConfigurationError("only power-law spectra can be re-truncated");
  return power(kappa_, a_, p_, n_max);
}

std::optional<int> SpectralModel::spline_order() const noexcept {
  if (kind_ != Kind::Power) return std::nullopt;
  if (p_ == 2.0) return 1;
  if (p_ == 4.0) return 2;
  return std::nullopt;
}

double SpectralModel::total_mass() const {
  double s = 0.0;
  for (int n = n_max(); n >= kappa_; --n) s += gamma(n);
  return s;
}

}  // namespace circirf
