#include "circirf/rkhs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "circirf/errors.hpp"

namespace circirf {

TruncatedFunction::TruncatedFunction(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
    : a0_(a0), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
  const auto n = std::max(cos_.size(), sin_.size());
  cos_.resize(n, 0.0);
  sin_.resize(n, 0.0);
}

TruncatedFunction TruncatedFunction::cosine(int n, double amplitude) {
  if (n == 0) return constant(amplitude);
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  c.back() = amplitude;
  return TruncatedFunction(0.0, std::move(c), {});
}

TruncatedFunction TruncatedFunction::sine(int n, double amplitude) {
  if (n < 1) throw std::invalid_argument("sine frequency must be at least 1");
  std::vector<double> s(static_cast<std::size_t>(n), 0.0);
  s.back() = amplitude;
  return TruncatedFunction(0.0, {}, std::move(s));
}

double TruncatedFunction::cos_coeff(int n) const noexcept {
  if (n == 0) return a0_;
  if (n < 1 || n > degree()) return 0.0;
  return cos_[static_cast<std::size_t>(n - 1)];
}

double TruncatedFunction::sin_coeff(int n) const noexcept {
  if (n < 1 || n > degree()) return 0.0;
  return sin_[static_cast<std::size_t>(n - 1)];
}

double TruncatedFunction::operator()(Angle t) const {
  double v = 0.0;
  for (int n = degree(); n >= 1; --n) {
    const double arg = n * t.radians();
    v += cos_[static_cast<std::size_t>(n - 1)] * std::cos(arg) + sin_[static_cast<std::size_t>(n - 1)] * std::sin(arg);
  }
  return a0_ + v;
}

TruncatedFunction TruncatedFunction::operator+(const TruncatedFunction& other) const {
  const auto n = static_cast<std::size_t>(std::max(degree(), other.degree()));
  std::vector<double> c(n, 0.0);
  std::vector<double> s(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const int freq = static_cast<int>(k) + 1;
    c[k] = cos_coeff(freq) + other.cos_coeff(freq);
    s[k] = sin_coeff(freq) + other.sin_coeff(freq);
  }
  return TruncatedFunction(a0_ + other.a0_, std::move(c), std::move(s));
}

TruncatedFunction TruncatedFunction::operator*(double scale) const {
  auto c = cos_;
  auto s = sin_;
  for (auto& v : c) v *= scale;
  for (auto& v : s) v *= scale;
  return TruncatedFunction(a0_ * scale, std::move(c), std::move(s));
}

double semi_inner_product(const TruncatedFunction& f, const TruncatedFunction& g, const SpectralModel& model) {
  double total = 0.0;
  const int top = std::min(f.degree(), g.degree());
  for (int n = model.kappa(); n <= top; ++n) {
    const double fc = f.cos_coeff(n), fs = f.sin_coeff(n);
    const double gc = g.cos_coeff(n), gs = g.sin_coeff(n);
    const bool f_energy = fc != 0.0 || fs != 0.0;
    const bool g_energy = gc != 0.0 || gs != 0.0;
    if (!f_energy || !g_energy) continue;
    const double gamma = model.gamma(n);
    if (!(gamma > 0.0)) {
      std::ostringstream msg;
      msg << "frequency " << n << " carries energy but has no spectral mass; the semi-norm is infinite";
      throw InfiniteNormError(msg.str());
    }
    total += (fc * gc + fs * gs) / gamma;
  }
  return total;
}

RkhsKernel::RkhsKernel(IntrinsicCovariance covariance, RkhsBasis basis)
    : cov_(std::move(covariance)), basis_(std::move(basis)) {
  if (cov_.kappa() != basis_.kappa()) {
    std::ostringstream msg;
    msg << "covariance order kappa = " << cov_.kappa() << " does not match basis order kappa = " << basis_.kappa();
    throw ConfigurationError(msg.str());
  }
  phi_tau_ = cov_.gram(basis_.tau_points());
}

double RkhsKernel::operator()(Angle x, Angle y) const {
  const auto& tau = basis_.tau_points();
  const Eigen::VectorXd px = basis_.cardinal(x);
  const Eigen::VectorXd py = basis_.cardinal(y);
  double cross = 0.0;
  for (std::size_t nu = 0; nu < tau.size(); ++nu) {
    const auto i = static_cast<Eigen::Index>(nu);
    cross += cov_(x.radians() - tau[nu].radians()) * py(i) + cov_(y.radians() - tau[nu].radians()) * px(i);
  }
  return cov_(x.radians() - y.radians()) - cross + px.dot(phi_tau_ * py) + px.dot(py);
}

Eigen::MatrixXd RkhsKernel::gram(const std::vector<Angle>& points) const {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = (*this)(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
      g(j, i) = g(i, j);
    }
  return g;
}

TruncatedFunction RkhsKernel::section(Angle x) const {
  const auto& model = cov_.model();
  const auto& tau = basis_.tau_points();
  const int l = basis_.dimension();
  const int kappa = basis_.kappa();
  const int top = model.n_max();
  const Eigen::VectorXd px = basis_.cardinal(x);

  std::vector<double> c(static_cast<std::size_t>(std::max(top, kappa - 1)), 0.0);
  std::vector<double> s(c.size(), 0.0);

  // Weight carried by each p_nu(y) in the expansion.
  Eigen::VectorXd w = px;
  for (int n = kappa; n <= top; ++n) {
    const double gamma = model.gamma(n);
    if (gamma == 0.0) continue;
    double cx = std::cos(n * x.radians());
    double sx = std::sin(n * x.radians());
    for (int nu = 0; nu < l; ++nu) {
      cx -= std::cos(n * tau[static_cast<std::size_t>(nu)].radians()) * px(nu);
      sx -= std::sin(n * tau[static_cast<std::size_t>(nu)].radians()) * px(nu);
    }
    c[static_cast<std::size_t>(n - 1)] = gamma * cx;
    s[static_cast<std::size_t>(n - 1)] = gamma * sx;
    for (int nu = 0; nu < l; ++nu) {
      w(nu) -= gamma * (cx * std::cos(n * tau[static_cast<std::size_t>(nu)].radians()) +
                        sx * std::sin(n * tau[static_cast<std::size_t>(nu)].radians()));
    }
  }

  // sum_nu w_nu p_nu in the elementary nil-space basis.
  const Eigen::VectorXd low = basis_.cardinal_coeffs() * w;
  for (int k = 1; k < kappa; ++k) {
    c[static_cast<std::size_t>(k - 1)] += low(2 * k - 1);
    s[static_cast<std::size_t>(k - 1)] += low(2 * k);
  }
  return TruncatedFunction(low(0), std::move(c), std::move(s));
}

double kernel_eval(const RkhsKernel& k, Angle x, Angle y) { return k(x, y); }

double full_inner_product(const TruncatedFunction& f, const TruncatedFunction& g, const RkhsKernel& k) {
  double point_term = 0.0;
  for (const auto& t : k.basis().tau_points()) point_term += f(t) * g(t);
  return point_term + semi_inner_product(f, g, k.covariance().model());
}

}  // namespace circirf
