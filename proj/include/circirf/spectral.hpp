#pragma once

#include <optional>
#include <vector>

namespace circirf {

inline constexpr int kDefaultSeriesTerms = 10000;

/// The coefficient sequence gamma_n, n >= kappa, of an intrinsic covariance
/// sum_n gamma_n cos(n theta).
///
/// Two shapes are supported so that summability stays checkable: an explicit
/// finite list (gamma_kappa, gamma_{kappa+1}, ...) with a zero tail, or the
/// power law gamma_n = a n^-p with p > 1, evaluated up to `n_max` terms and
/// carrying an analytic bound on the discarded tail. Zero entries in a list
/// mark frequencies without spectral mass.
class SpectralModel {
public:
  enum class Kind { List, Power };

  static SpectralModel list(int kappa, std::vector<double> gammas);
  static SpectralModel power(int kappa, double a, double p, int n_max = kDefaultSeriesTerms);
  /// 2 n^-2m with kappa = 1, the periodic spline kernel of order m.
  static SpectralModel spline(int m, int n_max = kDefaultSeriesTerms);

  /// Skips the sign check on list entries. Only for negative controls that
  /// need a deliberately invalid spectrum.
  static SpectralModel unchecked_list(int kappa, std::vector<double> gammas);

  int kappa() const noexcept { return kappa_; }
  Kind kind() const noexcept { return kind_; }
  /// Highest frequency carried by the model.
  int n_max() const noexcept;
  double gamma(int n) const;
  /// a n^-p ignoring the kappa and n_max cutoffs (power law only).
  double power_term(int n) const;

  const std::vector<double>& values() const noexcept { return values_; }
  double power_scale() const noexcept { return a_; }
  double power_exponent() const noexcept { return p_; }

  /// Analytic bound on sum_{n > cutoff} gamma_n (integral comparison).
  double tail_bound(int cutoff) const;
  /// Bound on the mass discarded by truncating at n_max().
  double tail_bound() const { return tail_bound(n_max()); }

  /// Same spectrum carried to a different truncation (power law only).
  SpectralModel with_n_max(int n_max) const;

  /// m if this is a scaled spline spectrum a n^-2m with m in {1, 2}.
  std::optional<int> spline_order() const noexcept;

  /// sum_n gamma_n over the represented range.
  double total_mass() const;

private:
  SpectralModel() = default;

  Kind kind_ = Kind::List;
  int kappa_ = 1;
  std::vector<double> values_;
  double a_ = 0.0;
  double p_ = 0.0;
  int n_max_ = 0;
};

}  // namespace circirf
