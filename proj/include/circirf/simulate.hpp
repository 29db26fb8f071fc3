#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circirf/angle.hpp"
#include "circirf/measure.hpp"
#include "circirf/spectral.hpp"

namespace circirf {

/// One sample path on the regular grid t_j = 2 pi j / G, j = 0..G-1.
struct Realization {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string provenance;
  /// Highest simulated frequency; 0 when the path is not band-limited.
  int spectral_truncation = 0;

  int grid_size() const noexcept { return static_cast<int>(values.size()); }
  Angle location(int j) const { return Angle(kTwoPi * j / grid_size()); }
};

/// Trapezoidal Fourier coefficients z0, z_{n,c}, z_{n,s} for n = 1..n_max.
struct CoefficientSample {
  double z0 = 0.0;
  std::vector<double> cos_coeffs;  // index n - 1
  std::vector<double> sin_coeffs;

  double cos_coeff(int n) const { return cos_coeffs.at(static_cast<std::size_t>(n - 1)); }
  double sin_coeff(int n) const { return sin_coeffs.at(static_cast<std::size_t>(n - 1)); }
};

/// Low-order trend added to each path, in the elementary nil-space basis
/// {1, cos t, sin t, ...}. Any such trend leaves the truncated process, and
/// so every allowable aggregate, unchanged.
struct LowOrderPart {
  enum class Mode { None, Fixed, Random };
  Mode mode = Mode::None;
  std::vector<double> coefficients;  // Fixed: one per nil-space basis function
  double standard_deviation = 1.0;   // Random: iid N(0, sd^2) per basis function

  static LowOrderPart none() { return {}; }
  static LowOrderPart fixed(std::vector<double> c) { return {Mode::Fixed, std::move(c), 0.0}; }
  static LowOrderPart random(double sd) { return {Mode::Random, {}, sd}; }
};

/// Seed of realization `index` under master seed `seed`.
std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index);

/// The Fourier coefficients simulate_irf uses for one realization seed:
/// independent N(0, gamma_n) pairs for kappa <= n <= n_max, low-order part
/// below kappa.
CoefficientSample draw_spectral_coefficients(const SpectralModel& model, const LowOrderPart& low_order,
                                             std::uint64_t realization_seed);

/// sum_{n=kappa}^{N} (Z_{n,c} cos nt + Z_{n,s} sin nt) with independent
/// N(0, gamma_n) coefficients, plus the low-order part. N is the model's
/// n_max; it must satisfy 2N + 1 <= G or AliasingError is thrown.
std::vector<Realization> simulate_irf(const SpectralModel& model, const LowOrderPart& low_order, int n_real,
                                      int grid_size, std::uint64_t seed);

/// Exact Gaussian draws of the circular Brownian bridge,
/// cov(B(s), B(t)) = 2 pi min(s, t) - s t, on the grid. B(0) = 0 always.
std::vector<Realization> simulate_brownian_bridge(int grid_size, int n_real, std::uint64_t seed);

/// Requires n_max <= (G - 1) / 2.
CoefficientSample empirical_coefficients(const Realization& r, int n_max);

/// The path with its frequencies below kappa removed (trapezoidal estimates).
Realization truncate_low_frequencies(const Realization& r, int kappa);

struct MomentEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;

  /// |mean - expected| / standard_error, with 0/0 read as 0.
  double z_score(double expected) const;
};

/// Mean of per-sample values with its Monte Carlo standard error.
MomentEstimate estimate_mean(const std::vector<double>& samples);

struct CheckResult {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct StationarityReport {
  enum class Status { Completed, InsufficientSamples };
  Status status = Status::Completed;
  std::vector<CheckResult> checks;
  /// Largest |z| among mean checks and among equal-lag covariance comparisons.
  double max_mean_z = 0.0;
  double max_covariance_z = 0.0;
  std::size_t comparisons = 0;

  bool passed() const;
};

inline constexpr std::size_t kMinStationaritySamples = 1000;

/// Monte Carlo test that Z(i_t lambda) has zero mean and a covariance that
/// depends on t - s only, for t, s in `lags`. Every comparison uses
/// `tol_factor` standard errors. Lambda atoms and lags must sit on the
/// realization grid. Throws PreconditionError when lambda is not allowable at
/// order `kappa`; kappa = 0 disables that check.
StationarityReport check_translation_stationarity(const std::vector<Realization>& realizations,
                                                  const DiscreteMeasure& lambda, const std::vector<Angle>& lags,
                                                  double tol_factor, int kappa);

/// Empirical raw cross-moments of the Fourier coefficients, n, m = 1..n_max.
struct CouplingTables {
  int n_max = 0;
  MomentEstimate z0_z0;
  std::vector<MomentEstimate> z0_cos;                // [n-1]
  std::vector<std::vector<MomentEstimate>> cos_cos;  // [n-1][m-1]
  std::vector<std::vector<MomentEstimate>> sin_sin;
  std::vector<std::vector<MomentEstimate>> cos_sin;  // E(z_{n,c} z_{m,s})
};

CouplingTables check_coefficient_coupling(const std::vector<Realization>& realizations, int n_max);

/// Empirical cov(Z(s), Z(t)) over realizations (centered by sample means).
MomentEstimate empirical_covariance(const std::vector<Realization>& realizations, int s_index, int t_index);

}  // namespace circirf
