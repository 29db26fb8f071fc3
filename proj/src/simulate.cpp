#include "circirf/simulate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "circirf/errors.hpp"

namespace circirf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_counts(int n_real, int grid_size) {
  if (n_real < 0) throw ConfigurationError("realization count must be nonnegative");
  if (grid_size < 2) throw ConfigurationError("grid size must be at least 2");
}

// cos/sin of 2 pi k / G for k = 0..G-1.
struct GridTrig {
  explicit GridTrig(int g) : cos(static_cast<std::size_t>(g)), sin(static_cast<std::size_t>(g)) {
    for (int k = 0; k < g; ++k) {
      cos[static_cast<std::size_t>(k)] = std::cos(kTwoPi * k / g);
      sin[static_cast<std::size_t>(k)] = std::sin(kTwoPi * k / g);
    }
  }
  std::vector<double> cos;
  std::vector<double> sin;
};

int grid_index(Angle a, int grid_size) {
  const double pos = a.radians() * grid_size / kTwoPi;
  const double rounded = std::round(pos);
  if (std::abs(pos - rounded) > 1e-6) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "angle " << a.radians() << " does not sit on the " << grid_size << "-point realization grid";
    throw PreconditionError(msg.str());
  }
  return static_cast<int>(rounded) % grid_size;
}

}  // namespace

std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

CoefficientSample draw_spectral_coefficients(const SpectralModel& model, const LowOrderPart& low_order,
                                             std::uint64_t realization_seed) {
  const int kappa = model.kappa();
  const int top = std::max(model.n_max(), kappa - 1);
  CoefficientSample z;
  z.cos_coeffs.assign(static_cast<std::size_t>(top), 0.0);
  z.sin_coeffs.assign(static_cast<std::size_t>(top), 0.0);
  std::mt19937_64 rng(realization_seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  if (low_order.mode != LowOrderPart::Mode::None) {
    auto draw = [&](int idx) {
      return low_order.mode == LowOrderPart::Mode::Fixed ? low_order.coefficients.at(static_cast<std::size_t>(idx))
                                                         : low_order.standard_deviation * normal(rng);
    };
    z.z0 = draw(0);
    for (int k = 1; k < kappa; ++k) {
      z.cos_coeffs[static_cast<std::size_t>(k - 1)] = draw(2 * k - 1);
      z.sin_coeffs[static_cast<std::size_t>(k - 1)] = draw(2 * k);
    }
  }
  for (int n = kappa; n <= model.n_max(); ++n) {
    const double sd = std::sqrt(model.gamma(n));
    z.cos_coeffs[static_cast<std::size_t>(n - 1)] = sd * normal(rng);
    z.sin_coeffs[static_cast<std::size_t>(n - 1)] = sd * normal(rng);
  }
  return z;
}

std::vector<Realization> simulate_irf(const SpectralModel& model, const LowOrderPart& low_order, int n_real,
                                      int grid_size, std::uint64_t seed) {
  check_counts(n_real, grid_size);
  const int top = model.n_max();
  if (2 * top + 1 > grid_size) {
    std::ostringstream msg;
    msg << "spectral truncation n_max = " << top << " needs a grid of at least " << 2 * top + 1
        << " points, got " << grid_size;
    throw AliasingError(msg.str());
  }
  const int kappa = model.kappa();
  const int l = 2 * kappa - 1;
  if (low_order.mode == LowOrderPart::Mode::Fixed && static_cast<int>(low_order.coefficients.size()) != l)
    throw ConfigurationError("fixed low-order part needs one coefficient per nil-space basis function");
  for (int n = kappa; n <= top; ++n)
    if (!(model.gamma(n) >= 0.0)) throw ConfigurationError("cannot simulate a spectrum with negative coefficients");

  std::ostringstream prov;
  prov << "spectral(kappa=" << kappa << ",n_max=" << top << ")";
  const GridTrig trig(grid_size);
  const auto g = static_cast<std::size_t>(grid_size);

  std::vector<Realization> out;
  out.reserve(static_cast<std::size_t>(n_real));
  for (int r = 0; r < n_real; ++r) {
    Realization real;
    real.seed = realization_seed(seed, static_cast<std::uint64_t>(r));
    real.provenance = prov.str();
    real.spectral_truncation = top;
    real.values.assign(g, 0.0);
    const CoefficientSample z = draw_spectral_coefficients(model, low_order, real.seed);
    for (std::size_t j = 0; j < g; ++j) {
      double v = z.z0;
      for (int n = 1; n <= top; ++n) {
        const std::size_t k = (static_cast<std::size_t>(n) * j) % g;
        v += z.cos_coeff(n) * trig.cos[k] + z.sin_coeff(n) * trig.sin[k];
      }
      real.values[j] = v;
    }
    out.push_back(std::move(real));
  }
  return out;
}

std::vector<Realization> simulate_brownian_bridge(int grid_size, int n_real, std::uint64_t seed) {
  check_counts(n_real, grid_size);
  // t = 0 has zero variance and is pinned; factorize over j = 1..G-1.
  const int m = grid_size - 1;
  Eigen::MatrixXd cov(m, m);
  for (int i = 0; i < m; ++i) {
    const double s = kTwoPi * (i + 1) / grid_size;
    for (int j = 0; j <= i; ++j) {
      const double t = kTwoPi * (j + 1) / grid_size;
      cov(i, j) = kTwoPi * std::min(s, t) - s * t;
      cov(j, i) = cov(i, j);
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    std::clog << "warning: Brownian bridge covariance failed a clean Cholesky factorization; retrying with 1e-12 "
                 "diagonal jitter\n";
    cov.diagonal().array() += 1e-12 * cov.diagonal().maxCoeff();
    llt.compute(cov);
    if (llt.info() != Eigen::Success)
      throw NumericalError("Brownian bridge covariance is not positive semidefinite on this grid");
  }
  const Eigen::MatrixXd lower = llt.matrixL();

  std::vector<Realization> out(static_cast<std::size_t>(n_real));
  // Batched so the triangular product runs as a matrix-matrix kernel.
  constexpr int kBatch = 512;
  for (int start = 0; start < n_real; start += kBatch) {
    const int count = std::min(kBatch, n_real - start);
    Eigen::MatrixXd z(m, count);
    for (int c = 0; c < count; ++c) {
      auto& real = out[static_cast<std::size_t>(start + c)];
      real.seed = realization_seed(seed, static_cast<std::uint64_t>(start + c));
      real.provenance = "brownian-bridge";
      std::mt19937_64 rng(real.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < m; ++i) z(i, c) = normal(rng);
    }
    const Eigen::MatrixXd paths = lower.triangularView<Eigen::Lower>() * z;
    for (int c = 0; c < count; ++c) {
      auto& real = out[static_cast<std::size_t>(start + c)];
      real.values.assign(static_cast<std::size_t>(grid_size), 0.0);
      for (int i = 0; i < m; ++i) real.values[static_cast<std::size_t>(i + 1)] = paths(i, c);
    }
  }
  return out;
}

CoefficientSample empirical_coefficients(const Realization& r, int n_max) {
  const int g = r.grid_size();
  if (n_max < 0 || 2 * n_max + 1 > g) {
    std::ostringstream msg;
    msg << "cannot recover frequency " << n_max << " from a " << g << "-point grid";
    throw AliasingError(msg.str());
  }
  thread_local std::unique_ptr<GridTrig> trig;
  if (!trig || static_cast<int>(trig->cos.size()) != g) trig = std::make_unique<GridTrig>(g);

  CoefficientSample out;
  out.cos_coeffs.assign(static_cast<std::size_t>(n_max), 0.0);
  out.sin_coeffs.assign(static_cast<std::size_t>(n_max), 0.0);
  double sum = 0.0;
  for (double v : r.values) sum += v;
  out.z0 = sum / g;
  const auto ug = static_cast<std::size_t>(g);
  for (int n = 1; n <= n_max; ++n) {
    double c = 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < ug; ++j) {
      const std::size_t k = (static_cast<std::size_t>(n) * j) % ug;
      c += r.values[j] * trig->cos[k];
      s += r.values[j] * trig->sin[k];
    }
    out.cos_coeffs[static_cast<std::size_t>(n - 1)] = 2.0 * c / g;
    out.sin_coeffs[static_cast<std::size_t>(n - 1)] = 2.0 * s / g;
  }
  return out;
}

Realization truncate_low_frequencies(const Realization& r, int kappa) {
  if (kappa < 1) return r;
  const CoefficientSample coeffs = empirical_coefficients(r, kappa - 1);
  Realization out = r;
  const int g = r.grid_size();
  for (int j = 0; j < g; ++j) {
    const double t = kTwoPi * j / g;
    double low = coeffs.z0;
    for (int n = 1; n < kappa; ++n) low += coeffs.cos_coeff(n) * std::cos(n * t) + coeffs.sin_coeff(n) * std::sin(n * t);
    out.values[static_cast<std::size_t>(j)] -= low;
  }
  std::ostringstream prov;
  prov << r.provenance << "|truncated(kappa=" << kappa << ")";
  out.provenance = prov.str();
  return out;
}

double MomentEstimate::z_score(double expected) const {
  const double diff = std::abs(mean - expected);
  if (standard_error > 0.0) return diff / standard_error;
  return diff <= 1e-12 * std::max(1.0, std::abs(expected)) ? 0.0 : std::numeric_limits<double>::infinity();
}

MomentEstimate estimate_mean(const std::vector<double>& samples) {
  MomentEstimate e;
  e.samples = samples.size();
  if (samples.empty()) return e;
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  e.mean = mean;
  if (samples.size() > 1) e.standard_error = std::sqrt(ss / static_cast<double>(samples.size() - 1) / static_cast<double>(samples.size()));
  return e;
}

bool StationarityReport::passed() const {
  if (status != Status::Completed) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

StationarityReport check_translation_stationarity(const std::vector<Realization>& realizations,
                                                  const DiscreteMeasure& lambda, const std::vector<Angle>& lags,
                                                  double tol_factor, int kappa) {
  if (kappa > 0 && !is_allowable(lambda, kappa)) {
    std::ostringstream msg;
    msg << "measure is not allowable at order kappa = " << kappa;
    throw PreconditionError(msg.str());
  }
  StationarityReport report;
  if (realizations.size() < kMinStationaritySamples) {
    report.status = StationarityReport::Status::InsufficientSamples;
    report.checks.push_back({"sample_size", static_cast<double>(realizations.size()),
                             static_cast<double>(kMinStationaritySamples), false});
    return report;
  }
  if (lags.empty()) throw PreconditionError("stationarity check needs at least one lag");

  const int g = realizations.front().grid_size();
  for (const auto& r : realizations)
    if (r.grid_size() != g) throw PreconditionError("realizations must share one grid");
  std::vector<std::pair<int, double>> atoms;
  for (const auto& a : lambda.atoms()) atoms.emplace_back(grid_index(a.location, g), a.weight);
  std::vector<int> lag_idx;
  for (const auto& t : lags) lag_idx.push_back(grid_index(t, g));

  const std::size_t nr = realizations.size();
  const std::size_t nl = lag_idx.size();
  // agg[k][r] = Z(i_{t_k} lambda) in realization r
  std::vector<std::vector<double>> agg(nl, std::vector<double>(nr, 0.0));
  for (std::size_t k = 0; k < nl; ++k)
    for (std::size_t r = 0; r < nr; ++r) {
      double v = 0.0;
      for (const auto& [idx, w] : atoms) v += w * realizations[r].values[static_cast<std::size_t>((idx + lag_idx[k]) % g)];
      agg[k][r] = v;
    }

  std::vector<double> means(nl);
  for (std::size_t k = 0; k < nl; ++k) {
    const MomentEstimate e = estimate_mean(agg[k]);
    means[k] = e.mean;
    report.max_mean_z = std::max(report.max_mean_z, e.z_score(0.0));
  }

  // Unordered lag pairs grouped by circular separation; each pair is compared
  // with the first pair of its group through the per-realization difference
  // of centered products.
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> groups;
  for (std::size_t a = 0; a < nl; ++a)
    for (std::size_t b = a; b < nl; ++b) {
      const int d = ((lag_idx[b] - lag_idx[a]) % g + g) % g;
      groups[std::min(d, g - d)].emplace_back(a, b);
    }
  std::vector<double> diff(nr);
  for (const auto& [sep, pairs] : groups) {
    const auto [ra, rb] = pairs.front();
    for (std::size_t p = 1; p < pairs.size(); ++p) {
      const auto [pa, pb] = pairs[p];
      for (std::size_t r = 0; r < nr; ++r)
        diff[r] = (agg[pa][r] - means[pa]) * (agg[pb][r] - means[pb]) - (agg[ra][r] - means[ra]) * (agg[rb][r] - means[rb]);
      report.max_covariance_z = std::max(report.max_covariance_z, estimate_mean(diff).z_score(0.0));
      ++report.comparisons;
    }
  }

  report.checks.push_back({"zero_mean", report.max_mean_z, tol_factor, report.max_mean_z <= tol_factor});
  report.checks.push_back(
      {"lag_only_covariance", report.max_covariance_z, tol_factor, report.max_covariance_z <= tol_factor});
  return report;
}

CouplingTables check_coefficient_coupling(const std::vector<Realization>& realizations, int n_max) {
  CouplingTables t;
  t.n_max = n_max;
  std::vector<CoefficientSample> coeffs;
  coeffs.reserve(realizations.size());
  for (const auto& r : realizations) coeffs.push_back(empirical_coefficients(r, n_max));

  const std::size_t nr = coeffs.size();
  std::vector<double> buf(nr);
  auto moment = [&](auto&& f) {
    for (std::size_t r = 0; r < nr; ++r) buf[r] = f(coeffs[r]);
    return estimate_mean(buf);
  };

  t.z0_z0 = moment([](const CoefficientSample& c) { return c.z0 * c.z0; });
  const auto un = static_cast<std::size_t>(n_max);
  t.cos_cos.assign(un, std::vector<MomentEstimate>(un));
  t.sin_sin.assign(un, std::vector<MomentEstimate>(un));
  t.cos_sin.assign(un, std::vector<MomentEstimate>(un));
  for (int n = 1; n <= n_max; ++n) {
    t.z0_cos.push_back(moment([n](const CoefficientSample& c) { return c.z0 * c.cos_coeff(n); }));
    for (int m = 1; m <= n_max; ++m) {
      const auto i = static_cast<std::size_t>(n - 1);
      const auto j = static_cast<std::size_t>(m - 1);
      t.cos_cos[i][j] = moment([n, m](const CoefficientSample& c) { return c.cos_coeff(n) * c.cos_coeff(m); });
      t.sin_sin[i][j] = moment([n, m](const CoefficientSample& c) { return c.sin_coeff(n) * c.sin_coeff(m); });
      t.cos_sin[i][j] = moment([n, m](const CoefficientSample& c) { return c.cos_coeff(n) * c.sin_coeff(m); });
    }
  }
  return t;
}

MomentEstimate empirical_covariance(const std::vector<Realization>& realizations, int s_index, int t_index) {
  const std::size_t nr = realizations.size();
  std::vector<double> xs(nr), ts(nr);
  for (std::size_t r = 0; r < nr; ++r) {
    xs[r] = realizations[r].values.at(static_cast<std::size_t>(s_index));
    ts[r] = realizations[r].values.at(static_cast<std::size_t>(t_index));
  }
  const double ms = estimate_mean(xs).mean;
  const double mt = estimate_mean(ts).mean;
  std::vector<double> prod(nr);
  for (std::size_t r = 0; r < nr; ++r) prod[r] = (xs[r] - ms) * (ts[r] - mt);
  return estimate_mean(prod);
}

}  // namespace circirf
