#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "circirf/covariance.hpp"
#include "circirf/kriging.hpp"
#include "circirf/linalg.hpp"
#include "circirf/measure.hpp"
#include "circirf/nil_space.hpp"
#include "circirf/rkhs.hpp"
#include "circirf/simulate.hpp"

namespace circirf::cli {

namespace {

class Report {
public:
  void add(const std::string& name, double statistic, double threshold, bool pass, const char* status = nullptr) {
    nlohmann::json rec = {{"check_name", name}, {"statistic", statistic}, {"threshold", threshold}, {"pass", pass}};
    if (status != nullptr) rec["status"] = status;
    checks_.push_back(std::move(rec));
    passed_ = passed_ && pass;
  }
  void at_most(const std::string& name, double statistic, double threshold) {
    add(name, statistic, threshold, statistic <= threshold);
  }
  bool passed() const { return passed_ && !checks_.empty(); }
  nlohmann::json checks() const { return checks_; }

private:
  nlohmann::json checks_ = nlohmann::json::array();
  bool passed_ = true;
};

std::vector<Angle> uniform_angles(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<Angle> out;
  for (int i = 0; i < n; ++i) out.emplace_back(u(rng));
  return out;
}

std::vector<Angle> separated_angles(std::mt19937_64& rng, int n, double min_gap) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<Angle> out;
  while (static_cast<int>(out.size()) < n) {
    const Angle a(u(rng));
    if (std::all_of(out.begin(), out.end(), [&](Angle b) { return angular_distance(a, b) >= min_gap; }))
      out.push_back(a);
  }
  return out;
}

Dataset random_dataset(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (auto& v : y) v = z(rng);
  return Dataset(separated_angles(rng, n, 0.05), std::move(y));
}

// Random atoms with weights projected onto the orthogonal complement of the
// nil space of order kappa.
DiscreteMeasure random_allowable(std::mt19937_64& rng, int kappa, int atoms) {
  const auto pts = uniform_angles(rng, atoms);
  const Eigen::MatrixXd q = NilSpaceBasis(kappa).design(pts);
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::VectorXd w(atoms);
  for (int i = 0; i < atoms; ++i) w(i) = z(rng);
  w -= q * q.colPivHouseholderQr().solve(w);
  std::vector<Atom> out;
  for (int i = 0; i < atoms; ++i) out.push_back({pts[static_cast<std::size_t>(i)], w(i)});
  return DiscreteMeasure(std::move(out));
}

void allowability_suite(const RunConfig& cfg, std::mt19937_64& rng, Report& report) {
  const int kappa = cfg.model.kappa;
  const NilSpaceBasis nil(kappa + 1);
  std::uniform_real_distribution<double> shift(0.0, kTwoPi);
  int nesting = 0, translation = 0, annihilation = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto lambda = random_allowable(rng, kappa + 1, 2 * kappa + 4 + trial % 5);
    if (!is_allowable(lambda, kappa + 1) || !is_allowable(lambda, kappa)) ++nesting;
    if (!is_allowable(translate_measure(lambda, Angle(shift(rng))), kappa + 1)) ++translation;
    for (int j = 0; j < nil.dimension(); ++j)
      if (std::abs(apply_measure([&](Angle t) { return nil.evaluate(t)(j); }, lambda)) > kDefaultAllowableTol) {
        ++annihilation;
        break;
      }
  }
  report.at_most("allowability.nesting", nesting, 0);
  report.at_most("allowability.translation", translation, 0);
  report.at_most("allowability.annihilation", annihilation, 0);
}

SpectralModel corrupted(const SpectralModel& model) {
  std::vector<double> g;
  if (model.kind() == SpectralModel::Kind::List) {
    g = model.values();
  } else {
    for (int n = model.kappa(); n < model.kappa() + 16; ++n) g.push_back(model.gamma(n));
  }
  if (g.size() < 2) g.resize(2, 0.0);
  const double big = *std::max_element(g.begin(), g.end());
  g[1] = -std::max(big, 1.0);
  return SpectralModel::unchecked_list(model.kappa(), std::move(g));
}

void psd_suite(const RunConfig& cfg, std::mt19937_64& rng, Report& report) {
  SpectralModel model = spectrum_from_json(*cfg.model.spectrum);
  if (cfg.verify.inject_negative_gamma) model = corrupted(model);
  const RkhsKernel h(IntrinsicCovariance(model), build_rkhs_basis(cfg.model.kappa));
  double worst = 1.0;
  for (int trial = 0; trial < 10; ++trial) worst = std::min(worst, min_eigenvalue_ratio(h.gram(uniform_angles(rng, 40))));
  report.add("psd.min_eigenvalue_ratio", worst, -1e-10, worst >= -1e-10);
}

void primal_dual_suite(const RunConfig& cfg, std::mt19937_64& rng, Report& report) {
  const IntrinsicCovariance phi(spectrum_from_json(*cfg.model.spectrum));
  const int l = 2 * cfg.model.kappa - 1;
  std::uniform_int_distribution<int> size(std::max(l, 3), 30);
  const double nuggets[] = {0.0, 0.1, 1.0, cfg.model.nugget};
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset data = random_dataset(rng, size(rng));
    const auto model = fit_universal(data, phi, nuggets[trial % 4]);
    for (const auto& t0 : uniform_angles(rng, 20)) {
      const double dual = model.predict_value(t0), primal = model.predict_primal(t0);
      worst = std::max(worst, std::abs(dual - primal) / std::max({std::abs(dual), std::abs(primal), data.scale()}));
    }
  }
  report.at_most("primal_dual.relative_difference", worst, 1e-9);
}

void ordinary_universal_suite(const RunConfig& cfg, std::mt19937_64& rng, Report& report) {
  // The semivariogram form exists for kappa = 1 only; other orders fall back to spline-m1.
  const SpectralModel spectrum = cfg.model.kappa == 1 ? spectrum_from_json(*cfg.model.spectrum) : SpectralModel::spline(1);
  const double bound = variogram_shift_bound(Semivariogram(spectrum));
  std::uniform_int_distribution<int> size(3, 30);
  double path = 0.0, shift = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = random_dataset(rng, size(rng));
    const double c0 = bound + 0.5;
    const auto ord = fit_ordinary(data, Semivariogram(spectrum));
    const auto uni = fit_universal(data, phi_from_variogram(Semivariogram(spectrum, c0)), 0.0);
    const auto moved = fit_universal(data, phi_from_variogram(Semivariogram(spectrum, c0 + 9.0)), 0.0);
    for (const auto& t0 : uniform_angles(rng, 20)) {
      path = std::max(path, std::abs(ord.predict_value(t0) - uni.predict_value(t0)) / data.scale());
      shift = std::max(shift, std::abs(moved.predict_value(t0) - uni.predict_value(t0)) / data.scale());
    }
  }
  report.at_most("ordinary_universal.path_difference", path, 1e-9);
  report.at_most("ordinary_universal.shift_invariance", shift, 1e-9);
}

void bridge_moments_suite(const RunConfig& cfg, const std::vector<Realization>& paths, Report& report) {
  const int top = std::min(8, (cfg.io.grid_size - 1) / 2);
  const auto t = check_coefficient_coupling(paths, top);
  double worst = 0.0;
  for (int n = 1; n <= top; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    worst = std::max(worst, t.z0_cos[i].z_score(-2.0 / (n * n)));
    for (int m = 1; m <= top; ++m) {
      const auto j = static_cast<std::size_t>(m - 1);
      const double diag = n == m ? 2.0 / (n * n) : 0.0;
      worst = std::max({worst, t.cos_cos[i][j].z_score(diag), t.sin_sin[i][j].z_score(diag), t.cos_sin[i][j].z_score(0.0)});
    }
  }
  report.at_most("bridge_moments.coefficient_z", worst, cfg.verify.tol_factor);
  report.at_most("bridge_moments.b0_variance_z", t.z0_z0.z_score(kPi * kPi / 3.0), cfg.verify.tol_factor);
}

void add_stationarity(Report& report, const std::string& prefix, const StationarityReport& r) {
  const bool short_run = r.status == StationarityReport::Status::InsufficientSamples;
  for (const auto& c : r.checks)
    report.add(prefix + c.name, c.statistic, c.threshold, c.pass, short_run ? "insufficient samples" : nullptr);
}

void stationarity_suite(const RunConfig& cfg, const std::vector<Realization>& paths, Report& report) {
  const int g = cfg.io.grid_size;
  const DiscreteMeasure dipole({{Angle(0.0), 1.0}, {paths.front().location(g / 2), -1.0}});
  const DiscreteMeasure point({{Angle(0.0), 1.0}});
  std::vector<Angle> lags;
  for (int k = 0; k < 8; ++k) lags.push_back(paths.front().location((k * 37 * g / 512) % g));
  std::sort(lags.begin(), lags.end(), [](Angle a, Angle b) { return a.radians() < b.radians(); });
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());

  const double tol = cfg.verify.tol_factor;
  add_stationarity(report, "stationarity.dipole.", check_translation_stationarity(paths, dipole, lags, tol, 1));

  std::vector<Realization> truncated;
  truncated.reserve(paths.size());
  for (const auto& p : paths) truncated.push_back(truncate_low_frequencies(p, 1));
  add_stationarity(report, "stationarity.truncated.", check_translation_stationarity(truncated, point, lags, tol, 0));

  // A point mass is not allowable at order 1, so on the raw paths it must be
  // caught as non-stationary.
  const auto control = check_translation_stationarity(paths, point, lags, tol, 0);
  if (control.status == StationarityReport::Status::InsufficientSamples)
    report.add("stationarity.negative_control", 0.0, tol, false, "insufficient samples");
  else
    report.add("stationarity.negative_control", control.max_covariance_z, tol, control.max_covariance_z > tol);
}

}  // namespace

VerifyOutcome run_verify(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  Report report;
  std::vector<Realization> bridge;
  for (const auto& suite : cfg.verify.suites) {
    if (suite == "allowability") {
      allowability_suite(cfg, rng, report);
    } else if (suite == "psd") {
      psd_suite(cfg, rng, report);
    } else if (suite == "primal_dual") {
      primal_dual_suite(cfg, rng, report);
    } else if (suite == "ordinary_universal") {
      ordinary_universal_suite(cfg, rng, report);
    } else if (suite == "bridge_moments" || suite == "stationarity") {
      if (bridge.empty()) bridge = simulate_brownian_bridge(cfg.io.grid_size, cfg.verify.realizations, cfg.seed);
      if (suite == "bridge_moments")
        bridge_moments_suite(cfg, bridge, report);
      else
        stationarity_suite(cfg, bridge, report);
    } else {
      throw ConfigurationError("unknown verify suite '" + suite + "'");
    }
  }
  return {{{"passed", report.passed()}, {"seed", cfg.seed}, {"checks", report.checks()}}, report.passed()};
}

}  // namespace circirf::cli
