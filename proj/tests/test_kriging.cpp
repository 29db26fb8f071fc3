#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "circirf/errors.hpp"
#include "circirf/kriging.hpp"
#include "test_support.hpp"

using namespace circirf;

namespace {

std::vector<Angle> equispaced(int n, double start = 0.0) {
  std::vector<Angle> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(start + kTwoPi * i / n);
  return pts;
}

// Dense, general-purpose solve of the bordered system; independent of the
// library's symmetric-indefinite path.
Eigen::VectorXd dense_bordered_solve(const std::vector<Angle>& pts, const IntrinsicCovariance& phi, double nugget,
                                     int kappa, const Eigen::VectorXd& top, const Eigen::VectorXd& bottom) {
  const int n = static_cast<int>(pts.size());
  const int l = 2 * kappa - 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + l, n + l);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      a(i, j) = phi(pts[static_cast<std::size_t>(i)].radians() - pts[static_cast<std::size_t>(j)].radians());
    a(i, i) += nugget;
    const auto q = NilSpaceBasis(kappa).evaluate(pts[static_cast<std::size_t>(i)]);
    for (int k = 0; k < l; ++k) a(i, n + k) = a(n + k, i) = q(k);
  }
  Eigen::VectorXd rhs(n + l);
  rhs << top, bottom;
  return a.fullPivLu().solve(rhs);
}

}  // namespace

TEST_CASE("single observation, kappa = 1") {
  const Dataset data({Angle(1.0)}, {3.5});
  const auto model = fit_universal(data, IntrinsicCovariance(SpectralModel::spline(1)), 0.0);
  CHECK(std::abs(model.dual_weights()(0)) <= 1e-14);
  CHECK(model.trend_coeffs()(0) == doctest::Approx(3.5));
  for (double t : {0.0, 1.0, 2.5, 6.0}) CHECK(model.predict_value(Angle(t)) == doctest::Approx(3.5));
  const auto m = unbiasedness_measure(model, Angle(2.0));
  REQUIRE(m.size() == 2);
  CHECK(m.atoms()[0].weight == doctest::Approx(1.0));
  CHECK(m.atoms()[1].weight == -1.0);
  CHECK(is_allowable(m, 1, 1e-8));
}

TEST_CASE("three equispaced points from cos t are interpolated") {
  const auto pts = equispaced(3);
  std::vector<double> y;
  for (const auto& t : pts) y.push_back(std::cos(t.radians()));
  const IntrinsicCovariance phi(SpectralModel::list(1, {1.0}));
  const auto model = fit_universal(Dataset(pts, y), phi, 0.0);

  Eigen::VectorXd top(3);
  top << y[0], y[1], y[2];
  const Eigen::VectorXd oracle = dense_bordered_solve(pts, phi, 0.0, 1, top, Eigen::VectorXd::Zero(1));
  for (int i = 0; i < 3; ++i) CHECK(model.dual_weights()(i) == doctest::Approx(oracle(i)).epsilon(1e-12));
  CHECK(std::abs(model.trend_coeffs()(0) - oracle(3)) <= 1e-12);
  for (int i = 0; i < 3; ++i) {
    const auto p = model.predict(pts[static_cast<std::size_t>(i)]);
    CHECK(std::abs(p.value - y[static_cast<std::size_t>(i)]) <= 1e-12);
    CHECK(p.kriging_variance <= 1e-12);
  }
  // Q^T c = 0
  CHECK(std::abs(model.dual_weights().sum()) <= 1e-12);
}

TEST_CASE("brute-force primal solve at t0 = pi/3") {
  const auto pts = equispaced(3);
  const IntrinsicCovariance phi(SpectralModel::list(1, {1.0}));
  const auto model = fit_universal(Dataset(pts, {1.0, 0.0, 0.0}), phi, 0.0);
  const Angle t0(kPi / 3);
  Eigen::VectorXd rhs(3);
  for (int i = 0; i < 3; ++i) rhs(i) = phi(pts[static_cast<std::size_t>(i)].radians() - t0.radians());
  const Eigen::VectorXd oracle = dense_bordered_solve(pts, phi, 0.0, 1, rhs, Eigen::VectorXd::Ones(1));
  const double expected = oracle(0);  // eta^T y with y = (1, 0, 0)
  CHECK(model.predict_value(t0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(model.predict_primal(t0) == doctest::Approx(expected).epsilon(1e-12));
  // cos(pi/3 - 0) interpolant of (1,0,0): (1 + 2 cos(t)) / 3 at pi/3 = 2/3
  CHECK(expected == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("symmetric pair around t0 gets equal weights") {
  const Angle t0(2.0);
  const double h = 0.4;
  const Dataset data({Angle(2.0 - h), Angle(2.0 + h)}, {1.7, 1.7});
  const auto model = fit_universal(data, IntrinsicCovariance(SpectralModel::spline(1)), 0.0);
  const auto w = model.primal_weights(t0);
  CHECK(w.eta(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w.eta(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(model.predict(t0).value == doctest::Approx(1.7).epsilon(1e-12));
  const auto m = unbiasedness_measure(model, t0);
  CHECK(m.atoms()[0].location.radians() == doctest::Approx(2.0 - h));
  CHECK(m.atoms()[2].weight == -1.0);
  CHECK(is_allowable(m, 1, 1e-8));
}

TEST_CASE("fit errors") {
  const IntrinsicCovariance phi2(SpectralModel::list(2, {1.0, 0.5}));
  CHECK_THROWS_AS(fit_universal(Dataset(equispaced(2), {1.0, 2.0}), phi2, 0.0), InsufficientDataError);
  CHECK_THROWS_AS(Dataset({Angle(1.0), Angle(1.0 + kTwoPi)}, {1.0, 2.0}), DuplicateLocationError);
  // Four points but only frequency 1 available: singular without a nugget.
  const IntrinsicCovariance phi1(SpectralModel::list(1, {1.0}));
  const Dataset four(equispaced(4, 0.1), {1.0, 2.0, 0.5, -1.0});
  try {
    fit_universal(four, phi1, 0.0);
    FAIL("expected ConditioningError");
  } catch (const ConditioningError& e) {
    CHECK(std::string(e.what()).find("nugget") != std::string::npos);
  }
  CHECK_NOTHROW(fit_universal(four, phi1, 0.1));
  CHECK_THROWS_AS(fit_universal(four, phi1, -1.0), ConfigurationError);
  CHECK_THROWS_AS(fit_universal(four, phi1, 0.1, TrendBasis::elementary(2)), ConfigurationError);
}

TEST_CASE("ordinary kriging") {
  SUBCASE("single observation") {
    const Dataset data({Angle(0.5)}, {-2.0});
    const auto model = fit_ordinary(data, Semivariogram(SpectralModel::spline(1)));
    CHECK(model.primal_weights(Angle(3.0)).eta(0) == doctest::Approx(1.0));
    CHECK(model.predict_value(Angle(3.0)) == doctest::Approx(-2.0));
  }
  SUBCASE("matches the covariance path and ignores the shift") {
    const auto pts = equispaced(3, 0.2);
    const Dataset data(pts, {0.3, -1.2, 2.0});
    const auto spectrum = SpectralModel::list(1, {1.0});
    const auto ord = fit_ordinary(data, Semivariogram(spectrum));
    const auto uni = fit_universal(data, phi_from_variogram(Semivariogram(spectrum, 1.0)), 0.0);
    const auto shifted = fit_universal(data, phi_from_variogram(Semivariogram(spectrum, 10.0)), 0.0);
    std::mt19937_64 rng(31);
    for (const auto& t : testing::random_angles(rng, 100)) {
      CHECK(std::abs(ord.predict_value(t) - uni.predict_value(t)) <= 1e-10);
      CHECK(std::abs(shifted.predict_value(t) - uni.predict_value(t)) <= 1e-10);
      CHECK(std::abs(ord.predict(t).kriging_variance - uni.predict(t).kriging_variance) <= 1e-10);
    }
  }
}

TEST_CASE("unbiasedness at kappa = 2") {
  std::mt19937_64 rng(32);
  const auto pts = testing::spread_angles(rng, 5, 0.2);
  const Dataset data(pts, {1.0, -0.5, 0.25, 2.0, 0.0});
  const auto model = fit_universal(data, IntrinsicCovariance(SpectralModel::list(2, {1.0, 0.5, 0.25})), 0.0);
  for (const auto& t : testing::random_angles(rng, 20)) CHECK(is_allowable(unbiasedness_measure(model, t), 2, 1e-8));
}

TEST_CASE("cardinal trend basis gives the same predictor") {
  std::mt19937_64 rng(33);
  const auto pts = testing::spread_angles(rng, 9, 0.1);
  std::vector<double> y;
  for (const auto& t : pts) y.push_back(std::sin(2 * t.radians()) + 0.3);
  const IntrinsicCovariance phi(SpectralModel::list(2, {1.0, 0.6, 0.3, 0.2}));
  const auto a = fit_universal(Dataset(pts, y), phi, 0.05);
  const auto b = fit_universal(Dataset(pts, y), phi, 0.05, TrendBasis::cardinal(build_rkhs_basis(2)));
  for (const auto& t : testing::random_angles(rng, 30)) {
    CHECK(a.predict_value(t) == doctest::Approx(b.predict_value(t)).epsilon(1e-10));
    CHECK(a.predict(t).kriging_variance == doctest::Approx(b.predict(t).kriging_variance).epsilon(1e-9));
  }
}

TEST_CASE("trigonometric regression") {
  std::mt19937_64 rng(34);
  std::normal_distribution<double> z(0.0, 1.0);
  SUBCASE("kappa = 1 is the sample mean") {
    const Dataset data(testing::random_angles(rng, 6), {1.0, 2.0, 3.0, 4.0, 5.0, 9.0});
    CHECK(trig_regression(data, 1)(0) == doctest::Approx(4.0));
  }
  SUBCASE("nil-space data is reproduced") {
    const auto pts = testing::random_angles(rng, 8);
    std::vector<double> y;
    for (const auto& t : pts) y.push_back(2.0 - std::cos(t.radians()) + 0.5 * std::sin(t.radians()));
    const auto coef = trig_regression(Dataset(pts, y), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(evaluate_trend(coef, pts[i]) - y[i]) <= 1e-12);
  }
  SUBCASE("agrees with the normal equations") {
    const auto pts = testing::random_angles(rng, 7);
    std::vector<double> y;
    for (int i = 0; i < 7; ++i) y.push_back(z(rng));
    const Dataset data(pts, y);
    const auto coef = trig_regression(data, 2);
    Eigen::MatrixXd x(7, 3);
    for (int i = 0; i < 7; ++i) {
      const double t = pts[static_cast<std::size_t>(i)].radians();
      x.row(i) << 1.0, std::cos(t), std::sin(t);
    }
    const Eigen::VectorXd normal = (x.transpose() * x).ldlt().solve(x.transpose() * data.y());
    for (int k = 0; k < 3; ++k) CHECK(std::abs(coef(k) - normal(k)) <= 1e-10);
  }
  SUBCASE("rank deficiency") {
    const Dataset data({Angle(0.0), Angle(kPi)}, {1.0, 2.0});
    CHECK_THROWS_AS(trig_regression(data, 2), InsufficientDataError);
    // Two of three nodes almost coincide: the sin column nearly vanishes.
    const Dataset degenerate({Angle(0.0), Angle(kPi), Angle(1e-14)}, {1.0, 2.0, 3.0}, 1e-15);
    CHECK_THROWS_AS(trig_regression(degenerate, 2), ConditioningError);
  }
}

TEST_CASE("large nugget approaches trigonometric regression monotonically") {
  std::mt19937_64 rng(35);
  std::normal_distribution<double> z(0.0, 1.0);
  const auto pts = testing::spread_angles(rng, 12, 0.05);
  std::vector<double> y;
  for (int i = 0; i < 12; ++i) y.push_back(z(rng));
  const Dataset data(pts, y);
  const IntrinsicCovariance phi(SpectralModel::spline(1));
  const auto coef = trig_regression(data, 1);
  const auto probes = testing::random_angles(rng, 50);
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha : {1e2, 1e4, 1e6}) {
    const auto model = fit_universal(data, phi, alpha);
    double dev = 0.0;
    for (const auto& t : probes) dev = std::max(dev, std::abs(model.predict_value(t) - evaluate_trend(coef, t)));
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev <= 1e-3 * data.scale());
}

TEST_CASE("kriging variance is nonnegative and vanishes at data") {
  std::mt19937_64 rng(36);
  std::normal_distribution<double> z(0.0, 1.0);
  const auto pts = testing::spread_angles(rng, 10, 0.1);
  std::vector<double> y;
  for (int i = 0; i < 10; ++i) y.push_back(z(rng));
  const auto model = fit_universal(Dataset(pts, y), IntrinsicCovariance(SpectralModel::spline(2)), 0.0);
  for (const auto& t : testing::random_angles(rng, 100)) CHECK(model.predict(t).kriging_variance >= 0.0);
  for (const auto& t : pts) CHECK(model.predict(t).kriging_variance <= 1e-10);
  const auto noisy = fit_universal(Dataset(pts, y), IntrinsicCovariance(SpectralModel::spline(2)), 0.5);
  for (const auto& t : pts) CHECK(noisy.predict(t).kriging_variance > 0.0);
}
