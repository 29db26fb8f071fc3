#include "circirf/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "circirf/errors.hpp"
#include "circirf/linalg.hpp"

namespace circirf {

Dataset::Dataset(std::vector<Angle> points, std::vector<double> values, double duplicate_tol)
    : points_(std::move(points)), values_(std::move(values)) {
  if (points_.size() != values_.size()) throw ConfigurationError("dataset needs one value per location");
  if (points_.empty()) throw InsufficientDataError("dataset is empty");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i])) {
      std::ostringstream msg;
      msg << "observation " << i << " is not finite";
      throw ConfigurationError(msg.str());
    }

  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points_[a].radians() < points_[b].radians(); });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    const std::size_t j = order[(k + 1) % order.size()];
    if (i == j) continue;
    if (angular_distance(points_[i], points_[j]) <= duplicate_tol) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "duplicate data location: observations " << std::min(i, j) << " and " << std::max(i, j) << " at "
          << points_[i].radians() << " rad";
      throw DuplicateLocationError(msg.str());
    }
  }
}

Eigen::VectorXd Dataset::y() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(), static_cast<Eigen::Index>(values_.size()));
}

double Dataset::scale() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s > 0.0 ? s : 1.0;
}

TrendBasis TrendBasis::elementary(int kappa) { return TrendBasis(NilSpaceBasis(kappa), std::nullopt); }

TrendBasis TrendBasis::cardinal(RkhsBasis basis) {
  NilSpaceBasis nil = basis.nil_space();
  return TrendBasis(nil, std::move(basis));
}

Eigen::VectorXd TrendBasis::operator()(Angle t) const {
  if (cardinal_) return cardinal_->cardinal(t);
  return nil_.evaluate(t);
}

namespace {

void check_size(const Dataset& data, int kappa) {
  const int l = 2 * kappa - 1;
  if (static_cast<int>(data.size()) < l) {
    std::ostringstream msg;
    msg << "kappa = " << kappa << " needs at least " << l << " observations, got " << data.size();
    throw InsufficientDataError(msg.str());
  }
}

}  // namespace

UniversalKrigingModel::UniversalKrigingModel(Dataset data, std::function<double(double)> structure, TrendBasis trend,
                                             double nugget, const SolverOptions& options)
    : data_(std::move(data)), structure_(std::move(structure)), trend_(std::move(trend)), nugget_(nugget) {
  if (!(nugget >= 0.0) || !std::isfinite(nugget)) throw ConfigurationError("nugget must be finite and nonnegative");
  check_size(data_, trend_.kappa());

  const auto n = static_cast<Eigen::Index>(data_.size());
  const auto l = static_cast<Eigen::Index>(trend_.dimension());
  const auto& pts = data_.points();

  k_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k_(i, i) = structure_(0.0) + nugget_;
    for (Eigen::Index j = 0; j < i; ++j) {
      k_(i, j) = structure_(pts[static_cast<std::size_t>(i)].radians() - pts[static_cast<std::size_t>(j)].radians());
      k_(j, i) = k_(i, j);
    }
  }
  q_.resize(n, l);
  for (Eigen::Index i = 0; i < n; ++i) q_.row(i) = trend_(pts[static_cast<std::size_t>(i)]).transpose();

  Eigen::MatrixXd bordered = Eigen::MatrixXd::Zero(n + l, n + l);
  bordered.topLeftCorner(n, n) = k_;
  bordered.topRightCorner(n, l) = q_;
  bordered.bottomLeftCorner(l, n) = q_.transpose();

  try {
    solver_ = std::make_shared<const SymmetricIndefiniteSolver>(std::move(bordered), options.condition_limit,
                                                                options.refinement_steps);
  } catch (const ConditioningError& e) {
    std::ostringstream msg;
    msg << e.what();
    if (nugget_ == 0.0) msg << "; consider a positive nugget";
    throw ConditioningError(msg.str());
  }

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + l);
  rhs.head(n) = data_.y();
  const Eigen::VectorXd sol = solver_->solve(rhs);
  c_ = sol.head(n);
  d_ = sol.tail(l);
}

Eigen::VectorXd UniversalKrigingModel::structure_vector(Angle t0) const {
  const auto& pts = data_.points();
  Eigen::VectorXd v(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) v(static_cast<Eigen::Index>(i)) = structure_(pts[i].radians() - t0.radians());
  return v;
}

double UniversalKrigingModel::predict_value(Angle t0) const {
  return d_.dot(trend_(t0)) + c_.dot(structure_vector(t0));
}

PrimalWeights UniversalKrigingModel::primal_weights(Angle t0) const {
  const auto n = c_.size();
  const auto l = d_.size();
  Eigen::VectorXd rhs(n + l);
  rhs.head(n) = structure_vector(t0);
  rhs.tail(l) = trend_(t0);
  const Eigen::VectorXd sol = solver_->solve(rhs);
  return {sol.head(n), sol.tail(l)};
}

double UniversalKrigingModel::predict_primal(Angle t0) const { return primal_weights(t0).eta.dot(data_.y()); }

double UniversalKrigingModel::squared_prediction_error(Angle t0, const Eigen::VectorXd& eta) const {
  return structure_(0.0) - 2.0 * eta.dot(structure_vector(t0)) + eta.dot(k_ * eta);
}

Prediction UniversalKrigingModel::predict(Angle t0) const {
  const PrimalWeights w = primal_weights(t0);
  // Round-off can leave a tiny negative residue at data sites.
  const double mse = std::max(0.0, squared_prediction_error(t0, w.eta));
  return {t0, predict_value(t0), mse};
}

UniversalKrigingModel fit_universal(const Dataset& data, const IntrinsicCovariance& cov, double nugget,
                                    const std::optional<TrendBasis>& basis, const SolverOptions& options) {
  TrendBasis trend = basis ? *basis : TrendBasis::elementary(cov.kappa());
  if (trend.kappa() != cov.kappa()) {
    std::ostringstream msg;
    msg << "trend basis order " << trend.kappa() << " does not match covariance order " << cov.kappa();
    throw ConfigurationError(msg.str());
  }
  return UniversalKrigingModel(data, [cov](double lag) { return cov(lag); }, std::move(trend), nugget, options);
}

UniversalKrigingModel fit_ordinary(const Dataset& data, const Semivariogram& sv, const SolverOptions& options) {
  // With phi = c0 - tau the universal system reduces to the variogram form,
  // which is the universal system with generalized covariance -tau.
  return UniversalKrigingModel(data, [sv](double lag) { return -sv(lag); }, TrendBasis::elementary(1), 0.0,
                               options);
}

DiscreteMeasure unbiasedness_measure(const UniversalKrigingModel& model, Angle t0) {
  const Eigen::VectorXd eta = model.primal_weights(t0).eta;
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(eta.size()) + 1);
  for (Eigen::Index i = 0; i < eta.size(); ++i) atoms.push_back({model.data().points()[static_cast<std::size_t>(i)], eta(i)});
  atoms.push_back({t0, -1.0});
  return DiscreteMeasure(std::move(atoms));
}

Eigen::VectorXd trig_regression(const Dataset& data, int kappa) {
  check_size(data, kappa);
  const NilSpaceBasis nil(kappa);
  const Eigen::MatrixXd design = nil.design(data.points());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= kUnisolvencyConditionLimit)) {
    std::ostringstream msg;
    msg << "trigonometric regression design is rank deficient (condition number " << cond << ")";
    throw ConditioningError(msg.str());
  }
  return svd.solve(data.y());
}

double evaluate_trend(const Eigen::VectorXd& coeffs, Angle t) {
  const int kappa = static_cast<int>((coeffs.size() + 1) / 2);
  return NilSpaceBasis(kappa).evaluate(t).dot(coeffs);
}

}  // namespace circirf
