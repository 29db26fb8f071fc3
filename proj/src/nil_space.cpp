#include "circirf/nil_space.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "circirf/errors.hpp"

namespace circirf {

NilSpaceBasis::NilSpaceBasis(int kappa) : kappa_(kappa) {
  if (kappa < 1) throw ConfigurationError("nil space order kappa must be at least 1");
}

Eigen::VectorXd NilSpaceBasis::evaluate(Angle t) const {
  Eigen::VectorXd v(dimension());
  v(0) = 1.0;
  for (int k = 1; k < kappa_; ++k) {
    v(2 * k - 1) = std::cos(k * t.radians());
    v(2 * k) = std::sin(k * t.radians());
  }
  return v;
}

Eigen::MatrixXd NilSpaceBasis::design(const std::vector<Angle>& points) const {
  Eigen::MatrixXd q(static_cast<Eigen::Index>(points.size()), dimension());
  for (std::size_t i = 0; i < points.size(); ++i) q.row(static_cast<Eigen::Index>(i)) = evaluate(points[i]).transpose();
  return q;
}

Eigen::VectorXd RkhsBasis::cardinal(Angle t) const {
  return coeffs_.transpose() * nil_space_.evaluate(t);
}

std::vector<Angle> equispaced_tau(int kappa) {
  const int l = 2 * kappa - 1;
  std::vector<Angle> tau;
  tau.reserve(static_cast<std::size_t>(l));
  for (int nu = 0; nu < l; ++nu) tau.emplace_back(kTwoPi * nu / l);
  return tau;
}

RkhsBasis build_rkhs_basis(int kappa, std::optional<std::vector<Angle>> tau_points) {
  NilSpaceBasis nil(kappa);
  std::vector<Angle> tau = tau_points ? std::move(*tau_points) : equispaced_tau(kappa);
  if (static_cast<int>(tau.size()) != nil.dimension()) {
    std::ostringstream msg;
    msg << "kappa = " << kappa << " needs exactly " << nil.dimension() << " tau points, got " << tau.size();
    throw ConfigurationError(msg.str());
  }

  // collocation(mu, j) = q_j(tau_mu); cardinal coefficients are its inverse.
  const Eigen::MatrixXd collocation = nil.design(tau);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(collocation);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  const double cond = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
  if (!(cond <= kUnisolvencyConditionLimit)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "tau points are not unisolvent for kappa = " << kappa << " (collocation condition number " << cond
        << "); points:";
    for (const auto& t : tau) msg << ' ' << t.radians();
    throw ConfigurationError(msg.str());
  }
  Eigen::MatrixXd coeffs = collocation.partialPivLu().inverse();
  return RkhsBasis(nil, std::move(tau), std::move(coeffs));
}

}  // namespace circirf
