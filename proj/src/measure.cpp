#include "circirf/measure.hpp"

#include <cmath>
#include <stdexcept>

#include "circirf/errors.hpp"

namespace circirf {

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ConfigurationError("a discrete measure needs at least one atom");
}

std::pair<double, double> measure_moments(const DiscreteMeasure& measure, int order) {
  if (order < 0) throw std::invalid_argument("moment order must be nonnegative");
  double c = 0.0;
  double s = 0.0;
  if (order == 0) {
    for (const auto& a : measure.atoms()) c += a.weight;
    return {c, 0.0};
  }
  for (const auto& a : measure.atoms()) {
    const double arg = order * a.location.radians();
    c += a.weight * std::cos(arg);
    s += a.weight * std::sin(arg);
  }
  return {c, s};
}

bool is_allowable(const DiscreteMeasure& measure, int kappa, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("allowability tolerance must be positive");
  for (int k = 0; k < kappa; ++k) {
    const auto [c, s] = measure_moments(measure, k);
    if (std::abs(c) > tol || std::abs(s) > tol) return false;
  }
  return true;
}

DiscreteMeasure translate_measure(const DiscreteMeasure& measure, Angle t) {
  std::vector<Atom> shifted;
  shifted.reserve(measure.size());
  for (const auto& a : measure.atoms()) shifted.push_back({a.location + t, a.weight});
  return DiscreteMeasure(std::move(shifted));
}

double apply_measure(const std::function<double(Angle)>& f, const DiscreteMeasure& measure) {
  double total = 0.0;
  for (const auto& a : measure.atoms()) total += a.weight * f(a.location);
  return total;
}

}  // namespace circirf
