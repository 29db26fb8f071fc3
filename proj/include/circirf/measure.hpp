#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "circirf/angle.hpp"

namespace circirf {

/// Default absolute tolerance for allowability. Weights are taken at user
/// scale, so callers with very large weights should rescale first.
inline constexpr double kDefaultAllowableTol = 1e-9;

struct Atom {
  Angle location;
  double weight = 0.0;
};

/// A finite signed measure sum_i w_i delta(t_i) on the circle.
///
/// Locations may repeat; coincident atoms simply add in every evaluation.
class DiscreteMeasure {
public:
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

private:
  std::vector<Atom> atoms_;
};

/// (sum_i w_i cos(k t_i), sum_i w_i sin(k t_i)).
std::pair<double, double> measure_moments(const DiscreteMeasure& measure, int order);

/// True iff every trigonometric moment of order 0 <= k < kappa vanishes to
/// within `tol`. kappa = 0 is accepted and always allowable.
bool is_allowable(const DiscreteMeasure& measure, int kappa, double tol = kDefaultAllowableTol);

/// Shift every atom by t; weights are untouched.
DiscreteMeasure translate_measure(const DiscreteMeasure& measure, Angle t);

/// f(lambda) = sum_i w_i f(t_i).
double apply_measure(const std::function<double(Angle)>& f, const DiscreteMeasure& measure);

}  // namespace circirf
