#pragma once

#include <functional>

namespace fracepi::quadrature {

struct Result {
  double value = 0.0;
  // Integral of |f|; value/abs_value measures cancellation in the rule.
  double abs_value = 0.0;
  // Difference between the last two refinement levels.
  double error_estimate = 0.0;
  int levels = 0;
};

// Integrand on a finite interval. Receives the abscissa and its distances to
// both endpoints, computed without cancellation, so endpoint singularities
// like (b - x)^p can be evaluated accurately.
using BoundedIntegrand = std::function<double(double x, double from_a, double to_b)>;

// Tanh-sinh rule on [a, b], refined until successive levels agree to rel_tol.
Result tanh_sinh(const BoundedIntegrand& f, double a, double b,
                 double rel_tol = 1e-14, int max_levels = 12);

// Exp-sinh rule on [a, inf). f receives (x, x - a).
Result exp_sinh(const std::function<double(double x, double from_a)>& f,
                double a, double rel_tol = 1e-14, int max_levels = 12);

}  // namespace fracepi::quadrature
