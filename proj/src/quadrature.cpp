#include "fracepi/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace fracepi::quadrature {
namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

template <class Level>
Result refine(Level&& level_sum, double rel_tol, int max_levels) {
  // Level 0 samples t = k (step 1); level m adds the odd multiples of 2^-m.
  Result out;
  double h = 1.0;
  double sum = 0.0, abs_sum = 0.0;
  level_sum(h, /*odd_only=*/false, sum, abs_sum);
  double prev = sum * h;
  for (int m = 1; m <= max_levels; ++m) {
    h *= 0.5;
    level_sum(h, /*odd_only=*/true, sum, abs_sum);
    const double cur = sum * h;
    out.value = cur;
    out.abs_value = abs_sum * h;
    out.error_estimate = std::abs(cur - prev);
    out.levels = m;
    if (m >= 3 && out.error_estimate <= rel_tol * std::abs(cur)) break;
    if (m >= 3 && cur == 0.0 && prev == 0.0) break;
    prev = cur;
  }
  return out;
}

}  // namespace

Result tanh_sinh(const BoundedIntegrand& f, double a, double b, double rel_tol,
                 int max_levels) {
  const double half = 0.5 * (b - a);
  constexpr double t_max = 6.5;

  auto add_point = [&](double t, double& sum, double& abs_sum) {
    const double u = kHalfPi * std::sinh(t);
    const double ch = std::cosh(u);
    // 1 - tanh|u| = 2 / (exp(2|u|) + 1), distance to the nearer endpoint.
    const double gap = half * 2.0 / (std::exp(2.0 * std::abs(u)) + 1.0);
    if (gap <= 0.0 || !std::isfinite(ch)) return;
    const double w = half * kHalfPi * std::cosh(t) / (ch * ch);
    if (w == 0.0) return;
    double x, from_a, to_b;
    if (u < 0.0) {
      from_a = gap;
      to_b = (b - a) - gap;
      x = a + gap;
    } else {
      to_b = gap;
      from_a = (b - a) - gap;
      x = b - gap;
    }
    const double fx = f(x, from_a, to_b);
    if (!std::isfinite(fx)) return;
    sum += w * fx;
    abs_sum += w * std::abs(fx);
  };

  auto level_sum = [&](double h, bool odd_only, double& sum, double& abs_sum) {
    const long n = static_cast<long>(std::ceil(t_max / h));
    for (long k = -n; k <= n; ++k) {
      if (odd_only && (k % 2 == 0)) continue;
      add_point(static_cast<double>(k) * h, sum, abs_sum);
    }
  };
  return refine(level_sum, rel_tol, max_levels);
}

Result exp_sinh(const std::function<double(double, double)>& f, double a,
                double rel_tol, int max_levels) {
  constexpr double t_lo = -6.5;
  constexpr double t_hi = 6.5;

  auto add_point = [&](double t, double& sum, double& abs_sum) {
    const double e = std::exp(kHalfPi * std::sinh(t));
    if (e == 0.0 || !std::isfinite(e)) return;
    const double w = kHalfPi * std::cosh(t) * e;
    const double fx = f(a + e, e);
    if (!std::isfinite(fx) || fx == 0.0) return;
    sum += w * fx;
    abs_sum += w * std::abs(fx);
  };

  auto level_sum = [&](double h, bool odd_only, double& sum, double& abs_sum) {
    const long lo = static_cast<long>(std::floor(t_lo / h));
    const long hi = static_cast<long>(std::ceil(t_hi / h));
    for (long k = lo; k <= hi; ++k) {
      if (odd_only && (k % 2 == 0)) continue;
      add_point(static_cast<double>(k) * h, sum, abs_sum);
    }
  };
  return refine(level_sum, rel_tol, max_levels);
}

}  // namespace fracepi::quadrature
