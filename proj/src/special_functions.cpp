#include "fracepi/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "fracepi/errors.hpp"

namespace fracepi {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

// sin(pi x) with exact zeros at integers and reduced argument.
double sin_pi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0.0) r += 2.0;
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == 1.5) return -1.0;
  return std::sin(std::numbers::pi * r);
}

// Lanczos series for Gamma(x), x >= 0.5.
double lanczos_sum(double xm1) {
  double sum = kLanczosCoef[0];
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
    sum += kLanczosCoef[i] / (xm1 + static_cast<double>(i));
  }
  return sum;
}

}  // namespace

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) {
    throw ValidationError("gamma: pole at non-positive integer");
  }
  if (x < 0.5) {
    return std::numbers::pi / (sin_pi(x) * gamma(1.0 - x));
  }
  if (x > 171.7) return INFINITY;
  // Integer arguments: exact factorial products up to 23! fit in a double.
  if (x == std::floor(x) && x <= 23.0) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    return f;
  }
  if (x > 24.0) {
    // Recur down to (23, 24]: the rounding of t^(x-1/2) and exp(-t) grows
    // with x and reaches 1e-13 near the top of the range.
    double prod = 1.0;
    while (x > 24.0) {
      x -= 1.0;
      prod *= x;
    }
    return prod * gamma(x);
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, xm1 + 0.5) *
         std::exp(-t) * lanczos_sum(xm1);
}

double log_gamma(double x) {
  if (is_nonpositive_integer(x)) return INFINITY;
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::abs(sin_pi(x))) -
           log_gamma(1.0 - x);
  }
  if (x < 20.0) return std::log(std::abs(gamma(x)));
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) -
         t + std::log(lanczos_sum(xm1));
}

double reciprocal_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x < 0.5) {
    // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    return sin_pi(x) * gamma(1.0 - x) / std::numbers::pi;
  }
  if (x > 171.0) return std::exp(-log_gamma(x));
  return 1.0 / gamma(x);
}

}  // namespace fracepi
