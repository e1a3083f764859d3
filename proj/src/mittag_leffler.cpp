#include "fracepi/mittag_leffler.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "fracepi/errors.hpp"
#include "fracepi/quadrature.hpp"
#include "fracepi/special_functions.hpp"

namespace fracepi {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Per-term relative error of the series terms (pow/gamma rounding).
constexpr double kTermError = 1e-14;
constexpr int kMaxSeriesTerms = 200000;

// Sign-free log-space |z|^k / Gamma(alpha k + beta).
double series_term(double alpha, double beta, double z, int k) {
  const double arg = alpha * k + beta;
  const double mag =
      (k == 0) ? reciprocal_gamma(arg)
               : std::exp(k * std::log(std::abs(z)) - log_gamma(arg));
  return (z < 0.0 && (k % 2 == 1)) ? -mag : mag;
}

struct SeriesSum {
  double value;
  double abs_sum;
  bool converged;
};

SeriesSum taylor_series(double alpha, double beta, double z) {
  double sum = 0.0, abs_sum = 0.0;
  int small_run = 0;
  double prev_abs = INFINITY;
  const double log_abs_z = std::log(std::abs(z));
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    double t;
    const double arg = alpha * k + beta;
    if (arg < 170.0 && k * log_abs_z < 600.0) {
      t = std::pow(z, k) * reciprocal_gamma(arg);
    } else {
      t = series_term(alpha, beta, z, k);
    }
    if (!std::isfinite(t)) return {t, INFINITY, false};
    sum += t;
    abs_sum += std::abs(t);
    // Three consecutive negligible terms, once the terms are decreasing.
    if (std::abs(t) < 1e-16 * std::abs(sum) && std::abs(t) <= prev_abs) {
      if (++small_run >= 3) return {sum, abs_sum, true};
    } else {
      small_run = 0;
    }
    if (sum == 0.0 && t == 0.0 && k > 0 && std::abs(z) < 1.0) {
      return {sum, abs_sum, true};
    }
    prev_abs = std::abs(t);
  }
  return {sum, abs_sum, false};
}

// -sum_{k>=1} z^-k / Gamma(beta - alpha k), truncated where the envelope
// Gamma(1-x) / (pi |z|^k) of the terms is smallest. The terms themselves
// oscillate through sin(pi x) and cannot serve as the error estimate.
// Returns the estimate when the envelope certifies the tolerance.
std::optional<MlEvaluation> asymptotic_expansion(double alpha, double beta,
                                                 double z) {
  const double log_abs_z = std::log(std::abs(z));
  double sum = 0.0, abs_sum = 0.0;
  double smallest = INFINITY;
  for (int k = 1; k < 5000; ++k) {
    const double x = beta - alpha * k;
    const double log_env =
        (x < 0.5 ? log_gamma(1.0 - x) - std::log(kPi)
                 : -log_gamma(x)) -
        k * log_abs_z;
    const double env = std::exp(log_env);
    if (env > smallest) break;
    smallest = env;
    const double rg = reciprocal_gamma(x);
    double t = 0.0;
    if (rg != 0.0) {
      if (1.0 - x < 170.0) {
        t = rg * std::exp(-k * log_abs_z);
      } else {
        // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi for x < 0
        t = std::sin(kPi * x) * env;
      }
    }
    if (z < 0.0 && (k % 2 == 1)) t = -t;  // z^-k sign
    sum -= t;
    abs_sum += std::abs(t);
    if (env < 1e-17 * std::abs(sum)) break;
  }
  if (sum == 0.0 || !std::isfinite(sum)) return std::nullopt;
  // Subdominant exponential contribution, |exp(z^(1/alpha))| along arg z = pi.
  // Only recessive (bounded by this) between the Stokes and anti-Stokes
  // lines, i.e. alpha > 2/3; switched off beyond.
  const double exp_part =
      alpha > 2.0 / 3.0
          ? std::exp(std::pow(std::abs(z), 1.0 / alpha) * std::cos(kPi / alpha))
          : 0.0;
  const double rel =
      (smallest + exp_part + kTermError * abs_sum) / std::abs(sum);
  if (rel > 1e-2 * kMlTolerance) return std::nullopt;
  return MlEvaluation{sum, MlMethod::asymptotic, rel};
}

// Integral representation for 0 < alpha < 1, z < 0, beta < 1 + alpha.
MlEvaluation integral_representation(double alpha, double beta, double z) {
  const double s1 = std::sin(kPi * (1.0 - beta));
  const double s2 = std::sin(kPi * (1.0 - beta + alpha));
  const double c = std::cos(kPi * alpha);
  const double p = (1.0 - beta) / alpha;
  const double inv_alpha = 1.0 / alpha;
  auto kernel = [&](double chi) {
    if (chi <= 0.0) return 0.0;
    const double den = chi * chi - 2.0 * chi * z * c + z * z;
    const double num = chi * s1 - z * s2;
    return std::pow(chi, p) * std::exp(-std::pow(chi, inv_alpha)) * num /
           (alpha * kPi * den);
  };
  // The denominator is smallest near chi = |z| |cos(pi alpha)| (sharp for
  // alpha near 1); split there so both rules see it at an endpoint.
  const double split = std::max(1.0, std::abs(z) * std::max(0.0, -c));
  const auto left = quadrature::tanh_sinh(
      [&](double x, double, double) { return kernel(x); }, 0.0, split, 1e-13);
  const auto right = quadrature::exp_sinh(
      [&](double x, double) { return kernel(x); }, split, 1e-13);
  const double value = left.value + right.value;
  const double abs_value = left.abs_value + right.abs_value;
  const double rel = (left.error_estimate + right.error_estimate +
                      kTermError * abs_value) /
                     std::abs(value);
  return {value, MlMethod::integral, rel};
}

MlEvaluation alpha_one(double beta, double z) {
  if (beta == 1.0) return {std::exp(z), MlMethod::closed_form, kEps};
  if (beta == 2.0) return {std::expm1(z) / z, MlMethod::closed_form, 4 * kEps};
  if (beta > 1.0) {
    // E_{1,b}(z) = int_0^1 (1-s)^(b-2) e^(zs) ds / Gamma(b-1), positive.
    const double q = beta - 2.0;
    const auto r = quadrature::tanh_sinh(
        [&](double s, double, double to_b) {
          return std::pow(to_b, q) * std::exp(z * s);
        },
        0.0, 1.0, 1e-13);
    return {r.value * reciprocal_gamma(beta - 1.0), MlMethod::integral,
            (r.error_estimate + kTermError * r.abs_value) / std::abs(r.value)};
  }
  // beta < 1: E_{1,b}(z) = z E_{1,b+1}(z) + 1/Gamma(b)
  const MlEvaluation up = alpha_one(beta + 1.0, z);
  const double a = z * up.value;
  const double b = reciprocal_gamma(beta);
  const double v = a + b;
  const double rel =
      (std::abs(a) * up.rel_error + (std::abs(a) + std::abs(b)) * kEps) /
      std::abs(v);
  return {v, up.method, rel};
}

MlEvaluation evaluate(double alpha, double beta, double z) {
  if (z == 0.0) return {reciprocal_gamma(beta), MlMethod::closed_form, kEps};

  if (alpha == 1.0 && (beta == 1.0 || beta == 2.0)) return alpha_one(beta, z);

  const SeriesSum series = taylor_series(alpha, beta, z);
  if (series.converged && std::isfinite(series.value)) {
    const double rel =
        (series.value == 0.0)
            ? INFINITY
            : kTermError * series.abs_sum / std::abs(series.value);
    if (z > 0.0 || rel <= kMlTolerance) {
      return {series.value, MlMethod::series, rel};
    }
  } else if (z > 0.0) {
    throw AccuracyError("mittag_leffler: series overflow for z = " +
                        std::to_string(z));
  }

  // z < 0 with a cancelling series.
  if (alpha == 1.0) return alpha_one(beta, z);
  if (alpha > 1.0) {
    throw AccuracyError(
        "mittag_leffler: cannot certify accuracy for alpha > 1 at z = " +
        std::to_string(z));
  }
  if (auto asym = asymptotic_expansion(alpha, beta, z)) return *asym;
  if (beta >= 1.0 + alpha) {
    // E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z, stable for |z| large.
    const MlEvaluation lower = evaluate(alpha, beta - alpha, z);
    const double v = (lower.value - reciprocal_gamma(beta - alpha)) / z;
    const double rel =
        (std::abs(lower.value) * lower.rel_error +
         (std::abs(lower.value) + std::abs(reciprocal_gamma(beta - alpha))) *
             kEps) /
        std::abs(v * z);
    return {v, lower.method, rel};
  }
  return integral_representation(alpha, beta, z);
}

}  // namespace

MlEvaluation mittag_leffler_eval(const MlQuery& q) {
  if (!(q.alpha > 0.0) || !std::isfinite(q.alpha)) {
    throw ValidationError("mittag_leffler: alpha must be positive");
  }
  if (!(q.beta > 0.0) || !std::isfinite(q.beta)) {
    throw ValidationError("mittag_leffler: beta must be positive");
  }
  if (!std::isfinite(q.z)) {
    throw ValidationError("mittag_leffler: argument must be finite");
  }
  MlEvaluation r = evaluate(q.alpha, q.beta, q.z);
  if (!std::isfinite(r.value)) {
    throw AccuracyError("mittag_leffler: result not representable");
  }
  if (!(r.rel_error <= kMlTolerance)) {
    throw AccuracyError("mittag_leffler: estimated relative error " +
                        std::to_string(r.rel_error) + " exceeds tolerance");
  }
  return r;
}

}  // namespace fracepi
