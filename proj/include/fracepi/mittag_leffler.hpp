#pragma once

namespace fracepi {

// Argument bundle for E_{alpha,beta}(z). beta defaults to the one-parameter
// function E_alpha.
struct MlQuery {
  double alpha = 1.0;
  double beta = 1.0;
  double z = 0.0;
};

enum class MlMethod { closed_form, series, asymptotic, integral };

struct MlEvaluation {
  double value = 0.0;
  MlMethod method = MlMethod::series;
  // Estimated relative error of `value`.
  double rel_error = 0.0;
};

// Target relative accuracy certified by every evaluation path.
inline constexpr double kMlTolerance = 1e-10;

// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta) for real z.
//
// Strategy, chosen per argument:
//  - Taylor series, accepted when the cancellation ratio sum|t_k| / |sum|
//    keeps the rounding error below the tolerance (always for z >= 0);
//  - for 0 < alpha < 1 and z < 0, the asymptotic expansion
//    -sum_k z^-k / Gamma(beta - alpha k) when its smallest term certifies
//    the tolerance, otherwise the real integral representation
//    int_0^inf K(chi) dchi with
//      K = chi^((1-beta)/alpha) exp(-chi^(1/alpha))
//          [chi sin(pi(1-beta)) - z sin(pi(1-beta+alpha))]
//          / (alpha pi (chi^2 - 2 chi z cos(pi alpha) + z^2)),
//    valid for beta < 1 + alpha (larger beta is reduced by the recurrence
//    E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z);
//  - for alpha = 1, exp/expm1 closed forms or the Euler integral
//    E_{1,b}(z) = int_0^1 (1-s)^(b-2) e^(zs) ds / Gamma(b-1).
//
// Throws ValidationError for alpha <= 0, beta <= 0 or non-finite z, and
// AccuracyError when no path can certify kMlTolerance (alpha > 1 with a
// strongly cancelling series, or overflow for large positive z).
MlEvaluation mittag_leffler_eval(const MlQuery& q);

inline double mittag_leffler(double alpha, double beta, double z) {
  return mittag_leffler_eval({alpha, beta, z}).value;
}

inline double mittag_leffler(double alpha, double z) {
  return mittag_leffler_eval({alpha, 1.0, z}).value;
}

}  // namespace fracepi
