#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "fracepi/model.hpp"

namespace fracepi {

template <class Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

// Analytic Jacobian of the model vector field.
template <class Scalar>
Matrix3<Scalar> jacobian(const ModelParams& p, const State3<Scalar>& x) {
  const Scalar& S = x[0];
  const Scalar& I = x[1];
  const Scalar& P = x[2];
  const Scalar sat = p.a + I;
  if (!(sat > Scalar(0))) throw ValidationError("jacobian: a + I must be positive");
  const Scalar sat2 = sat * sat;
  Matrix3<Scalar> J;
  J(0, 0) = p.r - 2.0 * p.r * S / p.K - p.r * I / p.K - p.lambda * I;
  J(0, 1) = -(p.r / p.K + p.lambda) * S;
  J(0, 2) = Scalar(0);
  J(1, 0) = p.lambda * I;
  J(1, 1) = p.lambda * S - p.m * p.a * P / sat2 - p.mu;
  J(1, 2) = -p.m * I / sat;
  J(2, 0) = Scalar(0);
  J(2, 1) = p.theta * p.a * P / sat2;
  J(2, 2) = p.theta * I / sat - p.d;
  return J;
}

// F(xi) = xi^3 + A1 xi^2 + A2 xi + A3.
struct CubicCharacteristic {
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;
  // 18 A1 A2 A3 + (A1 A2)^2 - 4 A3 A1^3 - 4 A2^3 - 27 A3^2
  double discriminant = 0.0;
  double routh_product = 0.0;  // A1 A2 - A3
};

CubicCharacteristic make_cubic(double A1, double A2, double A3);

// Coefficients at the interior equilibrium from the closed forms in
// (S*, I*, P*). Throws ValidationError unless all coordinates are positive.
CubicCharacteristic characteristic_cubic(const ModelParams& p,
                                         const State& estar);

struct EigenSpectrum {
  std::array<std::complex<double>, 3> eigenvalues{};
  std::array<double, 3> args{};  // principal arguments in [-pi, pi]
  double min_abs_arg = 0.0;
};

EigenSpectrum make_spectrum(const std::array<std::complex<double>, 3>& values);

// Roots of the cubic from the companion-matrix eigenvalues, each polished by
// one Newton step; complex roots come back as exact conjugate pairs.
EigenSpectrum cubic_roots(const CubicCharacteristic& cubic);

// Eigenvalues of a 3x3 matrix.
EigenSpectrum spectrum_of(const Matrix3<double>& J);

// Width of the marginal band around |arg xi| = alpha pi / 2 (radians).
inline constexpr double kTieTolerance = 1e-9;

enum class MatignonStatus { stable, marginal, unstable };

struct MatignonResult {
  MatignonStatus status = MatignonStatus::unstable;
  double margin = 0.0;          // min |arg xi| - alpha pi / 2
  double critical_order = 0.0;  // (2/pi) min |arg xi|, clipped to [0, 1]
  bool zero_eigenvalue = false;
};

// Asymptotic stability of D^alpha x = J x: every |arg xi| > alpha pi / 2.
MatignonResult matignon_check(const EigenSpectrum& spectrum, double alpha,
                              double tie_tolerance = kTieTolerance);

enum class StabilityLabel {
  stable_node,
  stable_focus,
  stable_matignon,  // stable only through the fractional order
  marginal,
  unstable_node,
  unstable_focus,
  unstable,
};

std::string_view to_string(StabilityLabel label);
std::string_view to_string(MatignonStatus status);

enum class Prop1Case { i, ii, iii, iv };
std::string_view to_string(Prop1Case c);

// Hypotheses of the four sign/discriminant cases for the interior cubic.
struct CaseCheck {
  Prop1Case which = Prop1Case::i;
  bool holds = false;
  bool predicts_stable = true;
};

struct StabilityVerdict {
  EquilibriumKind kind = EquilibriumKind::E0;
  double alpha = 1.0;
  StabilityLabel label = StabilityLabel::unstable;
  MatignonStatus status = MatignonStatus::unstable;
  double margin = 0.0;
  double critical_order = 0.0;
  EigenSpectrum spectrum;
  std::optional<CubicCharacteristic> cubic;      // E* only
  std::array<CaseCheck, 4> case_checks{};        // E* only
  std::optional<Prop1Case> proposition1_case;    // first case that holds
  bool case_agrees = true;  // tagged case prediction matches the eigenvalues
  // E2 only: node/focus from R0 against 1 + r/4, and whether it matches
  // the eigenvalue structure.
  std::optional<bool> r0_rule_says_focus;
  bool r0_rule_agrees = true;
  std::string note;
};

StabilityVerdict classify_equilibrium(const ModelParams& p,
                                      const Equilibrium& eq, double alpha);

}  // namespace fracepi
