#include "fracepi/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace fracepi {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

cd eval_cubic(const CubicCharacteristic& c, cd x) {
  return ((x + c.A1) * x + c.A2) * x + c.A3;
}

cd eval_cubic_derivative(const CubicCharacteristic& c, cd x) {
  return (3.0 * x + 2.0 * c.A1) * x + c.A2;
}

cd newton_polish(const CubicCharacteristic& c, cd x) {
  const cd d = eval_cubic_derivative(c, x);
  if (std::abs(d) == 0.0) return x;
  const cd next = x - eval_cubic(c, x) / d;
  // Keep the step only when it does not increase the residual.
  return std::abs(eval_cubic(c, next)) <= std::abs(eval_cubic(c, x)) ? next : x;
}

bool all_real(const EigenSpectrum& s) {
  return std::all_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                     [](cd v) { return v.imag() == 0.0; });
}

}  // namespace

CubicCharacteristic make_cubic(double A1, double A2, double A3) {
  CubicCharacteristic c;
  c.A1 = A1;
  c.A2 = A2;
  c.A3 = A3;
  c.discriminant = 18.0 * A1 * A2 * A3 + (A1 * A2) * (A1 * A2) -
                   4.0 * A3 * A1 * A1 * A1 - 4.0 * A2 * A2 * A2 -
                   27.0 * A3 * A3;
  c.routh_product = A1 * A2 - A3;
  return c;
}

CubicCharacteristic characteristic_cubic(const ModelParams& p,
                                         const State& estar) {
  if (!(estar.array() > 0.0).all()) {
    throw ValidationError(
        "characteristic_cubic: interior equilibrium must be positive");
  }
  const double S = estar[0], I = estar[1], P = estar[2];
  const double sat2 = (p.a + I) * (p.a + I);
  const double A1 = p.r * S / p.K - p.m * I * P / sat2;
  const double A2 = p.a * p.m * p.d * P / sat2 + p.r * p.lambda * I * S / p.K +
                    p.lambda * p.lambda * I * S -
                    p.r * p.m * S * I * P / (p.K * sat2);
  const double A3 = p.r * p.m * p.d * p.a * S * P / (p.K * sat2);
  return make_cubic(A1, A2, A3);
}

EigenSpectrum make_spectrum(const std::array<cd, 3>& values) {
  EigenSpectrum s;
  s.eigenvalues = values;
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](cd x, cd y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  s.min_abs_arg = kPi;
  for (std::size_t i = 0; i < 3; ++i) {
    s.args[i] = std::arg(s.eigenvalues[i]);
    s.min_abs_arg = std::min(s.min_abs_arg, std::abs(s.args[i]));
  }
  return s;
}

EigenSpectrum cubic_roots(const CubicCharacteristic& c) {
  Matrix3<double> companion;
  companion << -c.A1, -c.A2, -c.A3,
                 1.0,   0.0,   0.0,
                 0.0,   1.0,   0.0;
  Eigen::EigenSolver<Matrix3<double>> es(companion, false);
  const auto ev = es.eigenvalues();
  std::array<cd, 3> roots{ev[0], ev[1], ev[2]};

  // Real roots first; complex ones come in conjugate pairs from the real
  // Schur form.
  std::array<cd, 3> out{};
  std::size_t k = 0;
  std::array<bool, 3> used{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (roots[i].imag() == 0.0) {
      out[k++] = cd(newton_polish(c, roots[i]).real(), 0.0);
      used[i] = true;
    }
  }
  for (std::size_t i = 0; i < 3 && k < 3; ++i) {
    if (used[i] || roots[i].imag() <= 0.0) continue;
    const cd polished = newton_polish(c, roots[i]);
    out[k++] = cd(polished.real(), std::abs(polished.imag()));
    out[k++] = cd(polished.real(), -std::abs(polished.imag()));
  }
  return make_spectrum(out);
}

EigenSpectrum spectrum_of(const Matrix3<double>& J) {
  Eigen::EigenSolver<Matrix3<double>> es(J, false);
  const auto ev = es.eigenvalues();
  std::array<cd, 3> values{ev[0], ev[1], ev[2]};
  for (auto& v : values) {
    if (v.imag() == 0.0) v = cd(v.real(), 0.0);  // drop -0.0 imaginary parts
  }
  return make_spectrum(values);
}

MatignonResult matignon_check(const EigenSpectrum& spectrum, double alpha,
                              double tie_tolerance) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ValidationError("order must lie in (0,1]");
  }
  double scale = 1.0;
  for (const auto& v : spectrum.eigenvalues) scale = std::max(scale, std::abs(v));

  MatignonResult r;
  r.margin = spectrum.min_abs_arg - alpha * kPi / 2.0;
  r.critical_order = std::clamp(2.0 / kPi * spectrum.min_abs_arg, 0.0, 1.0);
  for (const auto& v : spectrum.eigenvalues) {
    if (std::abs(v) <= 1e-13 * scale) r.zero_eigenvalue = true;
  }
  if (r.zero_eigenvalue) {
    r.status = MatignonStatus::marginal;
  } else if (r.margin > tie_tolerance) {
    r.status = MatignonStatus::stable;
  } else if (r.margin >= -tie_tolerance) {
    r.status = MatignonStatus::marginal;
  } else {
    r.status = MatignonStatus::unstable;
  }
  return r;
}

std::string_view to_string(StabilityLabel label) {
  switch (label) {
    case StabilityLabel::stable_node: return "stable-node";
    case StabilityLabel::stable_focus: return "stable-focus";
    case StabilityLabel::stable_matignon:
      return "stable (Matignon, non-hyperbolic-real-part)";
    case StabilityLabel::marginal: return "marginal";
    case StabilityLabel::unstable_node: return "unstable-node";
    case StabilityLabel::unstable_focus: return "unstable-focus";
    case StabilityLabel::unstable: return "unstable";
  }
  return "?";
}

std::string_view to_string(MatignonStatus status) {
  switch (status) {
    case MatignonStatus::stable: return "stable";
    case MatignonStatus::marginal: return "marginal";
    case MatignonStatus::unstable: return "unstable";
  }
  return "?";
}

std::string_view to_string(Prop1Case c) {
  switch (c) {
    case Prop1Case::i: return "(i)";
    case Prop1Case::ii: return "(ii)";
    case Prop1Case::iii: return "(iii)";
    case Prop1Case::iv: return "(iv)";
  }
  return "?";
}

namespace {

StabilityLabel label_from(const EigenSpectrum& s, const MatignonResult& m,
                          double alpha) {
  const bool real = all_real(s);
  switch (m.status) {
    case MatignonStatus::marginal:
      return StabilityLabel::marginal;
    case MatignonStatus::stable: {
      const bool hyperbolic_sink =
          std::all_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                      [](cd v) { return v.real() < 0.0; });
      if (!hyperbolic_sink) return StabilityLabel::stable_matignon;
      return real ? StabilityLabel::stable_node : StabilityLabel::stable_focus;
    }
    case MatignonStatus::unstable: {
      if (real) return StabilityLabel::unstable_node;
      // Which eigenvalues break the criterion?
      bool real_violator = false, complex_violator = false;
      for (std::size_t i = 0; i < 3; ++i) {
        if (std::abs(s.args[i]) <= alpha * kPi / 2.0) {
          (s.eigenvalues[i].imag() == 0.0 ? real_violator : complex_violator) =
              true;
        }
      }
      if (complex_violator && !real_violator) return StabilityLabel::unstable_focus;
      return StabilityLabel::unstable;
    }
  }
  return StabilityLabel::unstable;
}

std::array<CaseCheck, 4> proposition_cases(const CubicCharacteristic& c,
                                           double alpha) {
  const double D = c.discriminant;
  const double A1 = c.A1, A2 = c.A2, A3 = c.A3;
  const bool routh_equal =
      std::abs(A1 * A2 - A3) <=
      1e-9 * std::max({std::abs(A1 * A2), std::abs(A3), 1e-300});
  std::array<CaseCheck, 4> out{};
  out[0] = {Prop1Case::i, D > 0 && A1 > 0 && A3 > 0 && c.routh_product > 0, true};
  out[1] = {Prop1Case::ii,
            D < 0 && A1 >= 0 && A2 >= 0 && A3 > 0 && alpha < 2.0 / 3.0, true};
  out[2] = {Prop1Case::iii, D < 0 && A1 < 0 && A2 < 0 && alpha > 2.0 / 3.0,
            false};
  out[3] = {Prop1Case::iv,
            D < 0 && A1 > 0 && A2 > 0 && routh_equal && alpha < 1.0, true};
  return out;
}

}  // namespace

StabilityVerdict classify_equilibrium(const ModelParams& p,
                                      const Equilibrium& eq, double alpha) {
  p.validate();
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ValidationError("order must lie in (0,1]");
  }
  if (!eq.exists) {
    throw ValidationError("cannot classify non-existing equilibrium " +
                          std::string(to_string(eq.kind)));
  }

  StabilityVerdict v;
  v.kind = eq.kind;
  v.alpha = alpha;

  if (eq.kind == EquilibriumKind::EStar) {
    v.cubic = characteristic_cubic(p, eq.coords);
    v.spectrum = cubic_roots(*v.cubic);
    v.case_checks = proposition_cases(*v.cubic, alpha);
  } else {
    v.spectrum = spectrum_of(jacobian(p, eq.coords));
  }

  const MatignonResult m = matignon_check(v.spectrum, alpha);
  v.status = m.status;
  v.margin = m.margin;
  v.critical_order = m.critical_order;
  v.label = label_from(v.spectrum, m, alpha);
  if (m.zero_eigenvalue) v.note = "marginal (zero eigenvalue)";

  switch (eq.kind) {
    case EquilibriumKind::E0:
      // Eigenvalues r, -mu, -d: r > 0 always violates the criterion.
      break;
    case EquilibriumKind::E1: {
      const double R0 = p.lambda * p.K / p.mu;
      if (R0 < 1.0 && m.status != MatignonStatus::stable) {
        v.note += (v.note.empty() ? "" : "; ");
        v.note += "R0 < 1 but eigenvalues not Matignon-stable";
      }
      break;
    }
    case EquilibriumKind::E2: {
      const Thresholds th = thresholds(p);
      const bool focus_rule = th.R0 > th.r_focus;
      v.r0_rule_says_focus = focus_rule;
      const bool eig_focus = !all_real(v.spectrum);
      v.r0_rule_agrees = (focus_rule == eig_focus);
      if (!v.r0_rule_agrees) {
        v.note += (v.note.empty() ? "" : "; ");
        v.note += focus_rule
                      ? "R0 > 1 + r/4 but the eigenvalues are real"
                      : "R0 < 1 + r/4 but the eigenvalues are complex";
      }
      break;
    }
    case EquilibriumKind::EStar: {
      for (const auto& c : v.case_checks) {
        if (c.holds) {
          v.proposition1_case = c.which;
          const bool eig_stable = m.status == MatignonStatus::stable;
          v.case_agrees = (c.predicts_stable == eig_stable);
          if (!v.case_agrees) {
            v.note += (v.note.empty() ? "" : "; ");
            v.note += "case " + std::string(to_string(c.which)) +
                      " prediction disagrees with the eigenvalues";
          }
          break;
        }
      }
      break;
    }
  }
  return v;
}

}  // namespace fracepi
