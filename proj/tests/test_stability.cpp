#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/LU>

#include "fracepi/errors.hpp"
#include "fracepi/stability.hpp"

using namespace fracepi;
using cd = std::complex<double>;

namespace {

bool has_root(const EigenSpectrum& s, cd want, double tol = 1e-9) {
  return std::any_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                     [&](cd v) { return std::abs(v - want) <= tol; });
}

double residual(const CubicCharacteristic& c, cd x) {
  return std::abs(((x + c.A1) * x + c.A2) * x + c.A3);
}

double root_form(const EigenSpectrum& s) {
  const auto& e = s.eigenvalues;
  const cd v = (e[0] - e[1]) * (e[0] - e[2]) * (e[1] - e[2]);
  return (v * v).real();
}

EigenSpectrum random_spectrum(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  if (std::bernoulli_distribution(0.5)(rng)) {
    return make_spectrum({cd(u(rng), 0), cd(u(rng), 0), cd(u(rng), 0)});
  }
  const double re = u(rng), im = std::abs(u(rng)) + 1e-3;
  return make_spectrum({cd(u(rng), 0), cd(re, im), cd(re, -im)});
}

}  // namespace

TEST_CASE("discriminant expansion") {
  CHECK(make_cubic(0, 0, 0).discriminant == 0.0);
  // (x-1)(x-2)(x-3): D = (1*2*1)^2 = 4
  CHECK(make_cubic(-6, 11, -6).discriminant == doctest::Approx(4.0));
  const auto c = make_cubic(1.5, -2.0, 0.25);
  CHECK(c.routh_product == doctest::Approx(1.5 * -2.0 - 0.25));
}

TEST_CASE("cubic roots of textbook polynomials") {
  const auto s = cubic_roots(make_cubic(-6, 11, -6));
  CHECK(has_root(s, 1.0));
  CHECK(has_root(s, 2.0));
  CHECK(has_root(s, 3.0));
  const auto t = cubic_roots(make_cubic(1, 1, 1));
  CHECK(has_root(t, -1.0));
  CHECK(has_root(t, cd(0, 1)));
  CHECK(has_root(t, cd(0, -1)));
  // exact conjugate pair
  CHECK(t.eigenvalues[1] == std::conj(t.eigenvalues[2]));
}

TEST_CASE("random cubics: residual, discriminant identity, sign rule") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 1000; ++k) {
    const auto c = make_cubic(u(rng), u(rng), u(rng));
    const auto s = cubic_roots(c);
    const double scale = std::max({1.0, std::abs(c.A1), std::abs(c.A2), std::abs(c.A3)});
    for (const auto& x : s.eigenvalues) CHECK(residual(c, x) < 1e-9 * scale);
    const double rf = root_form(s);
    CAPTURE(k);
    CHECK(std::abs(c.discriminant - rf) <= 1e-6 * std::max(1.0, std::abs(c.discriminant)));
    const bool complex_pair = s.eigenvalues[1].imag() != 0.0 || s.eigenvalues[2].imag() != 0.0;
    if (complex_pair) CHECK(rf <= 0.0);
    else if (std::abs(c.discriminant) > 1e-9) CHECK(rf > 0.0);
  }
}

TEST_CASE("Matignon examples") {
  const auto neg = make_spectrum({cd(-1, 0), cd(-2, 0), cd(-3, 0)});
  for (double a : {0.1, 0.5, 1.0}) CHECK(matignon_check(neg, a).status == MatignonStatus::stable);

  const auto e0 = make_spectrum({cd(2, 0), cd(-0.28, 0), cd(-0.09, 0)});
  for (double a : {0.1, 0.5, 1.0}) CHECK(matignon_check(e0, a).status == MatignonStatus::unstable);

  const auto center = make_spectrum({cd(-1, 0), cd(0, 1), cd(0, -1)});
  CHECK(matignon_check(center, 0.99).status == MatignonStatus::stable);
  CHECK(matignon_check(center, 1.0).status == MatignonStatus::marginal);
  CHECK(matignon_check(center, 1.0).critical_order == doctest::Approx(1.0));

  const auto zero = make_spectrum({cd(0, 0), cd(-1, 0), cd(-2, 0)});
  const auto z = matignon_check(zero, 0.5);
  CHECK(z.zero_eigenvalue);
  CHECK(z.status == MatignonStatus::marginal);

  CHECK_THROWS_AS(matignon_check(neg, 0.0), ValidationError);
  CHECK_THROWS_AS(matignon_check(neg, 1.1), ValidationError);
}

TEST_CASE("Matignon: alpha monotonicity and alpha = 1 real-part agreement") {
  std::mt19937_64 rng(5);
  int compared = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto s = random_spectrum(rng);
    CAPTURE(k);
    bool seen_stable = false;
    for (int j = 100; j >= 1; --j) {
      const bool stable = matignon_check(s, 0.01 * j).status == MatignonStatus::stable;
      if (seen_stable) CHECK(stable);
      seen_stable = seen_stable || stable;
    }
    const auto m = matignon_check(s, 1.0);
    if (std::abs(m.margin) < kTieTolerance) continue;
    double max_re = -INFINITY;
    for (const auto& v : s.eigenvalues) max_re = std::max(max_re, v.real());
    CHECK((m.status == MatignonStatus::stable) == (max_re < 0.0));
    ++compared;
  }
  CHECK(compared > 990);
}

TEST_CASE("Jacobian at E0 and E1") {
  const ModelParams p;
  const auto j0 = jacobian<double>(p, State::Zero());
  CHECK(j0.isDiagonal());
  const auto s0 = spectrum_of(j0);
  CHECK(has_root(s0, 2.0));
  CHECK(has_root(s0, -0.28));
  CHECK(has_root(s0, -0.09));
  const auto s1 = spectrum_of(jacobian<double>(p, State(40, 0, 0)));
  CHECK(has_root(s1, -2.0));
  CHECK(has_root(s1, 0.32, 1e-12));
  CHECK(has_root(s1, -0.09));
}

TEST_CASE("Jacobian matches central differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 60.0);
  ModelParams p;
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const State x(u(rng), u(rng), u(rng));
    const auto J = jacobian<double>(p, x);
    for (int c = 0; c < 3; ++c) {
      State xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      const State col = (rhs<double>(p, xp) - rhs<double>(p, xm)) / (2 * h);
      for (int r = 0; r < 3; ++r) CHECK(std::abs(J(r, c) - col[r]) < 1e-5);
    }
  }
  const Equilibrium es = find_equilibrium(equilibria(p), EquilibriumKind::EStar);
  const auto Je = jacobian<double>(p, es.coords);
  CHECK(std::abs(Je(2, 2)) < 1e-12);
  CHECK(Je(0, 2) == 0.0);
}

TEST_CASE("closed-form coefficients agree with the Jacobian's characteristic polynomial") {
  for (const char* name : {"example1", "example1-coexist", "example1-unstable"}) {
    const ModelParams p = find_preset(name).params;
    const Equilibrium es = find_equilibrium(equilibria(p), EquilibriumKind::EStar);
    const auto c = characteristic_cubic(p, es.coords);
    const auto J = jacobian<double>(p, es.coords);
    const double tr = J.trace();
    const double minors = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0) + J(0, 0) * J(2, 2) -
                          J(0, 2) * J(2, 0) + J(1, 1) * J(2, 2) - J(1, 2) * J(2, 1);
    CAPTURE(name);
    CHECK(c.A1 == doctest::Approx(-tr).epsilon(1e-10));
    CHECK(c.A2 == doctest::Approx(minors).epsilon(1e-10));
    CHECK(c.A3 == doctest::Approx(-J.determinant()).epsilon(1e-10));
  }
}

TEST_CASE("example1 coefficients and verdicts") {
  const ModelParams p;
  const Equilibrium es = find_equilibrium(equilibria(p), EquilibriumKind::EStar);
  const auto c = characteristic_cubic(p, es.coords);
  CHECK(std::abs(c.A1 - 1.0879) <= 5e-4);
  CHECK(std::abs(c.A3 - 0.0028) <= 5e-4);
  CHECK(std::abs(c.routh_product - 0.2909) <= 5e-4);
  CHECK(std::abs(c.discriminant - 0.0077) <= 5e-4);
  for (double a : {0.1, 0.5, 0.85, 1.0}) {
    const auto v = classify_equilibrium(p, es, a);
    CHECK(v.status == MatignonStatus::stable);
    CHECK(v.proposition1_case == Prop1Case::i);
    CHECK(v.case_agrees);
  }
  CHECK_THROWS_AS(characteristic_cubic(p, State(1, 0, 1)), ValidationError);
}

TEST_CASE("unstable example: case (iii)") {
  const ModelParams p = find_preset("example1-unstable").params;
  const Equilibrium es = find_equilibrium(equilibria(p), EquilibriumKind::EStar);
  const auto c = characteristic_cubic(p, es.coords);
  CHECK(std::abs(c.discriminant - -463.8995) <= 0.05);
  CHECK(std::abs(c.A1 - -0.9276) <= 5e-4);
  CHECK(std::abs(c.A2 - -0.5775) <= 5e-4);
  const auto v = classify_equilibrium(p, es, 0.85);
  CHECK(v.status == MatignonStatus::unstable);
  CHECK(v.proposition1_case == Prop1Case::iii);
  CHECK(v.case_agrees);
  CHECK(v.label == StabilityLabel::unstable_focus);
}

TEST_CASE("boundary equilibria") {
  ModelParams e3;
  e3.lambda = 0.005;
  const auto eqs3 = equilibria(e3);
  const auto v1 = classify_equilibrium(e3, find_equilibrium(eqs3, EquilibriumKind::E1), 0.9);
  CHECK(v1.status == MatignonStatus::stable);
  CHECK_THROWS_AS(classify_equilibrium(e3, find_equilibrium(eqs3, EquilibriumKind::E2), 0.9),
                  ValidationError);

  const ModelParams p;
  for (double a : {0.3, 1.0}) {
    const auto v0 = classify_equilibrium(p, find_equilibrium(equilibria(p), EquilibriumKind::E0), a);
    CHECK(v0.status == MatignonStatus::unstable);
  }
}

TEST_CASE("E2 verdict flips at d1") {
  ModelParams p;
  p.theta = 0.08;
  const double d1 = *thresholds(p).d1;
  for (double delta : {-1e-4, 1e-4}) {
    ModelParams q = p;
    q.d = d1 + delta;
    const auto v = classify_equilibrium(q, find_equilibrium(equilibria(q), EquilibriumKind::E2), 0.9);
    CHECK((v.status == MatignonStatus::stable) == (delta > 0));
  }
}

TEST_CASE("E2 node/focus: eigenvalues against the R0 rule") {
  ModelParams p;
  p.theta = 0.08;
  const auto v = classify_equilibrium(p, find_equilibrium(equilibria(p), EquilibriumKind::E2), 0.9);
  REQUIRE(v.r0_rule_says_focus.has_value());
  CHECK(*v.r0_rule_says_focus);  // R0 = 2.14 > 1.5
  const bool complex_pair = v.spectrum.eigenvalues[1].imag() != 0.0;
  CHECK(v.r0_rule_agrees == (complex_pair == *v.r0_rule_says_focus));
  CHECK(v.label == (complex_pair ? StabilityLabel::stable_focus : StabilityLabel::stable_node));
}

TEST_CASE("random parameters: case tags never contradict the eigenvalues") {
  std::mt19937_64 rng(19);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  int tagged = 0, disagreements = 0;
  for (int k = 0; k < 1000; ++k) {
    ModelParams p;
    p.r = u(0.5, 4);
    p.K = u(20, 300);
    p.lambda = u(0.005, 0.2);
    p.m = u(0.1, 2);
    p.mu = u(0.05, 0.6);
    p.a = u(1, 30);
    p.theta = u(0.1, 1);
    p.d = u(0.01, 0.3);
    const Equilibrium es = find_equilibrium(equilibria(p), EquilibriumKind::EStar);
    if (!es.exists) continue;
    for (double a : {0.5, 0.85}) {
      const auto v = classify_equilibrium(p, es, a);
      if (!v.proposition1_case) continue;
      ++tagged;
      if (!v.case_agrees) ++disagreements;
    }
  }
  MESSAGE("case-tagged verdicts: " << tagged << ", disagreements: " << disagreements);
  CHECK(tagged > 100);
  CHECK(disagreements == 0);
}
