#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracepi/errors.hpp"
#include "fracepi/mittag_leffler.hpp"
#include "fracepi/special_functions.hpp"

using namespace fracepi;

namespace {

struct Row {
  double alpha, beta, z, value;
};

const Row kReference[] = {
#include "data/ml_reference.inc"
};

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

const Row& lookup(double alpha, double beta, double z) {
  for (const auto& r : kReference) {
    if (r.alpha == alpha && r.beta == beta && r.z == z) return r;
  }
  FAIL("row missing from the reference table");
  return kReference[0];
}

}  // namespace

TEST_CASE("trivial values") {
  CHECK(mittag_leffler(0.5, 0.0) == 1.0);
  CHECK(mittag_leffler(0.5, 1.0, 0.0) == 1.0);
  CHECK(mittag_leffler(1.0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(mittag_leffler(1.0, 2.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
}

TEST_CASE("frozen high-precision values") {
  const Row& a = lookup(0.8, 1.0, -2.0);
  CHECK(rel_err(mittag_leffler(0.8, -2.0), a.value) <= 1e-10);
  const Row& b = lookup(0.7, 0.7, -1.5);
  CHECK(rel_err(mittag_leffler(0.7, 0.7, -1.5), b.value) <= 1e-10);
}

TEST_CASE("whole reference grid to 1e-10 for |z| <= 50") {
  int checked = 0;
  for (const auto& r : kReference) {
    if (!std::isfinite(r.value)) continue;
    CAPTURE(r.alpha);
    CAPTURE(r.beta);
    CAPTURE(r.z);
    const auto ev = mittag_leffler_eval({r.alpha, r.beta, r.z});
    CHECK(rel_err(ev.value, r.value) <= 1e-10);
    ++checked;
  }
  CHECK(checked > 1000);
}

TEST_CASE("recurrence E_{a,b} = z E_{a,a+b} + 1/Gamma(b)") {
  for (double a : {0.3, 0.5, 0.75, 0.9, 1.0}) {
    for (double b : {0.5, 1.0, 1.7, 2.5}) {
      // E_{a,b}(z) ~ exp(z^(1/a)) overflows quickly for small a
      const double z_max = std::min(10.0, std::pow(600.0, a));
      for (double z = -50.0; z <= z_max; z += 2.5) {
        const double lhs = mittag_leffler(a, b, z);
        const double rhs = z * mittag_leffler(a, a + b, z) + reciprocal_gamma(b);
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(z);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
      }
    }
  }
}

TEST_CASE("two-parameter form with beta = 1 reduces to one-parameter") {
  for (double a : {0.25, 0.6, 0.85, 1.0}) {
    const double z_max = std::min(20.0, std::pow(600.0, a));
    for (double z = -40.0; z <= z_max; z += 1.75) {
      const double one = mittag_leffler(a, z);
      const double two = mittag_leffler(a, 1.0, z);
      CHECK(rel_err(two, one) <= 1e-12);
    }
  }
}

TEST_CASE("alpha = 1 is the exponential") {
  for (double z = -30.0; z <= 30.0; z += 0.5) {
    CHECK(rel_err(mittag_leffler(1.0, z), std::exp(z)) <= 1e-10);
  }
}

TEST_CASE("E_a(-t) is positive and non-increasing for 0 < a < 1") {
  for (double a : {0.2, 0.5, 0.8, 0.95, 0.999}) {
    double prev = mittag_leffler(a, 0.0);
    for (int k = 1; k <= 1000; ++k) {
      const double v = mittag_leffler(a, -0.1 * k);
      CAPTURE(a);
      CAPTURE(k);
      CHECK(v > 0.0);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("rejects invalid arguments") {
  CHECK_THROWS_AS(mittag_leffler(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(mittag_leffler(-0.5, 1.0), ValidationError);
  CHECK_THROWS_AS(mittag_leffler(0.5, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(mittag_leffler(0.5, NAN), ValidationError);
  CHECK_THROWS_AS(mittag_leffler(0.5, INFINITY), ValidationError);
}

TEST_CASE("overflow is reported, not returned") {
  CHECK_THROWS_AS(mittag_leffler(0.1, 1e4), AccuracyError);
}

TEST_CASE("evaluation paths") {
  CHECK(mittag_leffler_eval({0.8, 1.0, -1.0}).method == MlMethod::series);
  CHECK(mittag_leffler_eval({0.5, 1.0, -40.0}).method == MlMethod::asymptotic);
  CHECK(mittag_leffler_eval({0.9, 1.0, -20.0}).method == MlMethod::integral);
  CHECK(mittag_leffler_eval({1.0, 1.0, 2.0}).method == MlMethod::closed_form);
}
