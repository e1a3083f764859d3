#include <doctest.h>

#include <cmath>

#include "fracepi/errors.hpp"
#include "fracepi/quadrature.hpp"
#include "fracepi/special_functions.hpp"

using namespace fracepi;

TEST_CASE("gamma matches std::tgamma") {
  for (double x = -7.75; x < 170.0; x += 0.37) {
    if (std::abs(x - std::round(x)) < 1e-12 && x <= 0) continue;
    const double ref = std::tgamma(x);
    CHECK(fracepi::gamma(x) == doctest::Approx(ref).epsilon(1e-13));
  }
  CHECK(fracepi::gamma(1.0) == 1.0);
  CHECK(fracepi::gamma(5.0) == 24.0);
  CHECK(fracepi::gamma(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-15));
}

TEST_CASE("gamma poles") {
  CHECK_THROWS_AS(fracepi::gamma(0.0), ValidationError);
  CHECK_THROWS_AS(fracepi::gamma(-3.0), ValidationError);
  CHECK(reciprocal_gamma(0.0) == 0.0);
  CHECK(reciprocal_gamma(-4.0) == 0.0);
  CHECK(reciprocal_gamma(-2.5) == doctest::Approx(1.0 / std::tgamma(-2.5)).epsilon(1e-13));
}

TEST_CASE("log_gamma") {
  for (double x : {0.1, 0.5, 3.3, 50.0, 170.5, 500.0, 1e4}) {
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  }
}

TEST_CASE("tanh-sinh handles endpoint singularities") {
  // int_0^1 (1-x)^(-1/2) dx = 2
  auto r = quadrature::tanh_sinh(
      [](double, double, double to_b) { return 1.0 / std::sqrt(to_b); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  // int_0^pi sin = 2
  r = quadrature::tanh_sinh([](double x, double, double) { return std::sin(x); }, 0.0, M_PI);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("exp-sinh on a half line") {
  // int_0^inf exp(-x) x^(-1/2) = sqrt(pi)
  auto r = quadrature::exp_sinh(
      [](double x, double) { return std::exp(-x) / std::sqrt(x); }, 0.0);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}
