#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "entropyrate/quadrature.hpp"

using namespace entropyrate::quadrature;

TEST_CASE("polynomials are integrated exactly") {
  const auto r = integrate_interval([](double x) { return 3.0 * x * x - 2.0 * x + 1.0; }, -1.0, 2.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("oscillatory integrand on a finite interval") {
  // int_0^pi x sin(50 x) dx = -pi / 50
  const auto r = integrate_interval([](double x) { return x * std::sin(50.0 * x); }, 0.0, std::numbers::pi);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(-std::numbers::pi / 50.0).epsilon(1e-12));
}

TEST_CASE("Gaussian moments on the half line") {
  const double s = std::sqrt(std::numbers::pi / 2.0);
  const auto r0 = integrate_semi_infinite([](double x) { return std::exp(-0.5 * x * x); });
  CHECK(r0.converged);
  CHECK(r0.value == doctest::Approx(s).epsilon(1e-12));

  // Peak far from the origin: int exp(-(x - 30)^2 / 8) over [0, inf) = sqrt(8 pi).
  const auto r1 = integrate_semi_infinite([](double x) { return std::exp(-(x - 30.0) * (x - 30.0) / 8.0); },
                                          {}, {30.0, 2.0});
  CHECK(r1.value == doctest::Approx(std::sqrt(8.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("shifted Gaussian covers only r >= 0") {
  // int over s >= -1 of exp(-s^2/2) = sqrt(pi/2) (1 + erf(1/sqrt 2))
  const auto r = integrate_shifted_gaussian([](double s) { return std::exp(-0.5 * s * s); }, 2.0, 2.0);
  const double want = std::sqrt(std::numbers::pi / 2.0) * (1.0 + std::erf(1.0 / std::sqrt(2.0)));
  CHECK(r.value == doctest::Approx(want).epsilon(1e-12));
  CHECK_THROWS_AS(integrate_shifted_gaussian([](double) { return 1.0; }, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("non-finite integrand values raise DomainFault with the abscissa") {
  try {
    (void)integrate_interval([](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; },
                             0.0, 1.0);
    FAIL("expected DomainFault");
  } catch (const DomainFault& e) {
    CHECK(e.abscissa() > 0.5);
  }
}

TEST_CASE("spec validation and subdivision budget") {
  QuadratureSpec bad;
  bad.relative_tolerance = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(integrate_interval([](double) { return 1.0; }, 1.0, 0.0), std::invalid_argument);

  QuadratureSpec tight;
  tight.max_subdivisions = 1;
  tight.relative_tolerance = 1e-15;
  tight.absolute_tolerance = 1e-300;
  const auto r = integrate_interval([](double x) { return std::sqrt(x); }, 0.0, 1.0, tight);
  CHECK_FALSE(r.converged);
  CHECK(r.error_estimate > 0.0);
}
