#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entropyrate/bounds.hpp"
#include "entropyrate/fixtures.hpp"
#include "entropyrate/specfun.hpp"

using namespace entropyrate;
using namespace entropyrate::bounds;

TEST_CASE("ricci bound") {
  CHECK(ricci_bound_rhs(1, 0.0, 1.0, 1.0) == doctest::Approx(0.25));
  CHECK(ricci_bound_rhs(2, 1.0, 3.0, 1e-12) == doctest::Approx(1.5));
  CHECK(ricci_bound_rhs(2, -1.0, 3.0, 1e-12) == doctest::Approx(1.5));
  CHECK(ricci_bound_rhs(2, 1e-8, 3.0, 2.0) == doctest::Approx(ricci_bound_rhs(2, 0.0, 3.0, 2.0)).epsilon(1e-6));
  CHECK(ricci_bound_rhs(3, -1.0, 5.0, 1e6) == doctest::Approx(ricci_bound_asymptote(3, -1.0)).epsilon(1e-6));
  CHECK_THROWS_AS(ricci_bound_rhs(2, 0.0, 0.0, 1.0), specfun::ContractViolation);
  CHECK_THROWS_AS(ricci_bound_rhs(2, 0.0, 1.0, 0.0), specfun::ContractViolation);
}

TEST_CASE("ricci bound is continuous at k = 0 and decreasing in k") {
  for (int n : {1, 2, 3}) {
    for (double q0 : {0.1, 1.0, 10.0}) {
      for (double t : {0.01, 1.0, 10.0}) {
        CHECK(ricci_bound_rhs(n, 1e-9, q0, t) == doctest::Approx(ricci_bound_rhs(n, 0.0, q0, t)).epsilon(1e-6));
        CHECK(ricci_bound_rhs(n, -1e-9, q0, t) == doctest::Approx(ricci_bound_rhs(n, 0.0, q0, t)).epsilon(1e-6));
        double prev = ricci_bound_rhs(n, -2.0, q0, t);
        for (double k = -1.9; k <= 2.0; k += 0.1) {
          const double v = ricci_bound_rhs(n, k, q0, t);
          CHECK(v <= prev * (1.0 + 1e-12));
          prev = v;
        }
      }
    }
  }
}

TEST_CASE("asymptote") {
  CHECK(ricci_bound_asymptote(3, -1.0) == 1.5);
  CHECK(ricci_bound_asymptote(2, 1.0) == 0.0);
}

TEST_CASE("hamilton, spectral gap and euclidean references") {
  CHECK(hamilton_bound_rhs(0.0, std::exp(1.0), 1.0) == doctest::Approx(1.0));
  CHECK(hamilton_bound_rhs(0.0, 1.0, 3.0) == 0.0);
  CHECK(hamilton_bound_rhs(-1.0, 1.5, 2.0) == doctest::Approx(0.6081976622));

  const double lam = 4.0 * std::numbers::pi * std::numbers::pi;
  const double lap = lam * 0.5 / std::sqrt(2.0);
  const double full = spectral_gap_bound_rhs(lam, lap, 1.0, 0.5, 1.5, 0.0);
  CHECK(full == doctest::Approx(0.5 * lap * (std::log(2.0) + std::log(1.5))));
  CHECK(spectral_gap_bound_rhs(lam, lap, 1.0, 0.5, 1.5, 0.1) == doctest::Approx(full * std::exp(-0.2 * std::numbers::pi * std::numbers::pi)));
  CHECK(spectral_gap_bound_rhs(lam, 0.0, 1.0, 1.0, 1.0, 1.0) == 0.0);

  // ||Laplacian f|| from the coefficients.
  const auto f = spectral::project_initial(spectral::ManifoldSpec::circle(),
                                           [](double x, double) { return 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * x); }, 3);
  CHECK(f.laplacian_norm() == doctest::Approx(lap));

  CHECK(euclidean_rate_reference(3, 1.0) == 1.5);
  CHECK(euclidean_rate_reference(3, 10.0) == doctest::Approx(0.15));
}

TEST_CASE("report slack") {
  const auto r = make_report("x", {1.0, 2.0}, {1.0 + 5e-7, 2.0}, {1.0, 1.0});
  CHECK(r.satisfied[0]);
  CHECK_FALSE(r.satisfied[1]);
  CHECK_FALSE(r.all_satisfied());
  CHECK(r.min_margin == doctest::Approx(-1.0));
}

TEST_CASE("check_bounds on the fixtures") {
  for (const auto& name : fixtures::names()) {
    CAPTURE(name);
    const auto fx = fixtures::by_name(name);
    const auto init = fx.initial();
    const auto tr = spectral::entropy_trace(init, fixtures::time_grid(0.01, 2.0, 10, true), fx.trace_options);
    const auto reports = check_bounds(tr, init, fx.extrema);
    CHECK(reports.size() == (fx.manifold.drifted() ? 2u : 3u));
    for (const auto& r : reports) {
      CAPTURE(r.name);
      CHECK(r.all_satisfied());
    }
  }
}

TEST_CASE("constant datum gives zero rates") {
  const auto init = spectral::project_initial(spectral::ManifoldSpec::circle(), [](double, double) { return 1.0; }, 2);
  const auto tr = spectral::entropy_trace(init, {0.5, 1.0});
  for (const auto& r : check_bounds(tr, init)) {
    CHECK(r.all_satisfied());
    for (double v : r.lhs) CHECK(std::abs(v) < 1e-30);
  }
}
