#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entropyrate/fixtures.hpp"
#include "entropyrate/spectral.hpp"

using namespace entropyrate;
using namespace entropyrate::spectral;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double one_mode(double x, double) { return 1.0 + 0.5 * std::cos(kTwoPi * x); }

}  // namespace

TEST_CASE("projection of simple data") {
  const auto circle = ManifoldSpec::circle();
  const auto flat = project_initial(circle, [](double, double) { return 1.0; }, 4);
  CHECK(flat.coefficient(0).real() == doctest::Approx(1.0));
  CHECK(std::abs(flat.coefficient(1)) < 1e-15);

  const auto f = project_initial(circle, one_mode, 4);
  int nonzero = 0;
  for (int m = -4; m <= 4; ++m) {
    if (m != 0 && std::abs(f.coefficient(m)) > 1e-14) ++nonzero;
  }
  CHECK(nonzero == 2);
  CHECK(f.coefficient(1).real() == doctest::Approx(0.25));

  const auto sphere = fixtures::sphere().initial();
  CHECK(sphere.mass() == doctest::Approx(1.0).epsilon(1e-14));
  for (int l = 2; l <= sphere.cutoff(); ++l) CHECK(std::abs(sphere.coefficient(l)) < 1e-14);
  // c_0 = 1 / sqrt(4 pi), c_1 = (1/2) / sqrt(12 pi) against the orthonormal basis.
  CHECK(sphere.coefficient(0).real() == doctest::Approx(1.0 / std::sqrt(4.0 * std::numbers::pi)));
  CHECK(sphere.coefficient(1).real() == doctest::Approx(0.5 / std::sqrt(12.0 * std::numbers::pi)));
}

TEST_CASE("projection rejects unresolved or nonpositive data") {
  const auto circle = ManifoldSpec::circle();
  CHECK_THROWS_AS(project_initial(circle, [](double x, double) { return 1.0 + 0.5 * std::cos(kTwoPi * 9 * x); }, 4),
                  TruncationError);
  CHECK_THROWS_AS(project_initial(circle, [](double x, double) { return std::cos(kTwoPi * x); }, 4),
                  TruncationError);
}

TEST_CASE("evolution is exact and conserves mass") {
  const auto f = project_initial(ManifoldSpec::circle(), one_mode, 4);
  const auto g = evolve(f, 1.0);
  CHECK(g.coefficient(1).real() == doctest::Approx(0.25 * std::exp(-2.0 * std::numbers::pi * std::numbers::pi)));
  CHECK(g.coefficient(0) == f.coefficient(0));
  CHECK(evolve(f, 0.0).coefficients() == f.coefficients());
  CHECK_THROWS_AS(evolve(f, -1.0), std::invalid_argument);
}

TEST_CASE("entropy and Fisher information against quadrature oracles") {
  const auto flat = project_initial(ManifoldSpec::torus2(), [](double, double) { return 1.0; }, 3);
  const auto ef0 = entropy_and_fisher(flat);
  CHECK(ef0.entropy == doctest::Approx(0.0));
  CHECK(ef0.fisher == doctest::Approx(0.0));

  const auto ef1 = entropy_and_fisher(project_initial(ManifoldSpec::circle(), one_mode, 4));
  CHECK(ef1.fisher == doctest::Approx(5.2891050577730962).epsilon(1e-10));
  CHECK(ef1.entropy == doctest::Approx(-0.064638132020487443).epsilon(1e-10));

  const auto ef2 = entropy_and_fisher(fixtures::circle().initial());
  CHECK(ef2.fisher == doctest::Approx(3.6407257094035919).epsilon(1e-10));
  CHECK(ef2.entropy == doctest::Approx(-0.041386165721002469).epsilon(1e-10));

  const auto ef3 = entropy_and_fisher(fixtures::sphere().initial());
  CHECK(ef3.fisher == doctest::Approx(0.17604078349891773).epsilon(1e-10));
  CHECK(ef3.entropy == doctest::Approx(2.4882326027776127).epsilon(1e-10));
}

TEST_CASE("evaluation grid refinement does not change the answer") {
  // Same datum at a larger cutoff gets a finer grid.
  const auto a = entropy_and_fisher(project_initial(ManifoldSpec::circle(), one_mode, 4));
  const auto b = entropy_and_fisher(project_initial(ManifoldSpec::circle(), one_mode, 9));
  CHECK(a.entropy == doctest::Approx(b.entropy).epsilon(1e-12));
  CHECK(a.fisher == doctest::Approx(b.fisher).epsilon(1e-12));
}

TEST_CASE("mass and positivity guards") {
  const auto f = project_initial(ManifoldSpec::circle(), [](double x, double) { return 2.0 + std::cos(kTwoPi * x); }, 3);
  CHECK_THROWS_AS(resolve(f), std::invalid_argument);
  CHECK_NOTHROW(resolve(f.normalized()));
  CHECK(relative_entropy_density(1e-4) == doctest::Approx(1.0001 * std::log(1.0001) - 1e-4).epsilon(1e-9));
}

TEST_CASE("small-amplitude Fisher decay") {
  const auto f = project_initial(ManifoldSpec::circle(), [](double x, double) { return 1.0 + 0.01 * std::cos(kTwoPi * x); }, 3);
  const double q0 = entropy_and_fisher(f).fisher;
  const double lambda = kTwoPi * kTwoPi;
  for (double t : {0.01, 0.05, 0.1}) {
    CHECK(entropy_and_fisher(evolve(f, t)).fisher == doctest::Approx(q0 * std::exp(-lambda * t)).epsilon(0.01));
  }
}

TEST_CASE("traces: rates agree and entropy grows") {
  for (const auto& name : fixtures::names()) {
    CAPTURE(name);
    const auto fx = fixtures::by_name(name);
    const auto tr = entropy_trace(fx.initial(), fixtures::time_grid(0.01, 1.0, 8, true), fx.trace_options);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      CHECK(tr.rate_fd[i] == doctest::Approx(tr.rate_direct[i]).epsilon(1e-6));
      CHECK(tr.fisher[i] == 2.0 * tr.rate_direct[i]);
      CHECK(tr.rate_direct[i] >= 0.0);
      if (i > 0) CHECK(tr.entropy[i] >= tr.entropy[i - 1]);
    }
  }
  const auto flat = project_initial(ManifoldSpec::circle(), [](double, double) { return 1.0; }, 2);
  const auto tr = entropy_trace(flat, {0.1, 1.0});
  CHECK(std::abs(tr.rate_direct[1]) < 1e-30);
  CHECK(tr.entropy[1] <= 0.0);
  CHECK_THROWS_AS(entropy_trace(flat, {1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("drifted torus") {
  const auto fx = fixtures::torus_drift();
  CHECK(fx.manifold.ricci_lower_bound() == doctest::Approx(-0.8 * std::numbers::pi * std::numbers::pi).epsilon(1e-6));

  const auto init = fx.initial();
  CHECK(init.mass() == doctest::Approx(1.0).epsilon(1e-14));
  const auto later = evolve_drift(init, 1.0, 1e-3);
  CHECK(later.mass() == doctest::Approx(init.mass()).epsilon(1e-8));
  CHECK(entropy_and_fisher(later).entropy >= entropy_and_fisher(init).entropy);
  const double bound = drift_stability_bound(init);
  CHECK(bound > 1e-3);
  CHECK_THROWS_AS(evolve_drift(init, 1.0, 2.0 * bound), std::invalid_argument);
}

TEST_CASE("zero drift reduces to the exact flow") {
  const auto torus = ManifoldSpec::torus2();
  const auto f = project_initial(torus, [](double x, double y) { return 1.0 + 0.3 * std::cos(kTwoPi * x) * std::cos(kTwoPi * y); }, 4);
  const auto a = evolve_drift(f, 0.3, 1e-2);
  const auto b = evolve(f, 0.3);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.coefficients()[i] - b.coefficients()[i]) < 1e-14);
}

TEST_CASE("pointwise identities") {
  const auto torus = ManifoldSpec::torus2();
  const auto w = project_initial(torus, [](double x, double y) { return 2.0 + std::cos(kTwoPi * x) * std::cos(kTwoPi * y); }, 2);
  CHECK(bochner_residual(w).relative() <= 1e-8);

  const auto flat = project_initial(torus, [](double, double) { return 1.0; }, 2);
  CHECK(bochner_residual(flat).max_abs_residual == doctest::Approx(0.0));

  const auto drift = ManifoldSpec::torus2_drift({{0, 1, 0.0, 0.3}});
  const auto wd = project_initial(drift, [](double x, double) { return 2.0 + std::cos(kTwoPi * x); }, 2);
  CHECK(bochner_residual(wd).relative() <= 1e-8);
  CHECK_THROWS_AS(bochner_residual(project_initial(ManifoldSpec::circle(), one_mode, 2)), std::invalid_argument);

  CHECK(trace_inequality(w).violations == 0);
  const auto c = cauchy_step(fixtures::torus().initial());
  CHECK(c.holds());
  CHECK(c.mean_lap_log == doctest::Approx(-c.fisher).epsilon(1e-10));
}

TEST_CASE("Gauss-Legendre rule") {
  const auto [x, w] = gauss_legendre(10);
  double s = 0.0;
  double s8 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i];
    s8 += w[i] * std::pow(x[i], 8);
  }
  CHECK(s == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s8 == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}
