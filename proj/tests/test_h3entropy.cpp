#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entropyrate/h3entropy.hpp"
#include "entropyrate/quadrature.hpp"
#include "entropyrate/specfun.hpp"

using namespace entropyrate;
using namespace entropyrate::h3;

namespace {

struct Oracle {
  double kappa;
  double t;
  double entropy;
  double eta;
  double etap;
  double rate;
};

// -int h log h dV, eta, eta' and the entropy rate by 40-digit quadrature.
constexpr Oracle kOracles[] = {
    {1.0, 1.0, 5.8259625450566393, 1.1760657132668819, 3.6480132188834978, 3.1271309123720624},
    {0.5, 2.0, 6.065375944203921, 0.611845478492886, 0.86075152994826879, 1.142972097624048},
    {2.0, 0.3, 4.3473332395513229, 0.52270323600205803, 5.5978856831122683, 11.583574702091044},
};

// -int h log h dV computed straight from the kernel.
double direct_entropy(const H3Params& p, double t) {
  auto f = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double lh = log_heat_kernel(p, t, r);
    const double e = lh + log_volume_density(p.kappa, r) + std::log(4.0 * std::numbers::pi);
    return e < -745.0 ? 0.0 : -lh * std::exp(e);
  };
  return quadrature::integrate_semi_infinite(f, p.quadrature, {p.kappa * t, std::sqrt(t)}).value;
}

}  // namespace

TEST_CASE("entropy, eta and eta' match high-precision oracles") {
  for (const auto& o : kOracles) {
    const H3Params p{o.kappa};
    CAPTURE(o.kappa);
    CAPTURE(o.t);
    CHECK(eta(p, o.t).value() == doctest::Approx(o.eta).epsilon(1e-10));
    CHECK(eta_prime(p, o.t).value() == doctest::Approx(o.etap).epsilon(1e-10));
    CHECK(entropy(p, o.t) == doctest::Approx(o.entropy).epsilon(1e-11));
    CHECK(entropy_rate(p, o.t) == doctest::Approx(o.rate).epsilon(1e-10));
  }
}

TEST_CASE("decomposed entropy equals direct -int h log h") {
  // Settles the weight of I2: exp(-r^2/2t), not exp(-2 r^2/2t).
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (double t : {0.1, 1.0, 10.0}) {
      const H3Params p{kappa};
      CAPTURE(kappa);
      CAPTURE(t);
      CHECK(entropy(p, t) == doctest::Approx(direct_entropy(p, t)).epsilon(1e-10));
    }
  }
}

TEST_CASE("xi and xi' closed forms") {
  const H3Params p{1.0};
  CHECK(xi(p, 1.0).value() == doctest::Approx(std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5)));
  const double h = 1e-5;
  const double fd = (xi(p, 1.0 + h).value() - xi(p, 1.0 - h).value()) / (2.0 * h);
  CHECK(xi_prime(p, 1.0).value() == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("I1 and the heat kernel") {
  const H3Params p{1.0};
  CHECK(I1(p, 1.0) == 2.0);
  // Flat limit: h -> (2 pi t)^{-3/2} exp(-d^2/2t).
  const H3Params flat{1e-6};
  CHECK(heat_kernel(flat, 1.0, 0.7) ==
        doctest::Approx(std::pow(2.0 * std::numbers::pi, -1.5) * std::exp(-0.245)).epsilon(1e-10));
  CHECK(std::isfinite(log_heat_kernel(p, 0.01, 1e3)));
  CHECK_THROWS_AS(heat_kernel(p, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("flat-limit entropy and rate") {
  const H3Params p{0.01};
  CHECK(entropy(p, 1.0) == doctest::Approx(1.5 * std::log(2.0 * std::numbers::pi * std::exp(1.0))).epsilon(1e-3));
  CHECK(entropy_rate(p, 1.0) == doctest::Approx(1.5).epsilon(1e-2));
}

TEST_CASE("envelopes contain eta and eta'") {
  const H3Params p{1.0};
  for (double t : {0.1, 1.0, 10.0, 100.0}) {
    CAPTURE(t);
    CHECK(eta_envelope(p, t).strictly_contains(eta(p, t)));
    CHECK(eta_prime_envelope(p, t).strictly_contains(eta_prime(p, t)));
  }
  // The eta envelope width shrinks to log 2 after multiplying by xi.
  for (double kappa : {1.0, 2.0}) {
    for (double t : {50.0, 100.0}) {
      const H3Params q{kappa};
      const auto env = eta_envelope(q, t);
      CHECK(((env.upper - env.lower) * xi(q, t)).value() <= 1.05 * std::numbers::ln2);
    }
  }
}

TEST_CASE("eta' envelope brackets d/dt (xi eta) at large t") {
  const H3Params p{1.0};
  const double t = 100.0;
  const auto env = eta_prime_envelope(p, t);
  const auto xe = xi_prime(p, t) * eta(p, t);
  const double lo = (xe + xi(p, t) * env.lower).value();
  const double hi = (xe + xi(p, t) * env.upper).value();
  const double ls2 = 0.5 * std::numbers::ln2;
  CHECK(lo >= 1.0 - ls2 - 0.05);
  CHECK(hi <= 1.0 + ls2 + 0.05);
}

TEST_CASE("band and finite-difference rate") {
  for (double t : {20.0, 50.0, 100.0}) {
    const auto rec = evaluate(H3Params{1.0}, t);
    CHECK(rec.in_band(1.0));
    CHECK(rec.envelopes_hold());
    CHECK(rec.rate_fd == doctest::Approx(rec.rate_direct).epsilon(1e-6));
  }
  const auto rec = evaluate(H3Params{2.0}, 25.0);
  CHECK(rec.in_band(2.0));
  CHECK(rec.rate_direct == doctest::Approx(8.0202).epsilon(1e-4));
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(evaluate(H3Params{0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(H3Params{1.0}, -1.0), std::invalid_argument);
  H3Params tight{1.0};
  tight.quadrature.max_subdivisions = 1;
  tight.quadrature.relative_tolerance = 1e-15;
  tight.quadrature.absolute_tolerance = 1e-300;
  CHECK_THROWS_AS(eta(tight, 1.0), QuadratureFailure);
}
