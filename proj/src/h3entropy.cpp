#include "entropyrate/h3entropy.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

#include "entropyrate/specfun.hpp"

namespace entropyrate::h3 {

using specfun::kSqrtHalfPi;
using specfun::kSqrtTwoOverPi;

void H3Params::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("kappa must be finite and > 0");
  }
  quadrature.validate();
}

namespace {

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and > 0");
}

// int over s >= -kappa sqrt(t) of exp(-s^2/2) (1 - exp(-2 kappa r)) r^power
// log(sinh(kappa r)/(kappa r)) ds with r = kappa t + sqrt(t) s.  Multiplied by
// (sqrt(t)/2) exp(kappa^2 t / 2) this is the moment with the log weight.
double shifted_log_moment(const H3Params& p, double t, int power, const char* what) {
  const double kappa = p.kappa;
  const double center = kappa * t;
  const double width = std::sqrt(t);
  auto g = [=](double s) {
    const double r = center + width * s;
    if (r <= 0.0) return 0.0;
    const double gauss = std::exp(-0.5 * s * s);
    if (gauss == 0.0) return 0.0;
    const double kr = kappa * r;
    return gauss * -std::expm1(-2.0 * kr) * std::pow(r, power) * specfun::log_sinh_ratio(kr);
  };
  const auto res = quadrature::integrate_shifted_gaussian(g, center, width, p.quadrature);
  if (!res.converged) {
    throw QuadratureFailure(std::string(what) + " quadrature did not converge at t=" +
                            std::to_string(t) + " (error estimate " +
                            std::to_string(res.error_estimate) + ")");
  }
  return res.value;
}

}  // namespace

double log_volume_density(double kappa, double r) {
  if (r <= 0.0) return -std::numeric_limits<double>::infinity();
  return 2.0 * (specfun::log_sinh(kappa * r) - std::log(kappa));
}

double log_heat_kernel(const H3Params& p, double t, double d) {
  require_time(t);
  if (!(d >= 0.0)) throw std::invalid_argument("distance must be >= 0");
  const double kappa = p.kappa;
  return -d * d / (2.0 * t) - 1.5 * std::log(2.0 * std::numbers::pi * t) -
         specfun::log_sinh_ratio(kappa * d) - 0.5 * kappa * kappa * t;
}

double heat_kernel(const H3Params& p, double t, double d) {
  return std::exp(log_heat_kernel(p, t, d));
}

double I1(const H3Params& p, double t) {
  require_time(t);
  return 0.5 * (p.kappa * p.kappa * t + 3.0);
}

LogScaled xi(const H3Params& p, double t) {
  require_time(t);
  const double kappa = p.kappa;
  return {kSqrtTwoOverPi / (kappa * t * std::sqrt(t)), -0.5 * kappa * kappa * t};
}

LogScaled xi_prime(const H3Params& p, double t) {
  require_time(t);
  const double kappa = p.kappa;
  const double k2t = kappa * kappa * t;
  const double m = -(k2t + 3.0) / (std::sqrt(2.0 * std::numbers::pi) * kappa * t * t * std::sqrt(t));
  return {m, -0.5 * k2t};
}

LogScaled eta(const H3Params& p, double t) {
  require_time(t);
  const double q = shifted_log_moment(p, t, 1, "eta");
  return {0.5 * std::sqrt(t) * q, 0.5 * p.kappa * p.kappa * t};
}

LogScaled eta_prime(const H3Params& p, double t) {
  require_time(t);
  const double q = shifted_log_moment(p, t, 3, "eta'");
  return {0.5 * std::sqrt(t) * q / (2.0 * t * t), 0.5 * p.kappa * p.kappa * t};
}

Envelope eta_envelope(const H3Params& p, double t) {
  require_time(t);
  const double kappa = p.kappa;
  const double k2t = kappa * kappa * t;
  const double s = 0.5 * k2t;
  const double a = specfun::alpha(kappa, t);
  const double t32 = t * std::sqrt(t);

  // kappa^2 t^2 + kappa t^3/2 (kappa^2 t + 1) e^s alpha
  const LogScaled base{kappa * t32 * (k2t + 1.0) * a + kappa * kappa * t * t * std::exp(-s), s};
  const LogScaled weight{kSqrtHalfPi * kappa * t32, s};
  return {base - weight * std::log(2.0 * k2t + 4.0),
          base - weight * std::log1p(kSqrtHalfPi * k2t / a)};
}

Envelope eta_prime_envelope(const H3Params& p, double t) {
  require_time(t);
  const double kappa = p.kappa;
  const double k2t = kappa * kappa * t;
  const double s = 0.5 * k2t;
  const double decay = std::exp(-s);
  const double a = specfun::alpha(kappa, t);
  const double sqt = std::sqrt(t);
  const double quartic = k2t * k2t + 6.0 * k2t + 3.0;

  // (1/2) kappa^2 t (kappa^2 t + 5) + (1/2) kappa t^1/2 (kappa^4 t^2 + 6 kappa^2 t + 3) e^s alpha
  const LogScaled base{0.5 * kappa * sqt * quartic * a + 0.5 * k2t * (k2t + 5.0) * decay, s};
  const LogScaled weight{0.5 * kSqrtHalfPi * kappa * sqt * (k2t + 3.0), s};

  const double lower_arg = 1.0 +
                           2.0 * kappa * kSqrtTwoOverPi * sqt * (k2t + 5.0) / (k2t + 3.0) * decay +
                           2.0 * kSqrtTwoOverPi * quartic / (k2t + 3.0) * a;
  const double upper_arg =
      1.0 + kSqrtHalfPi * k2t * (k2t + 3.0) / (kappa * sqt * decay + (k2t + 1.0) * a);
  return {base - weight * std::log(lower_arg), base - weight * std::log(upper_arg)};
}

double I2(const H3Params& p, double t) { return (xi(p, t) * eta(p, t)).value(); }

double entropy(const H3Params& p, double t) {
  require_time(t);
  const double k2t = p.kappa * p.kappa * t;
  return 1.5 * std::log(2.0 * std::numbers::pi * t) + 0.5 * k2t + I1(p, t) + I2(p, t);
}

double entropy_rate(const H3Params& p, double t) {
  require_time(t);
  const double d_xi_eta =
      (xi_prime(p, t) * eta(p, t)).value() + (xi(p, t) * eta_prime(p, t)).value();
  return 1.5 / t + p.kappa * p.kappa + d_xi_eta;
}

double entropy_rate_fd(const H3Params& p, double t) {
  require_time(t);
  const double h = 1e-4 * t;
  return (entropy(p, t + h) - entropy(p, t - h)) / (2.0 * h);
}

std::pair<double, double> asymptotic_band(const H3Params& p) {
  const double k2 = p.kappa * p.kappa;
  const double log_sqrt2 = 0.5 * std::numbers::ln2;
  return {k2 * (2.0 - log_sqrt2), k2 * (2.0 + log_sqrt2)};
}

bool H3EntropyRecord::envelopes_hold() const {
  return Envelope{eta_lower, eta_upper}.strictly_contains(eta) &&
         Envelope{etap_lower, etap_upper}.strictly_contains(etap);
}

bool H3EntropyRecord::in_band(double kappa) const {
  const double slack = 0.05 * kappa * kappa;
  return rate_direct >= band_lo - slack && rate_direct <= band_hi + slack;
}

H3EntropyRecord evaluate(const H3Params& p, double t) {
  p.validate();
  require_time(t);
  H3EntropyRecord rec;
  rec.t = t;
  rec.eta = eta(p, t);
  rec.etap = eta_prime(p, t);
  const auto xi_t = xi(p, t);
  rec.I1 = I1(p, t);
  rec.I2 = (xi_t * rec.eta).value();
  rec.entropy = 1.5 * std::log(2.0 * std::numbers::pi * t) + 0.5 * p.kappa * p.kappa * t +
                rec.I1 + rec.I2;
  rec.rate_direct = 1.5 / t + p.kappa * p.kappa + (xi_prime(p, t) * rec.eta).value() +
                    (xi_t * rec.etap).value();
  rec.rate_fd = entropy_rate_fd(p, t);
  const auto env = eta_envelope(p, t);
  rec.eta_lower = env.lower;
  rec.eta_upper = env.upper;
  const auto penv = eta_prime_envelope(p, t);
  rec.etap_lower = penv.lower;
  rec.etap_upper = penv.upper;
  std::tie(rec.band_lo, rec.band_hi) = asymptotic_band(p);
  return rec;
}

}  // namespace entropyrate::h3
