#pragma once

#include <utility>

#include "entropyrate/log_scaled.hpp"
#include "entropyrate/quadrature.hpp"

namespace entropyrate::h3 {

/// Heat flow u_t = (1/2) Laplacian on hyperbolic 3-space of sectional
/// curvature -kappa^2.
struct H3Params {
  double kappa = 1.0;
  quadrature::QuadratureSpec quadrature{};

  /// Throws std::invalid_argument unless kappa > 0 and the quadrature spec is valid.
  void validate() const;
};

/// Raised when an eta / eta' quadrature does not meet its tolerance.
class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Envelope {
  LogScaled lower;
  LogScaled upper;

  [[nodiscard]] bool strictly_contains(const LogScaled& x) const {
    return lower < x && x < upper;
  }
};

/// Everything reported for one time point.
struct H3EntropyRecord {
  double t = 0.0;
  double entropy = 0.0;
  double I1 = 0.0;
  double I2 = 0.0;
  double rate_direct = 0.0;
  double rate_fd = 0.0;
  LogScaled eta;
  LogScaled eta_lower;
  LogScaled eta_upper;
  LogScaled etap;
  LogScaled etap_lower;
  LogScaled etap_upper;
  double band_lo = 0.0;
  double band_hi = 0.0;

  [[nodiscard]] bool envelopes_hold() const;
  /// Band membership with slack 0.05 kappa^2; only meaningful for t >= 20 / kappa^2.
  [[nodiscard]] bool in_band(double kappa) const;
};

/// h(t, x, y) as a function of the geodesic distance d = d(x, y).
double heat_kernel(const H3Params& p, double t, double d);
/// log h(t, d); finite for every d where h underflows.
double log_heat_kernel(const H3Params& p, double t, double d);
/// log of the radial volume density sinh(kappa r)^2 / kappa^2 (sphere area excluded).
double log_volume_density(double kappa, double r);

/// (1/2t) E[d^2] = (kappa^2 t + 3) / 2.
double I1(const H3Params& p, double t);

/// sqrt(2/pi) kappa^-1 t^-3/2 exp(-kappa^2 t / 2).
LogScaled xi(const H3Params& p, double t);
/// d xi / dt = -(kappa^2 t + 3) / (sqrt(2 pi) kappa t^5/2 exp(kappa^2 t / 2)).
LogScaled xi_prime(const H3Params& p, double t);

/// eta(t) = int_0^inf exp(-r^2/2t) r sinh(kappa r) log(sinh(kappa r) / (kappa r)) dr,
/// evaluated around r = kappa t with exp(kappa^2 t / 2) factored out.
LogScaled eta(const H3Params& p, double t);
/// Closed-form bracket of eta(t).
Envelope eta_envelope(const H3Params& p, double t);

/// eta'(t) = (1 / 2t^2) int_0^inf exp(-r^2/2t) r^3 sinh(kappa r) log(...) dr.
LogScaled eta_prime(const H3Params& p, double t);
/// Closed-form bracket of eta'(t).
Envelope eta_prime_envelope(const H3Params& p, double t);

/// I2(t) = xi(t) eta(t): the mean of log(sinh(kappa d) / (kappa d)) under h.
double I2(const H3Params& p, double t);

/// Ent(h(t, x, .)) = (3/2) log(2 pi t) + kappa^2 t / 2 + I1 + I2.
double entropy(const H3Params& p, double t);

/// 3/(2t) + kappa^2 + xi' eta + xi eta'.
double entropy_rate(const H3Params& p, double t);
/// Central difference of entropy with step 1e-4 t.
double entropy_rate_fd(const H3Params& p, double t);

/// (kappa^2 (2 - log sqrt 2), kappa^2 (2 + log sqrt 2)).
std::pair<double, double> asymptotic_band(const H3Params& p);

/// Full record for one time point.
H3EntropyRecord evaluate(const H3Params& p, double t);

}  // namespace entropyrate::h3
