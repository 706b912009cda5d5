#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace entropyrate::quadrature {

struct QuadratureSpec {
  double relative_tolerance = 1e-10;
  double absolute_tolerance = 1e-14;
  std::size_t max_subdivisions = 2000;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Raised when the integrand returns NaN or an infinity.
class DomainFault : public std::domain_error {
 public:
  DomainFault(double where, double what);
  double abscissa() const { return abscissa_; }

 private:
  double abscissa_;
};

/// Where the integrand's mass sits. `peak` is the location of the maximum and
/// `width` the standard deviation of its Gaussian factor.
struct IntegrandScale {
  double peak = 0.0;
  double width = 1.0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSpec& spec = {});

/// Integral of f over [0, inf).
///
/// [0, R] with R = peak + 12 width is split around the peak and refined by
/// bisection; the tail [R, inf) is mapped to [0, 1) with r = R + s / (1 - s).
/// Beyond R the integrand must decay at least like a Gaussian.
QuadratureResult integrate_semi_infinite(const Integrand& f,
                                         const QuadratureSpec& spec = {},
                                         IntegrandScale scale = {});

/// Integral of g(s) over s >= -center / scale, i.e. the part of the real line
/// where r = center + scale * s is nonnegative.
///
/// g is the integrand in the substituted variable with the dominant
/// exponential already divided out, so it peaks near s = 0 with unit width.
/// The Jacobian `scale` is not applied.
QuadratureResult integrate_shifted_gaussian(const Integrand& g, double center, double scale,
                                            const QuadratureSpec& spec = {});

}  // namespace entropyrate::quadrature
