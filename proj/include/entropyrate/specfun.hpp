#pragma once

#include <stdexcept>
#include <string_view>

#include "entropyrate/log_scaled.hpp"

namespace entropyrate::specfun {

inline constexpr double kSqrtHalfPi = 1.2533141373155002512078826;  // sqrt(pi/2)
inline constexpr double kSqrtTwoOverPi = 0.7978845608028653558798921;  // sqrt(2/pi)

/// Thrown when an argument combination is outside an operation's contract.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// alpha(t) = integral of exp(-r^2/2) over [0, kappa sqrt(t)]
///          = sqrt(pi/2) erf(kappa sqrt(t/2)).
double alpha(double kappa, double t);

enum class HyperbolicKind { sinh, cosh };

/// One of the Gaussian-weighted hyperbolic moments
///   integral over [0, inf) of exp(-r^2/2t) r^m {sinh|cosh}(kappa r) dr
/// for m in 0..3 and (m = 4, sinh).
struct HyperbolicMoment {
  int power = 0;
  HyperbolicKind kind = HyperbolicKind::sinh;

  [[nodiscard]] bool supported() const;
  [[nodiscard]] std::string_view name() const;
};

/// All nine supported moments, sinh before cosh within each power.
inline constexpr HyperbolicMoment kAllMoments[] = {
    {0, HyperbolicKind::sinh}, {0, HyperbolicKind::cosh}, {1, HyperbolicKind::sinh},
    {1, HyperbolicKind::cosh}, {2, HyperbolicKind::sinh}, {2, HyperbolicKind::cosh},
    {3, HyperbolicKind::sinh}, {3, HyperbolicKind::cosh}, {4, HyperbolicKind::sinh}};

/// Closed form of the moment, with exp(kappa^2 t / 2) kept in the exponent.
/// Throws ContractViolation for an unsupported (power, kind) pair.
LogScaled hyperbolic_moment_closed_form(HyperbolicMoment m, double kappa, double t);

/// log(sinh(x) / x) for x >= 0, without overflow for large x.
double log_sinh_ratio(double x);

/// Branch switch of log_sinh_ratio.
inline constexpr double kLogSinhRatioSwitch = 1e-2;

/// Series branch of log_sinh_ratio, exposed for the branch-agreement test.
double log_sinh_ratio_series(double x);
/// Logarithmic branch of log_sinh_ratio, exposed for the branch-agreement test.
double log_sinh_ratio_log_form(double x);

/// log(sinh x) for x > 0, without overflow.
double log_sinh(double x);

struct SinhRatioBounds {
  double lower;  // 1 / (1 + 2r)
  double mid;    // (1 - exp(-2r)) / (2r)
  double upper;  // 1 / (1 + r)

  [[nodiscard]] bool strictly_ordered() const { return lower < mid && mid < upper; }
};

SinhRatioBounds sinh_ratio_bounds_check(double r);

}  // namespace entropyrate::specfun
