#include "entropyrate/specfun.hpp"

#include <cmath>
#include <string>

namespace entropyrate::specfun {

double alpha(double kappa, double t) {
  if (!(kappa > 0.0) || !(t >= 0.0)) throw ContractViolation("alpha requires kappa > 0, t >= 0");
  return kSqrtHalfPi * std::erf(kappa * std::sqrt(0.5 * t));
}

bool HyperbolicMoment::supported() const {
  if (power < 0 || power > 4) return false;
  return power < 4 || kind == HyperbolicKind::sinh;
}

std::string_view HyperbolicMoment::name() const {
  static constexpr std::string_view names[] = {"r0_sinh", "r0_cosh", "r1_sinh", "r1_cosh",
                                               "r2_sinh", "r2_cosh", "r3_sinh", "r3_cosh",
                                               "r4_sinh"};
  if (!supported()) return "unsupported";
  return names[2 * power + (kind == HyperbolicKind::cosh ? 1 : 0)];
}

LogScaled hyperbolic_moment_closed_form(HyperbolicMoment m, double kappa, double t) {
  if (!m.supported()) {
    throw ContractViolation("no closed form for r^" + std::to_string(m.power) +
                            (m.kind == HyperbolicKind::sinh ? " sinh" : " cosh"));
  }
  if (!(kappa > 0.0) || !(t > 0.0)) throw ContractViolation("moment requires kappa > 0, t > 0");

  // Each identity reads  plain + growing * exp(k2t / 2);  the plain part is
  // rescaled into the mantissa.
  const double k2t = kappa * kappa * t;
  const double scale = 0.5 * k2t;
  const double a = alpha(kappa, t);
  const double sqt = std::sqrt(t);
  double plain = 0.0;
  double growing = 0.0;
  const bool is_sinh = m.kind == HyperbolicKind::sinh;
  switch (m.power) {
    case 0:
      growing = is_sinh ? sqt * a : kSqrtHalfPi * sqt;
      break;
    case 1:
      if (is_sinh) {
        growing = kSqrtHalfPi * kappa * t * sqt;
      } else {
        plain = t;
        growing = kappa * t * sqt * a;
      }
      break;
    case 2:
      if (is_sinh) {
        plain = kappa * t * t;
        growing = t * sqt * (k2t + 1.0) * a;
      } else {
        growing = kSqrtHalfPi * t * sqt * (k2t + 1.0);
      }
      break;
    case 3:
      if (is_sinh) {
        growing = kSqrtHalfPi * kappa * t * t * sqt * (k2t + 3.0);
      } else {
        plain = t * t * (k2t + 2.0);
        growing = kappa * t * t * sqt * (k2t + 3.0) * a;
      }
      break;
    case 4:
      plain = kappa * t * t * t * (k2t + 5.0);
      growing = t * t * sqt * (k2t * k2t + 6.0 * k2t + 3.0) * a;
      break;
    default:
      break;
  }
  return {growing + plain * std::exp(-scale), scale};
}

double log_sinh_ratio_series(double x) {
  // log(sinh x / x) = x^2/6 - x^4/180 + x^6/2835 - x^8/37800 + ...
  const double x2 = x * x;
  return x2 * (1.0 / 6.0 + x2 * (-1.0 / 180.0 + x2 * (1.0 / 2835.0 - x2 / 37800.0)));
}

double log_sinh_ratio_log_form(double x) {
  return x + std::log(-std::expm1(-2.0 * x) / (2.0 * x));
}

double log_sinh_ratio(double x) {
  if (!(x >= 0.0)) throw ContractViolation("log_sinh_ratio requires x >= 0");
  if (x <= kLogSinhRatioSwitch) return log_sinh_ratio_series(x);
  return log_sinh_ratio_log_form(x);
}

double log_sinh(double x) {
  if (!(x > 0.0)) throw ContractViolation("log_sinh requires x > 0");
  return std::log(x) + log_sinh_ratio(x);
}

SinhRatioBounds sinh_ratio_bounds_check(double r) {
  if (!(r > 0.0)) throw ContractViolation("sinh_ratio_bounds_check requires r > 0");
  return {1.0 / (1.0 + 2.0 * r), -std::expm1(-2.0 * r) / (2.0 * r), 1.0 / (1.0 + r)};
}

}  // namespace entropyrate::specfun
