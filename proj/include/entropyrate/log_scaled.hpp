#pragma once

#include <cmath>

namespace entropyrate {

/// A real number stored as mantissa * exp(log_scale).
///
/// Quantities that carry a factor exp(+-kappa^2 t / 2) are kept in this form
/// so that products such as xi(t) * eta(t) can be formed for large kappa^2 t
/// without materializing either factor.
struct LogScaled {
  double mantissa = 0.0;
  double log_scale = 0.0;

  constexpr LogScaled() = default;
  constexpr LogScaled(double m, double s) : mantissa(m), log_scale(s) {}

  static LogScaled from_double(double x) { return {x, 0.0}; }

  /// Plain value; overflows to +-inf when log_scale is large.
  [[nodiscard]] double value() const {
    if (mantissa == 0.0) return 0.0;
    return mantissa * std::exp(log_scale);
  }

  /// The value expressed against a different exponent: mantissa * exp(log_scale - s).
  [[nodiscard]] double mantissa_at(double s) const {
    if (mantissa == 0.0) return 0.0;
    return mantissa * std::exp(log_scale - s);
  }

  friend LogScaled operator*(const LogScaled& a, const LogScaled& b) {
    return {a.mantissa * b.mantissa, a.log_scale + b.log_scale};
  }
  friend LogScaled operator*(const LogScaled& a, double b) {
    return {a.mantissa * b, a.log_scale};
  }
  friend LogScaled operator*(double a, const LogScaled& b) { return b * a; }

  friend LogScaled operator+(const LogScaled& a, const LogScaled& b) {
    const double s = a.log_scale > b.log_scale ? a.log_scale : b.log_scale;
    return {a.mantissa_at(s) + b.mantissa_at(s), s};
  }
  friend LogScaled operator-(const LogScaled& a, const LogScaled& b) {
    return a + LogScaled{-b.mantissa, b.log_scale};
  }
  friend LogScaled operator-(const LogScaled& a) { return {-a.mantissa, a.log_scale}; }

  /// Ordering without materializing either side.
  friend bool operator<(const LogScaled& a, const LogScaled& b) {
    return (a - b).mantissa < 0.0;
  }
};

}  // namespace entropyrate
