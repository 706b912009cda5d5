#pragma once

// Per-element bodies shared by the serial and OpenMP kernels.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "entropyrate/kernels.hpp"

namespace entropyrate::kernels::detail {

using cplx = std::complex<double>;

// exp(2 pi i j / n) for j in [0, n).
inline std::vector<cplx> twiddles(int n) {
  std::vector<cplx> tw(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    tw[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
  }
  return tw;
}

inline std::size_t wrap(long long m, long long j, long long n) {
  return static_cast<std::size_t>(((m * j) % n + n) % n);
}

// (i k)^order with k = 2 pi m / length.
inline cplx derivative_factor(int m, double length, int order) {
  const double k = 2.0 * std::numbers::pi * m / length;
  cplx f{1.0, 0.0};
  for (int o = 0; o < order; ++o) f *= cplx{0.0, k};
  return f;
}

struct SynthesisPlan {
  int cutoff;
  int width;  // 2 cutoff + 1
  PeriodicGrid grid;
  std::vector<cplx> tw;
  std::vector<cplx> f1;  // derivative factors along x
  std::vector<cplx> f2;  // along y

  SynthesisPlan(int cutoff_, const PeriodicGrid& g, int dx, int dy)
      : cutoff(cutoff_), width(2 * cutoff_ + 1), grid(g), tw(twiddles(g.points)) {
    f1.reserve(static_cast<std::size_t>(width));
    f2.reserve(static_cast<std::size_t>(width));
    for (int m = -cutoff; m <= cutoff; ++m) {
      f1.push_back(derivative_factor(m, g.l1, dx));
      f2.push_back(derivative_factor(m, g.l2, dy));
    }
  }
};

// Fills the row of output values with x index i1.
inline void synthesize_row(std::span<const cplx> c, const SynthesisPlan& plan, int i1,
                           double* out) {
  const int n = plan.grid.points;
  const int K = plan.cutoff;
  if (plan.grid.dim == 1) {
    cplx acc{0.0, 0.0};
    for (int a = 0; a < plan.width; ++a) {
      const int m = a - K;
      acc += c[static_cast<std::size_t>(a)] * plan.f1[static_cast<std::size_t>(a)] *
             plan.tw[wrap(m, i1, n)];
    }
    out[0] = acc.real();
    return;
  }
  std::vector<cplx> partial(static_cast<std::size_t>(plan.width));
  for (int b = 0; b < plan.width; ++b) {
    cplx acc{0.0, 0.0};
    for (int a = 0; a < plan.width; ++a) {
      const int m1 = a - K;
      acc += c[static_cast<std::size_t>(a * plan.width + b)] *
             plan.f1[static_cast<std::size_t>(a)] * plan.tw[wrap(m1, i1, n)];
    }
    partial[static_cast<std::size_t>(b)] = acc * plan.f2[static_cast<std::size_t>(b)];
  }
  for (int i2 = 0; i2 < n; ++i2) {
    cplx acc{0.0, 0.0};
    for (int b = 0; b < plan.width; ++b) {
      acc += partial[static_cast<std::size_t>(b)] * plan.tw[wrap(b - K, i2, n)];
    }
    out[i2] = acc.real();
  }
}

// Coefficients for a fixed m1 (index a); dim 2 fills the whole m2 column.
inline void analyze_column(std::span<const double> values, const PeriodicGrid& grid, int cutoff,
                           const std::vector<cplx>& tw, int a, cplx* out) {
  const int n = grid.points;
  const int width = 2 * cutoff + 1;
  const int m1 = a - cutoff;
  if (grid.dim == 1) {
    cplx acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) acc += values[static_cast<std::size_t>(i)] * std::conj(tw[wrap(m1, i, n)]);
    out[0] = acc / static_cast<double>(n);
    return;
  }
  // Transform along x first for this m1, then along y for every m2.
  std::vector<cplx> row(static_cast<std::size_t>(n));
  for (int i2 = 0; i2 < n; ++i2) {
    cplx acc{0.0, 0.0};
    for (int i1 = 0; i1 < n; ++i1) {
      acc += values[static_cast<std::size_t>(i1) * static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(i2)] *
             std::conj(tw[wrap(m1, i1, n)]);
    }
    row[static_cast<std::size_t>(i2)] = acc;
  }
  const double norm = static_cast<double>(n) * static_cast<double>(n);
  for (int b = 0; b < width; ++b) {
    const int m2 = b - cutoff;
    cplx acc{0.0, 0.0};
    for (int i2 = 0; i2 < n; ++i2) acc += row[static_cast<std::size_t>(i2)] * std::conj(tw[wrap(m2, i2, n)]);
    out[b] = acc / norm;
  }
}

// Legendre series value and polar derivative at one node.
inline void zonal_point(std::span<const double> c, double x, double* value, double* dtheta) {
  const double sin_theta = std::sqrt((1.0 - x) * (1.0 + x));
  double p_prev = 0.0;  // P_{l-1}
  double p = 1.0;       // P_l
  double v = 0.0;
  double d = 0.0;
  for (std::size_t l = 0; l < c.size(); ++l) {
    v += c[l] * p;
    if (l > 0) {
      // d/dtheta P_l(cos theta) = -l (P_{l-1} - x P_l) / sin(theta)
      d += c[l] * (-static_cast<double>(l) * (p_prev - x * p) / sin_theta);
    }
    const double next = ((2.0 * l + 1.0) * x * p - static_cast<double>(l) * p_prev) / (l + 1.0);
    p_prev = p;
    p = next;
  }
  *value = v;
  *dtheta = d;
}

}  // namespace entropyrate::kernels::detail
