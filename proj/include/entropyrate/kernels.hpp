#pragma once

// Data-parallel kernels. Every kernel has a serial reference and an OpenMP
// variant that computes each output element with the same operation order,
// so the two agree bit for bit.

#include <complex>
#include <span>
#include <vector>

#include "entropyrate/h3entropy.hpp"

namespace entropyrate::kernels {

/// Uniform grid on a 1- or 2-dimensional periodic box [0, l1) x [0, l2).
/// Values are stored row-major with the x index outermost.
struct PeriodicGrid {
  int dim = 1;
  int points = 0;  // per axis
  double l1 = 1.0;
  double l2 = 1.0;

  [[nodiscard]] std::size_t size() const {
    return dim == 1 ? static_cast<std::size_t>(points)
                    : static_cast<std::size_t>(points) * static_cast<std::size_t>(points);
  }
};

/// Number of Fourier modes with |m_i| <= cutoff.
std::size_t mode_count(int dim, int cutoff);
/// Flat position of mode (m1, m2); m2 is ignored when dim == 1.
std::size_t mode_index(int dim, int cutoff, int m1, int m2);

/// sum_m c_m (i k1)^dx (i k2)^dy exp(i k.x) on the grid, real part, with
/// k = 2 pi (m1 / l1, m2 / l2).
std::vector<double> synthesize_periodic_serial(std::span<const std::complex<double>> c,
                                               int cutoff, const PeriodicGrid& grid, int dx = 0,
                                               int dy = 0);
std::vector<double> synthesize_periodic_omp(std::span<const std::complex<double>> c, int cutoff,
                                            const PeriodicGrid& grid, int dx = 0, int dy = 0);

/// c_m = (1 / points^dim) sum_x values(x) exp(-i k.x) for |m_i| <= cutoff.
std::vector<std::complex<double>> analyze_periodic_serial(std::span<const double> values,
                                                          const PeriodicGrid& grid, int cutoff);
std::vector<std::complex<double>> analyze_periodic_omp(std::span<const double> values,
                                                       const PeriodicGrid& grid, int cutoff);

struct ZonalSample {
  std::vector<double> value;   // sum_l c_l P_l(x)
  std::vector<double> dtheta;  // sum_l c_l d/dtheta P_l(cos theta)
};

/// Legendre series and its polar-angle derivative at nodes x = cos(theta) in (-1, 1).
ZonalSample synthesize_zonal_serial(std::span<const double> c, std::span<const double> nodes);
ZonalSample synthesize_zonal_omp(std::span<const double> c, std::span<const double> nodes);

/// h3::evaluate over a time grid.
std::vector<h3::H3EntropyRecord> h3_sweep_serial(const h3::H3Params& p,
                                                 std::span<const double> times);
std::vector<h3::H3EntropyRecord> h3_sweep_omp(const h3::H3Params& p,
                                              std::span<const double> times);

/// Threads the OpenMP variants will use (1 without OpenMP).
int max_threads();

}  // namespace entropyrate::kernels
