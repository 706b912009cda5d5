#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kernels_detail.hpp"

namespace entropyrate::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<double> synthesize_periodic_omp(std::span<const std::complex<double>> c, int cutoff,
                                            const PeriodicGrid& grid, int dx, int dy) {
  if (grid.dim != 1 && grid.dim != 2) throw std::invalid_argument("periodic grid must be 1-D or 2-D");
  if (grid.points < 1) throw std::invalid_argument("periodic grid needs at least one point");
  if (cutoff < 0 || c.size() != mode_count(grid.dim, cutoff)) {
    throw std::invalid_argument("coefficient count does not match cutoff");
  }
  const detail::SynthesisPlan plan(cutoff, grid, dx, dy);
  std::vector<double> out(grid.size());
  const std::size_t stride = grid.dim == 1 ? 1 : static_cast<std::size_t>(grid.points);
  const int n = grid.points;
#pragma omp parallel for schedule(static)
  for (int i1 = 0; i1 < n; ++i1) {
    detail::synthesize_row(c, plan, i1, out.data() + static_cast<std::size_t>(i1) * stride);
  }
  return out;
}

std::vector<std::complex<double>> analyze_periodic_omp(std::span<const double> values,
                                                       const PeriodicGrid& grid, int cutoff) {
  if (values.size() != grid.size()) throw std::invalid_argument("value count does not match grid");
  if (grid.dim != 1 && grid.dim != 2) throw std::invalid_argument("periodic grid must be 1-D or 2-D");
  if (cutoff < 0) throw std::invalid_argument("cutoff must be >= 0");
  std::vector<std::complex<double>> c(mode_count(grid.dim, cutoff));
  const auto tw = detail::twiddles(grid.points);
  const std::size_t stride = grid.dim == 1 ? 1 : static_cast<std::size_t>(2 * cutoff + 1);
  const int width = 2 * cutoff + 1;
#pragma omp parallel for schedule(static)
  for (int a = 0; a < width; ++a) {
    detail::analyze_column(values, grid, cutoff, tw, a, c.data() + static_cast<std::size_t>(a) * stride);
  }
  return c;
}

ZonalSample synthesize_zonal_omp(std::span<const double> c, std::span<const double> nodes) {
  ZonalSample out{std::vector<double>(nodes.size()), std::vector<double>(nodes.size())};
  const auto n = static_cast<long long>(nodes.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    detail::zonal_point(c, nodes[k], &out.value[k], &out.dtheta[k]);
  }
  return out;
}

std::vector<h3::H3EntropyRecord> h3_sweep_omp(const h3::H3Params& p,
                                              std::span<const double> times) {
  std::vector<h3::H3EntropyRecord> out(times.size());
  std::vector<std::exception_ptr> errors(times.size());
  const auto n = static_cast<long long>(times.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = h3::evaluate(p, times[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace entropyrate::kernels
