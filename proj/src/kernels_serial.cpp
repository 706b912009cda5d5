#include <stdexcept>

#include "kernels_detail.hpp"

namespace entropyrate::kernels {

std::size_t mode_count(int dim, int cutoff) {
  const auto w = static_cast<std::size_t>(2 * cutoff + 1);
  return dim == 1 ? w : w * w;
}

std::size_t mode_index(int dim, int cutoff, int m1, int m2) {
  const auto a = static_cast<std::size_t>(m1 + cutoff);
  if (dim == 1) return a;
  return a * static_cast<std::size_t>(2 * cutoff + 1) + static_cast<std::size_t>(m2 + cutoff);
}

namespace {

void check_layout(std::size_t coefficients, int cutoff, const PeriodicGrid& grid) {
  if (grid.dim != 1 && grid.dim != 2) throw std::invalid_argument("periodic grid must be 1-D or 2-D");
  if (grid.points < 1) throw std::invalid_argument("periodic grid needs at least one point");
  if (cutoff < 0 || coefficients != mode_count(grid.dim, cutoff)) {
    throw std::invalid_argument("coefficient count does not match cutoff");
  }
}

}  // namespace

std::vector<double> synthesize_periodic_serial(std::span<const std::complex<double>> c,
                                               int cutoff, const PeriodicGrid& grid, int dx,
                                               int dy) {
  check_layout(c.size(), cutoff, grid);
  const detail::SynthesisPlan plan(cutoff, grid, dx, dy);
  std::vector<double> out(grid.size());
  const std::size_t stride = grid.dim == 1 ? 1 : static_cast<std::size_t>(grid.points);
  for (int i1 = 0; i1 < grid.points; ++i1) {
    detail::synthesize_row(c, plan, i1, out.data() + static_cast<std::size_t>(i1) * stride);
  }
  return out;
}

std::vector<std::complex<double>> analyze_periodic_serial(std::span<const double> values,
                                                          const PeriodicGrid& grid, int cutoff) {
  if (values.size() != grid.size()) throw std::invalid_argument("value count does not match grid");
  std::vector<std::complex<double>> c(mode_count(grid.dim, cutoff));
  check_layout(c.size(), cutoff, grid);
  const auto tw = detail::twiddles(grid.points);
  const std::size_t stride = grid.dim == 1 ? 1 : static_cast<std::size_t>(2 * cutoff + 1);
  for (int a = 0; a < 2 * cutoff + 1; ++a) {
    detail::analyze_column(values, grid, cutoff, tw, a, c.data() + static_cast<std::size_t>(a) * stride);
  }
  return c;
}

ZonalSample synthesize_zonal_serial(std::span<const double> c, std::span<const double> nodes) {
  ZonalSample out{std::vector<double>(nodes.size()), std::vector<double>(nodes.size())};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    detail::zonal_point(c, nodes[i], &out.value[i], &out.dtheta[i]);
  }
  return out;
}

std::vector<h3::H3EntropyRecord> h3_sweep_serial(const h3::H3Params& p,
                                                 std::span<const double> times) {
  std::vector<h3::H3EntropyRecord> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(h3::evaluate(p, t));
  return out;
}

}  // namespace entropyrate::kernels
