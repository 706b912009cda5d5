#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "entropyrate/kernels.hpp"

using namespace entropyrate;
using namespace entropyrate::kernels;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> sample_coefficients(int dim, int cutoff) {
  std::vector<cplx> c(mode_count(dim, cutoff));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = {std::sin(1.0 + i), std::cos(3.0 * i)};
  return c;
}

}  // namespace

TEST_CASE("mode indexing") {
  CHECK(mode_count(1, 3) == 7);
  CHECK(mode_count(2, 3) == 49);
  CHECK(mode_index(1, 3, -3, 0) == 0);
  CHECK(mode_index(2, 3, 0, 0) == 24);
}

TEST_CASE("serial and OpenMP synthesis agree bit for bit") {
  const PeriodicGrid grid{2, 40, 1.0, 2.0};
  const auto c = sample_coefficients(2, 6);
  for (auto [dx, dy] : {std::pair{0, 0}, {1, 0}, {0, 2}, {1, 1}}) {
    CHECK(synthesize_periodic_serial(c, 6, grid, dx, dy) == synthesize_periodic_omp(c, 6, grid, dx, dy));
  }
}

TEST_CASE("analysis inverts synthesis for Hermitian coefficients") {
  const PeriodicGrid grid{2, 24, 1.0, 1.0};
  std::vector<cplx> c(mode_count(2, 3));
  c[mode_index(2, 3, 1, 2)] = {0.3, -0.1};
  c[mode_index(2, 3, -1, -2)] = {0.3, 0.1};
  c[mode_index(2, 3, 0, 0)] = 1.0;
  const auto v = synthesize_periodic_serial(c, 3, grid);
  const auto back = analyze_periodic_serial(v, grid, 3);
  CHECK(analyze_periodic_omp(v, grid, 3) == back);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(std::abs(back[i] - c[i]) < 1e-14);
  }
}

TEST_CASE("spectral derivative of a single mode") {
  const PeriodicGrid grid{1, 16, 1.0, 1.0};
  std::vector<cplx> c(mode_count(1, 2));
  c[mode_index(1, 2, 1, 0)] = 0.5;
  c[mode_index(1, 2, -1, 0)] = 0.5;  // cos(2 pi x)
  const auto d = synthesize_periodic_serial(c, 2, grid, 1, 0);
  for (int i = 0; i < 16; ++i) {
    const double x = i / 16.0;
    CHECK(d[static_cast<std::size_t>(i)] == doctest::Approx(-2.0 * M_PI * std::sin(2.0 * M_PI * x)));
  }
}

TEST_CASE("zonal synthesis") {
  const std::vector<double> c = {1.0, 0.0, 2.0};  // 1 + 2 P_2
  const std::vector<double> nodes = {-0.5, 0.1, 0.9};
  const auto s = synthesize_zonal_serial(c, nodes);
  const auto p = synthesize_zonal_omp(c, nodes);
  CHECK(s.value == p.value);
  CHECK(s.dtheta == p.dtheta);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes[i];
    CHECK(s.value[i] == doctest::Approx(1.0 + (3.0 * x * x - 1.0)));
    // d/dtheta P_2(cos theta) = -3 x sin(theta)
    CHECK(s.dtheta[i] == doctest::Approx(-6.0 * x * std::sqrt(1.0 - x * x)));
  }
}

TEST_CASE("h3 sweep matches in both variants") {
  const h3::H3Params p{1.0};
  const std::vector<double> times = {0.5, 2.0, 8.0};
  const auto a = h3_sweep_serial(p, times);
  const auto b = h3_sweep_omp(p, times);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].entropy == b[i].entropy);
    CHECK(a[i].rate_direct == b[i].rate_direct);
  }
  CHECK(max_threads() >= 1);
  CHECK_THROWS_AS(h3_sweep_omp(p, std::vector<double>{1.0, -1.0}), std::invalid_argument);
}
