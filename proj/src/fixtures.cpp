#include "entropyrate/fixtures.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entropyrate::fixtures {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

spectral::SpectralField Fixture::initial() const {
  return spectral::project_initial(manifold, datum, cutoff).normalized();
}

Fixture circle() {
  Fixture f{"circle", spectral::ManifoldSpec::circle(1.0),
            [](double x, double) { return 1.0 + 0.4 * std::cos(kTwoPi * x) + 0.1 * std::cos(2.0 * kTwoPi * x); },
            16, {}, {}};
  f.extrema.sup_f = 1.5;
  f.extrema.inf_f = 0.7;
  return f;
}

Fixture torus() {
  Fixture f{"torus", spectral::ManifoldSpec::torus2(1.0, 1.0),
            [](double x, double y) {
              return 1.0 + 0.3 * std::cos(kTwoPi * x) * std::cos(kTwoPi * y) +
                     0.1 * std::cos(2.0 * kTwoPi * x);
            },
            12, {}, {}};
  f.extrema.sup_f = 1.4;
  f.extrema.inf_f = 0.7875;
  return f;
}

Fixture sphere() {
  const double area = 4.0 * std::numbers::pi;
  Fixture f{"sphere", spectral::ManifoldSpec::sphere2(1.0),
            [area](double theta, double) { return (1.0 + 0.5 * std::cos(theta)) / area; }, 16, {}, {}};
  f.extrema.sup_f = 1.5 / area;
  f.extrema.inf_f = 0.5 / area;
  return f;
}

Fixture torus_drift() {
  // Extrema of the mu-density are left to the grid: normalization shifts them.
  return {"torus-drift", spectral::ManifoldSpec::torus2_drift({{1, 0, 0.0, 0.1}}, 1.0, 1.0),
          [](double x, double y) { return 1.0 + 0.3 * std::cos(kTwoPi * x) * std::cos(kTwoPi * y); },
          12, {}, {1e-3}};
}

Fixture by_name(const std::string& name) {
  if (name == "circle") return circle();
  if (name == "torus") return torus();
  if (name == "sphere") return sphere();
  if (name == "torus-drift") return torus_drift();
  throw std::invalid_argument("unknown manifold '" + name + "'");
}

std::vector<std::string> names() { return {"circle", "torus", "sphere", "torus-drift"}; }

std::vector<double> time_grid(double start, double stop, int count, bool logarithmic) {
  if (count < 1) throw std::invalid_argument("time grid needs at least one point");
  if (!(start > 0.0)) throw std::invalid_argument("time grid must start above 0");
  if (count > 1 && !(stop > start)) throw std::invalid_argument("time grid must be increasing");
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    t[static_cast<std::size_t>(i)] =
        logarithmic ? std::exp(std::log(start) + s * (std::log(stop) - std::log(start)))
                    : start + s * (stop - start);
  }
  // Pin the endpoints so they are exact.
  t.front() = start;
  if (count > 1) t.back() = stop;
  return t;
}

std::vector<double> default_trace_times() { return time_grid(0.01, 2.0, 40, true); }

}  // namespace entropyrate::fixtures
