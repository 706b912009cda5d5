#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entropyrate/bounds.hpp"
#include "entropyrate/spectral.hpp"

namespace entropyrate::fixtures {

/// A manifold with a smooth positive initial datum and its spectral cutoff.
struct Fixture {
  std::string name;
  spectral::ManifoldSpec manifold;
  spectral::PointFunction datum;
  int cutoff = 16;
  bounds::CheckOptions extrema;  // analytic sup / inf of the datum when known
  spectral::TraceOptions trace_options;

  /// Projected datum scaled to unit mass.
  [[nodiscard]] spectral::SpectralField initial() const;
};

/// circle of length 1, f = 1 + 0.4 cos(2 pi x) + 0.1 cos(4 pi x).
Fixture circle();
/// unit torus, f = 1 + 0.3 cos(2 pi x) cos(2 pi y) + 0.1 cos(4 pi x).
Fixture torus();
/// unit sphere, zonal f = (1 + cos(theta) / 2) / (4 pi).
Fixture sphere();
/// unit torus with V = 0.1 sin(2 pi x), f = 1 + 0.3 cos(2 pi x) cos(2 pi y)
/// normalized against mu.
Fixture torus_drift();

/// Lookup by CLI name: circle, torus, sphere, torus-drift.
Fixture by_name(const std::string& name);
std::vector<std::string> names();

/// count points from start to stop, linear or logarithmic.
std::vector<double> time_grid(double start, double stop, int count, bool logarithmic);

/// The 40-point log grid on [0.01, 2] used for manifold traces.
std::vector<double> default_trace_times();

}  // namespace entropyrate::fixtures
