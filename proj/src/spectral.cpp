#include "entropyrate/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "entropyrate/kernels.hpp"

namespace entropyrate::spectral {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// TrigPolynomial

TrigPolynomial::TrigPolynomial(std::vector<TrigTerm> terms, double l1, double l2)
    : terms_(std::move(terms)), l1_(l1), l2_(l2) {
  if (!(l1 > 0.0) || !(l2 > 0.0)) throw std::invalid_argument("box lengths must be > 0");
}

namespace {

struct Phase {
  double k1;
  double k2;
  double c;  // cos
  double s;  // sin
};

Phase phase(const TrigTerm& term, double l1, double l2, double x, double y) {
  const double k1 = kTwoPi * term.m1 / l1;
  const double k2 = kTwoPi * term.m2 / l2;
  const double theta = k1 * x + k2 * y;
  return {k1, k2, std::cos(theta), std::sin(theta)};
}

}  // namespace

double TrigPolynomial::value(double x, double y) const {
  double v = 0.0;
  for (const auto& term : terms_) {
    const auto p = phase(term, l1_, l2_, x, y);
    v += term.cos_coef * p.c + term.sin_coef * p.s;
  }
  return v;
}

std::array<double, 2> TrigPolynomial::gradient(double x, double y) const {
  std::array<double, 2> g{0.0, 0.0};
  for (const auto& term : terms_) {
    const auto p = phase(term, l1_, l2_, x, y);
    const double d = -term.cos_coef * p.s + term.sin_coef * p.c;
    g[0] += p.k1 * d;
    g[1] += p.k2 * d;
  }
  return g;
}

std::array<double, 3> TrigPolynomial::hessian(double x, double y) const {
  std::array<double, 3> h{0.0, 0.0, 0.0};
  for (const auto& term : terms_) {
    const auto p = phase(term, l1_, l2_, x, y);
    const double v = term.cos_coef * p.c + term.sin_coef * p.s;
    h[0] -= p.k1 * p.k1 * v;
    h[1] -= p.k1 * p.k2 * v;
    h[2] -= p.k2 * p.k2 * v;
  }
  return h;
}

int TrigPolynomial::degree() const {
  int d = 0;
  for (const auto& term : terms_) d = std::max({d, std::abs(term.m1), std::abs(term.m2)});
  return d;
}

std::vector<cplx> TrigPolynomial::fourier(int dim, int cutoff) const {
  std::vector<cplx> c(kernels::mode_count(dim, cutoff));
  for (const auto& term : terms_) {
    if (std::abs(term.m1) > cutoff || std::abs(term.m2) > cutoff || (dim == 1 && term.m2 != 0)) {
      throw std::invalid_argument("trigonometric term outside the requested cutoff");
    }
    if (term.m1 == 0 && term.m2 == 0) {
      c[kernels::mode_index(dim, cutoff, 0, 0)] += term.cos_coef;
      continue;
    }
    // a cos + b sin = (a - ib)/2 e^{i theta} + (a + ib)/2 e^{-i theta}
    c[kernels::mode_index(dim, cutoff, term.m1, term.m2)] += cplx{0.5 * term.cos_coef, -0.5 * term.sin_coef};
    c[kernels::mode_index(dim, cutoff, -term.m1, -term.m2)] += cplx{0.5 * term.cos_coef, 0.5 * term.sin_coef};
  }
  return c;
}

// ---------------------------------------------------------------------------
// ManifoldSpec

ManifoldSpec ManifoldSpec::circle(double length) {
  if (!(length > 0.0)) throw std::invalid_argument("circle length must be > 0");
  ManifoldSpec m;
  m.kind_ = ManifoldKind::circle;
  m.dimension_ = 1;
  m.ricci_lower_bound_ = 0.0;
  m.l1_ = length;
  m.volume_ = length;
  return m;
}

ManifoldSpec ManifoldSpec::torus2(double l1, double l2) {
  if (!(l1 > 0.0) || !(l2 > 0.0)) throw std::invalid_argument("torus lengths must be > 0");
  ManifoldSpec m;
  m.kind_ = ManifoldKind::torus2;
  m.dimension_ = 2;
  m.ricci_lower_bound_ = 0.0;
  m.l1_ = l1;
  m.l2_ = l2;
  m.volume_ = l1 * l2;
  return m;
}

ManifoldSpec ManifoldSpec::sphere2(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be > 0");
  ManifoldSpec m;
  m.kind_ = ManifoldKind::sphere2;
  m.dimension_ = 2;
  m.radius_ = radius;
  m.ricci_lower_bound_ = 1.0 / (radius * radius);  // (n - 1) / R^2 with n = 2
  m.volume_ = 4.0 * std::numbers::pi * radius * radius;
  return m;
}

ManifoldSpec ManifoldSpec::torus2_drift(std::vector<TrigTerm> potential, double l1, double l2) {
  ManifoldSpec m = torus2(l1, l2);
  m.kind_ = ManifoldKind::torus2_drift;
  m.potential_ = TrigPolynomial(std::move(potential), l1, l2);

  constexpr int kHessianGrid = 256;
  double largest = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kHessianGrid; ++i) {
    for (int j = 0; j < kHessianGrid; ++j) {
      const auto h = m.potential_.hessian(l1 * i / kHessianGrid, l2 * j / kHessianGrid);
      const double mean = 0.5 * (h[0] + h[2]);
      const double radius = std::hypot(0.5 * (h[0] - h[2]), h[1]);
      largest = std::max(largest, mean + radius);
    }
  }
  m.ricci_lower_bound_ = -2.0 * largest;  // Ric = 0 on the flat torus
  return m;
}

double ManifoldSpec::spectral_gap() const {
  switch (kind_) {
    case ManifoldKind::circle:
      return std::pow(kTwoPi / l1_, 2);
    case ManifoldKind::sphere2:
      return 2.0 / (radius_ * radius_);
    default:
      return std::pow(kTwoPi / std::max(l1_, l2_), 2);
  }
}

std::string_view ManifoldSpec::name() const {
  switch (kind_) {
    case ManifoldKind::circle:
      return "circle";
    case ManifoldKind::torus2:
      return "torus";
    case ManifoldKind::sphere2:
      return "sphere";
    case ManifoldKind::torus2_drift:
      return "torus-drift";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Grids and helpers

namespace {

kernels::PeriodicGrid periodic_grid(const ManifoldSpec& m, int points) {
  return {m.dimension(), points, m.length(0), m.length(1)};
}

double zonal_norm(int l, double radius) {
  return std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi * radius * radius));
}

std::vector<double> grid_coordinates(int points, double length) {
  std::vector<double> x(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) x[static_cast<std::size_t>(i)] = length * i / points;
  return x;
}

// Sphere evaluation nodes, cached per size.
struct ZonalNodes {
  std::vector<double> x;
  std::vector<double> w;
};

ZonalNodes zonal_nodes(int n) {
  auto [x, w] = gauss_legendre(n);
  return {std::move(x), std::move(w)};
}

// Real Legendre-series coefficients c_l * norm_l * scale for l in [first, K].
std::vector<double> zonal_series(const SpectralField& f, double scale, int first) {
  std::vector<double> c(f.size(), 0.0);
  for (std::size_t l = static_cast<std::size_t>(first); l < f.size(); ++l) {
    c[l] = f.coefficients()[l].real() * zonal_norm(static_cast<int>(l), f.manifold().radius()) * scale;
  }
  return c;
}

std::vector<double> drift_weights(const ManifoldSpec& m, int points) {
  const auto xs = grid_coordinates(points, m.length(0));
  const auto ys = grid_coordinates(points, m.length(1));
  std::vector<double> w(static_cast<std::size_t>(points) * static_cast<std::size_t>(points));
  double total = 0.0;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      const double v = std::exp(2.0 * m.potential().value(xs[static_cast<std::size_t>(i)],
                                                          ys[static_cast<std::size_t>(j)]));
      w[static_cast<std::size_t>(i * points + j)] = v;
      total += v;
    }
  }
  for (auto& v : w) v /= total;
  return w;
}

// u on the evaluation grid.
std::vector<double> sample_density(const SpectralField& f) {
  const auto& m = f.manifold();
  const int n = evaluation_points(m, f.cutoff());
  if (m.periodic()) {
    std::vector<cplx> c(f.coefficients());
    const double s = 1.0 / std::sqrt(m.volume());
    for (auto& v : c) v *= s;
    return kernels::synthesize_periodic_omp(c, f.cutoff(), periodic_grid(m, n));
  }
  const auto nodes = zonal_nodes(n);
  return kernels::synthesize_zonal_omp(zonal_series(f, 1.0, 0), nodes.x).value;
}

std::vector<double> nu_weights(const ManifoldSpec& m, int n) {
  if (m.drifted()) return drift_weights(m, n);
  if (m.periodic()) {
    const auto size = m.dimension() == 1 ? static_cast<std::size_t>(n)
                                         : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    return std::vector<double>(size, 1.0 / static_cast<double>(size));
  }
  auto nodes = zonal_nodes(n);
  for (auto& w : nodes.w) w *= 0.5;
  return nodes.w;
}

}  // namespace

int evaluation_points(const ManifoldSpec& m, int cutoff) {
  return m.periodic() ? 4 * (2 * cutoff + 1) : 4 * (cutoff + 1);
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre needs n >= 1");
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = z;
        p0 = 1.0;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (z * p1 - p0) / (z * z - 1.0);
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    // Ascending order in x.
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = weight;
    w[static_cast<std::size_t>(n - 1 - i)] = weight;
  }
  return {x, w};
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(ManifoldSpec manifold, int cutoff, std::vector<cplx> coefficients)
    : manifold_(std::move(manifold)), cutoff_(cutoff), coefficients_(std::move(coefficients)) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be >= 0");
  const std::size_t expected = manifold_.periodic()
                                   ? kernels::mode_count(manifold_.dimension(), cutoff)
                                   : static_cast<std::size_t>(cutoff + 1);
  if (coefficients_.size() != expected) {
    throw std::invalid_argument("expected " + std::to_string(expected) + " coefficients, got " +
                                std::to_string(coefficients_.size()));
  }
}

std::pair<int, int> SpectralField::mode(std::size_t index) const {
  if (!manifold_.periodic()) return {static_cast<int>(index), 0};
  if (manifold_.dimension() == 1) return {static_cast<int>(index) - cutoff_, 0};
  const auto width = static_cast<std::size_t>(2 * cutoff_ + 1);
  return {static_cast<int>(index / width) - cutoff_, static_cast<int>(index % width) - cutoff_};
}

double SpectralField::eigenvalue(std::size_t index) const {
  const auto [a, b] = mode(index);
  if (!manifold_.periodic()) {
    const double r = manifold_.radius();
    return a * (a + 1.0) / (r * r);
  }
  const double k1 = kTwoPi * a / manifold_.length(0);
  const double k2 = kTwoPi * b / manifold_.length(1);
  return k1 * k1 + k2 * k2;
}

cplx SpectralField::coefficient(int m1, int m2) const {
  if (!manifold_.periodic()) {
    if (m1 < 0 || m1 > cutoff_) return {};
    return coefficients_[static_cast<std::size_t>(m1)];
  }
  if (std::abs(m1) > cutoff_ || std::abs(m2) > cutoff_) return {};
  return coefficients_[kernels::mode_index(manifold_.dimension(), cutoff_, m1, m2)];
}

double SpectralField::mass() const {
  if (!manifold_.drifted()) return coefficient(0, 0).real() * std::sqrt(manifold_.volume());
  const int n = evaluation_points(manifold_, cutoff_);
  const auto u = sample_density(*this);
  const auto w = drift_weights(manifold_, n);
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) total += w[i] * u[i];
  return total;
}

SpectralField SpectralField::normalized() const {
  const double m = mass();
  if (!(m > 0.0)) throw std::invalid_argument("cannot normalize a field with nonpositive mass");
  auto c = coefficients_;
  for (auto& v : c) v /= m;
  return {manifold_, cutoff_, std::move(c)};
}

double SpectralField::laplacian_norm() const {
  double s = 0.0;
  for (std::size_t j = 0; j < coefficients_.size(); ++j) {
    const double lam = eigenvalue(j);
    s += lam * lam * std::norm(coefficients_[j]);
  }
  return std::sqrt(s);
}

double SpectralField::value_at(double x, double y) const {
  if (!manifold_.periodic()) {
    const double node[] = {std::cos(x)};
    return kernels::synthesize_zonal_serial(zonal_series(*this, 1.0, 0), node).value[0];
  }
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < coefficients_.size(); ++j) {
    const auto [a, b] = mode(j);
    const double theta = kTwoPi * (a * x / manifold_.length(0) + b * y / manifold_.length(1));
    acc += coefficients_[j] * std::polar(1.0, theta);
  }
  return acc.real() / std::sqrt(manifold_.volume());
}

// ---------------------------------------------------------------------------
// Resolution on the evaluation grid

double relative_entropy_density(double w) {
  if (std::abs(w) < 1e-3) {
    // sum_{n >= 2} (-1)^n w^n / (n (n - 1))
    return w * w * (0.5 + w * (-1.0 / 6.0 + w * (1.0 / 12.0 + w * (-1.0 / 20.0 + w * (1.0 / 30.0 - w / 42.0)))));
  }
  return (1.0 + w) * std::log1p(w) - w;
}

ResolvedField resolve(const SpectralField& field) {
  const auto& m = field.manifold();
  const double mass = field.mass();
  if (std::abs(mass - 1.0) > 1e-10) {
    throw std::invalid_argument("field must have unit mass, got " + std::to_string(mass));
  }
  const int n = evaluation_points(m, field.cutoff());
  ResolvedField r;
  r.weights = nu_weights(m, n);

  if (m.periodic()) {
    const auto grid = periodic_grid(m, n);
    // v = vol * u on undrifted boxes, v = u when drifted.
    const double scale = m.drifted() ? 1.0 / std::sqrt(m.volume()) : std::sqrt(m.volume());
    std::vector<cplx> c(field.coefficients());
    for (auto& v : c) v *= scale;
    c[kernels::mode_index(m.dimension(), field.cutoff(), 0, 0)] = 0.0;
    std::vector<cplx> lap(c);
    for (std::size_t j = 0; j < lap.size(); ++j) lap[j] *= -field.eigenvalue(j);

    r.deviation = kernels::synthesize_periodic_omp(c, field.cutoff(), grid);
    r.laplacian = kernels::synthesize_periodic_omp(lap, field.cutoff(), grid);
    const auto gx = kernels::synthesize_periodic_omp(c, field.cutoff(), grid, 1, 0);
    r.grad_sq.resize(gx.size());
    for (std::size_t i = 0; i < gx.size(); ++i) r.grad_sq[i] = gx[i] * gx[i];
    if (m.dimension() == 2) {
      const auto gy = kernels::synthesize_periodic_omp(c, field.cutoff(), grid, 0, 1);
      for (std::size_t i = 0; i < gy.size(); ++i) r.grad_sq[i] += gy[i] * gy[i];
    }
    if (m.drifted()) {
      // The constant mode is fixed by int v dmu = 1.
      double mean = 0.0;
      for (std::size_t i = 0; i < r.deviation.size(); ++i) mean += r.weights[i] * r.deviation[i];
      for (auto& v : r.deviation) v -= mean;
      r.log_volume = 0.0;
      r.density_scale = 1.0;
    } else {
      r.log_volume = std::log(m.volume());
      r.density_scale = m.volume();
    }
  } else {
    const auto nodes = zonal_nodes(n);
    const double vol = m.volume();
    const auto c = zonal_series(field, vol, 1);
    std::vector<double> lap(c);
    for (std::size_t l = 0; l < lap.size(); ++l) lap[l] *= -field.eigenvalue(l);
    auto sample = kernels::synthesize_zonal_omp(c, nodes.x);
    r.deviation = std::move(sample.value);
    r.grad_sq.resize(sample.dtheta.size());
    const double r2 = m.radius() * m.radius();
    for (std::size_t i = 0; i < r.grad_sq.size(); ++i) r.grad_sq[i] = sample.dtheta[i] * sample.dtheta[i] / r2;
    r.laplacian = kernels::synthesize_zonal_omp(lap, nodes.x).value;
    r.log_volume = std::log(vol);
    r.density_scale = vol;
  }

  const auto [lo, hi] = std::minmax_element(r.deviation.begin(), r.deviation.end());
  r.min_density = (1.0 + *lo) / r.density_scale;
  r.max_density = (1.0 + *hi) / r.density_scale;
  if (!(r.min_density > kPositivityFloor)) {
    throw PositivityError("resolved density minimum " + std::to_string(r.min_density) +
                          " is below the positivity floor");
  }
  return r;
}

EntropyAndFisher entropy_and_fisher(const SpectralField& field) {
  const auto r = resolve(field);
  double deficit = 0.0;
  double fisher = 0.0;
  for (std::size_t i = 0; i < r.weights.size(); ++i) {
    deficit += r.weights[i] * relative_entropy_density(r.deviation[i]);
    fisher += r.weights[i] * r.grad_sq[i] / (1.0 + r.deviation[i]);
  }
  return {r.log_volume - deficit, fisher, deficit};
}

Extrema grid_extrema(const SpectralField& field) {
  const auto u = sample_density(field);
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  return {*lo, *hi};
}

// ---------------------------------------------------------------------------
// Projection and exact evolution

SpectralField project_initial(const ManifoldSpec& m, const PointFunction& f, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be >= 0");
  // Sample on twice the evaluation grid and resolve every mode below its
  // Nyquist limit, so the tail estimate sees content up to about 8K.
  const int n = 2 * evaluation_points(m, cutoff);
  const int wide = m.periodic() ? n / 2 - 1 : 8 * cutoff + 4;
  std::vector<cplx> full;
  if (m.periodic()) {
    const auto grid = periodic_grid(m, n);
    const auto xs = grid_coordinates(n, m.length(0));
    const auto ys = grid_coordinates(n, m.length(1));
    std::vector<double> values(grid.size());
    for (int i = 0; i < n; ++i) {
      if (m.dimension() == 1) {
        values[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)], 0.0);
        continue;
      }
      for (int j = 0; j < n; ++j) {
        values[static_cast<std::size_t>(i * n + j)] =
            f(xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)]);
      }
    }
    full = kernels::analyze_periodic_omp(values, grid, wide);
    const double s = std::sqrt(m.volume());
    for (auto& v : full) v *= s;
  } else {
    // Enough nodes to integrate f P_l exactly for l <= wide and moderate-degree f.
    const auto nodes = zonal_nodes(2 * (wide + 1));
    const double r2 = m.radius() * m.radius();
    full.assign(static_cast<std::size_t>(wide + 1), 0.0);
    for (std::size_t i = 0; i < nodes.x.size(); ++i) {
      const double x = nodes.x[i];
      const double fw = 2.0 * std::numbers::pi * r2 * nodes.w[i] * f(std::acos(x), 0.0);
      double p_prev = 0.0;
      double p = 1.0;
      for (int l = 0; l <= wide; ++l) {
        full[static_cast<std::size_t>(l)] += fw * zonal_norm(l, m.radius()) * p;
        const double next = ((2.0 * l + 1.0) * x * p - l * p_prev) / (l + 1.0);
        p_prev = p;
        p = next;
      }
    }
  }

  // Split into the kept modes and the tail K < |m| <= wide.
  std::vector<cplx> kept;
  double tail = 0.0;
  double total = 0.0;
  if (m.periodic()) {
    kept.resize(kernels::mode_count(m.dimension(), cutoff));
    const int d2 = m.dimension() == 2 ? wide : 0;
    for (int a = -wide; a <= wide; ++a) {
      for (int b = -d2; b <= d2; ++b) {
        const cplx v = full[kernels::mode_index(m.dimension(), wide, a, b)];
        total += std::norm(v);
        if (std::abs(a) <= cutoff && std::abs(b) <= cutoff) {
          kept[kernels::mode_index(m.dimension(), cutoff, a, b)] = v;
        } else {
          tail += std::norm(v);
        }
      }
    }
  } else {
    for (int l = 0; l <= wide; ++l) {
      const cplx v = full[static_cast<std::size_t>(l)];
      total += std::norm(v);
      if (l <= cutoff) {
        kept.push_back(v);
      } else {
        tail += std::norm(v);
      }
    }
  }
  if (tail > 1e-20 * total) {
    throw TruncationError("cutoff " + std::to_string(cutoff) + " leaves tail energy " +
                          std::to_string(tail / total) + " of the total");
  }

  SpectralField field(m, cutoff, std::move(kept));
  const auto ext = grid_extrema(field);
  if (!(ext.inf > kPositivityFloor)) {
    throw TruncationError("resolved projection has minimum " + std::to_string(ext.inf) +
                          "; the datum must be strictly positive");
  }
  return field;
}

SpectralField evolve(const SpectralField& field, double t) {
  if (field.manifold().drifted()) {
    throw std::invalid_argument("evolve is exact only without drift; use evolve_drift");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("evolution time must be >= 0");
  auto c = field.coefficients();
  for (std::size_t j = 0; j < c.size(); ++j) c[j] *= std::exp(-0.5 * field.eigenvalue(j) * t);
  return {field.manifold(), field.cutoff(), std::move(c)};
}

// ---------------------------------------------------------------------------
// Drifted evolution

namespace {

struct DriftMode {
  int p1;
  int p2;
  cplx coef;  // V_p
  double k1;
  double k2;
};

std::vector<DriftMode> drift_modes(const ManifoldSpec& m) {
  std::vector<DriftMode> out;
  const auto& v = m.potential();
  const int kv = v.degree();
  if (v.terms().empty()) return out;
  const auto c = v.fourier(m.dimension(), kv);
  const int d2 = m.dimension() == 2 ? kv : 0;
  for (int a = -kv; a <= kv; ++a) {
    for (int b = -d2; b <= d2; ++b) {
      const cplx vp = c[kernels::mode_index(m.dimension(), kv, a, b)];
      if (vp == cplx{} || (a == 0 && b == 0)) continue;
      out.push_back({a, b, vp, kTwoPi * a / m.length(0), kTwoPi * b / m.length(1)});
    }
  }
  return out;
}

// grad V . grad u projected onto |m| <= out_cutoff.
std::vector<cplx> drift_coupling(const ManifoldSpec& m, const std::vector<DriftMode>& modes,
                                 const std::vector<cplx>& c, int cutoff, int out_cutoff) {
  const int dim = m.dimension();
  std::vector<cplx> out(kernels::mode_count(dim, out_cutoff));
  const int d2 = dim == 2 ? cutoff : 0;
  for (int a = -cutoff; a <= cutoff; ++a) {
    for (int b = -d2; b <= d2; ++b) {
      const cplx cq = c[kernels::mode_index(dim, cutoff, a, b)];
      if (cq == cplx{}) continue;
      const double q1 = kTwoPi * a / m.length(0);
      const double q2 = kTwoPi * b / m.length(1);
      for (const auto& p : modes) {
        const int s1 = a + p.p1;
        const int s2 = b + p.p2;
        if (std::abs(s1) > out_cutoff || std::abs(s2) > out_cutoff) continue;
        out[kernels::mode_index(dim, out_cutoff, s1, s2)] -= p.coef * cq * (p.k1 * q1 + p.k2 * q2);
      }
    }
  }
  return out;
}

void require_periodic(const SpectralField& f, const char* what) {
  if (!f.manifold().periodic()) throw std::invalid_argument(std::string(what) + " needs a periodic manifold");
}

}  // namespace

SpectralField apply_generator(const SpectralField& field, bool extend) {
  const auto& m = field.manifold();
  if (!m.periodic()) {
    auto c = field.coefficients();
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= -0.5 * field.eigenvalue(j);
    return {m, field.cutoff(), std::move(c)};
  }
  const int K = field.cutoff();
  const int out_cutoff = extend ? K + m.potential().degree() : K;
  const auto modes = drift_modes(m);
  auto out = drift_coupling(m, modes, field.coefficients(), K, out_cutoff);
  const int d2 = m.dimension() == 2 ? K : 0;
  for (int a = -K; a <= K; ++a) {
    for (int b = -d2; b <= d2; ++b) {
      const auto j = kernels::mode_index(m.dimension(), K, a, b);
      out[kernels::mode_index(m.dimension(), out_cutoff, a, b)] +=
          -0.5 * field.eigenvalue(j) * field.coefficients()[j];
    }
  }
  return {m, out_cutoff, std::move(out)};
}

double drift_stability_bound(const SpectralField& field) {
  require_periodic(field, "drift_stability_bound");
  const auto modes = drift_modes(field.manifold());
  double spread = 0.0;
  for (const auto& p : modes) spread += std::abs(p.coef) * std::hypot(p.k1, p.k2);
  if (spread == 0.0) return std::numeric_limits<double>::infinity();
  double kmax = 0.0;
  for (std::size_t j = 0; j < field.size(); ++j) kmax = std::max(kmax, std::sqrt(field.eigenvalue(j)));
  // Classical RK4 is stable on the imaginary axis up to 2 sqrt(2).
  return 2.8 / (spread * kmax);
}

namespace {

// One integrating-factor RK4 step of size h (h may be negative).
std::vector<cplx> lawson_step(const SpectralField& field, const std::vector<DriftMode>& modes,
                              const std::vector<cplx>& c, double h) {
  const auto& m = field.manifold();
  const int K = field.cutoff();
  const std::size_t n = c.size();
  std::vector<double> half(n);
  std::vector<double> full(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = field.eigenvalue(j);
    half[j] = std::exp(-0.25 * lam * h);
    full[j] = std::exp(-0.5 * lam * h);
  }
  auto N = [&](const std::vector<cplx>& v) { return drift_coupling(m, modes, v, K, K); };

  const auto k1 = N(c);
  std::vector<cplx> tmp(n);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = half[j] * (c[j] + 0.5 * h * k1[j]);
  const auto k2 = N(tmp);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = half[j] * c[j] + 0.5 * h * k2[j];
  const auto k3 = N(tmp);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = full[j] * c[j] + h * half[j] * k3[j];
  const auto k4 = N(tmp);
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = full[j] * c[j] +
             (h / 6.0) * (full[j] * k1[j] + 2.0 * half[j] * (k2[j] + k3[j]) + k4[j]);
  }
  return out;
}

SpectralField drift_advance(const SpectralField& field, double t, double dt,
                            const std::vector<DriftMode>& modes) {
  if (t == 0.0) return field;
  const auto steps = static_cast<long long>(std::ceil(std::abs(t) / dt - 1e-9));
  const double h = t / static_cast<double>(std::max(1LL, steps));
  auto c = field.coefficients();
  for (long long s = 0; s < std::max(1LL, steps); ++s) c = lawson_step(field, modes, c, h);
  return {field.manifold(), field.cutoff(), std::move(c)};
}

}  // namespace

SpectralField evolve_drift(const SpectralField& field, double t, double dt) {
  require_periodic(field, "evolve_drift");
  if (!(t >= 0.0)) throw std::invalid_argument("evolution time must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be > 0");
  const double bound = drift_stability_bound(field);
  if (dt > bound) {
    throw std::invalid_argument("time step " + std::to_string(dt) + " exceeds the stability bound " +
                                std::to_string(bound) + " at cutoff " + std::to_string(field.cutoff()));
  }
  auto out = drift_advance(field, t, dt, drift_modes(field.manifold()));
  const auto ext = grid_extrema(out);
  if (!(ext.inf > kPositivityFloor)) {
    throw PositivityError("drifted solution lost positivity (minimum " + std::to_string(ext.inf) +
                          "); refine dt or the cutoff");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Traces

double trace_fd_step(const ManifoldSpec& m, double t) {
  return 1e-4 * std::min(t, 1.0 / m.spectral_gap());
}

EntropyTrace entropy_trace(const SpectralField& initial, const std::vector<double>& times,
                           const TraceOptions& options) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw std::invalid_argument("trace times must be positive and strictly increasing");
    }
  }
  const auto& m = initial.manifold();
  EntropyTrace trace;
  trace.times = times;
  const auto record = [&](const SpectralField& at, const SpectralField& ahead,
                          const SpectralField& behind, double h) {
    const auto ef = entropy_and_fisher(at);
    trace.entropy.push_back(ef.entropy);
    trace.fisher.push_back(ef.fisher);
    trace.rate_direct.push_back(0.5 * ef.fisher);
    // Mass is conserved, so d/dt Ent = -d/dt deficit.
    const double ahead_deficit = entropy_and_fisher(ahead).deficit;
    const double behind_deficit = entropy_and_fisher(behind).deficit;
    trace.rate_fd.push_back(-(ahead_deficit - behind_deficit) / (2.0 * h));
  };

  if (!m.drifted()) {
    for (double t : times) {
      const double h = trace_fd_step(m, t);
      record(evolve(initial, t), evolve(initial, t + h), evolve(initial, t - h), h);
    }
    return trace;
  }

  const double bound = drift_stability_bound(initial);
  if (options.drift_dt > bound) {
    throw std::invalid_argument("drift time step exceeds the stability bound " + std::to_string(bound));
  }
  const auto modes = drift_modes(m);
  SpectralField state = initial;
  double now = 0.0;
  for (double t : times) {
    state = drift_advance(state, t - now, options.drift_dt, modes);
    now = t;
    const double h = trace_fd_step(m, t);
    const SpectralField ahead(m, state.cutoff(), lawson_step(state, modes, state.coefficients(), h));
    const SpectralField behind(m, state.cutoff(), lawson_step(state, modes, state.coefficients(), -h));
    record(state, ahead, behind, h);
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Pointwise identities on the torus

namespace {

struct TorusSamples {
  std::vector<double> u, ux, uy, uxx, uxy, uyy;
};

TorusSamples torus_samples(const SpectralField& w, int points) {
  const auto& m = w.manifold();
  if (!m.periodic() || m.dimension() != 2) throw std::invalid_argument("needs a 2-D torus field");
  const auto grid = periodic_grid(m, points);
  std::vector<cplx> c(w.coefficients());
  const double s = 1.0 / std::sqrt(m.volume());
  for (auto& v : c) v *= s;
  const int K = w.cutoff();
  return {kernels::synthesize_periodic_omp(c, K, grid, 0, 0),
          kernels::synthesize_periodic_omp(c, K, grid, 1, 0),
          kernels::synthesize_periodic_omp(c, K, grid, 0, 1),
          kernels::synthesize_periodic_omp(c, K, grid, 2, 0),
          kernels::synthesize_periodic_omp(c, K, grid, 1, 1),
          kernels::synthesize_periodic_omp(c, K, grid, 0, 2)};
}

}  // namespace

BochnerResidual bochner_residual(const SpectralField& w, int points) {
  const auto& m = w.manifold();
  if (!m.periodic() || m.dimension() != 2) {
    throw std::invalid_argument("bochner_residual needs torus2 or torus2_drift");
  }
  if (points <= 2 * (w.cutoff() + m.potential().degree()) + 2) {
    throw std::invalid_argument("grid too coarse for the field");
  }
  const auto grid = periodic_grid(m, points);
  const auto s = torus_samples(w, points);
  const std::size_t size = s.u.size();
  for (double v : s.u) {
    if (!(v > 0.0)) throw PositivityError("bochner_residual needs a strictly positive w");
  }

  // u_t = L w, kept exactly (no Galerkin truncation).
  const auto lw = apply_generator(w, true);
  std::vector<cplx> lc(lw.coefficients());
  for (auto& v : lc) v /= std::sqrt(m.volume());
  const auto ut = kernels::synthesize_periodic_omp(lc, lw.cutoff(), grid, 0, 0);
  const auto utx = kernels::synthesize_periodic_omp(lc, lw.cutoff(), grid, 1, 0);
  const auto uty = kernels::synthesize_periodic_omp(lc, lw.cutoff(), grid, 0, 1);

  // G = |grad u|^2 / u, differentiated through its discrete Fourier transform.
  std::vector<double> g(size);
  for (std::size_t i = 0; i < size; ++i) g[i] = (s.ux[i] * s.ux[i] + s.uy[i] * s.uy[i]) / s.u[i];
  const int gk = points / 2 - 1;
  const auto gc = kernels::analyze_periodic_omp(g, grid, gk);
  const auto gx = kernels::synthesize_periodic_omp(gc, gk, grid, 1, 0);
  const auto gy = kernels::synthesize_periodic_omp(gc, gk, grid, 0, 1);
  const auto gxx = kernels::synthesize_periodic_omp(gc, gk, grid, 2, 0);
  const auto gyy = kernels::synthesize_periodic_omp(gc, gk, grid, 0, 2);

  BochnerResidual out;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      const auto k = static_cast<std::size_t>(i * points + j);
      const double x = m.length(0) * i / points;
      const double y = m.length(1) * j / points;
      const auto dv = m.potential().gradient(x, y);
      const auto hv = m.potential().hessian(x, y);
      const double u = s.u[k];
      const double ux = s.ux[k];
      const double uy = s.uy[k];
      const double grad2 = ux * ux + uy * uy;

      const double diffusion = 0.5 * (gxx[k] + gyy[k]);
      const double transport = dv[0] * gx[k] + dv[1] * gy[k];
      const double dgdt = 2.0 * (ux * utx[k] + uy * uty[k]) / u - grad2 * ut[k] / (u * u);
      const double lhs = diffusion + transport - dgdt;

      const double hxx = s.uxx[k] - ux * ux / u;
      const double hxy = s.uxy[k] - ux * uy / u;
      const double hyy = s.uyy[k] - uy * uy / u;
      const double hess_term = (hxx * hxx + 2.0 * hxy * hxy + hyy * hyy) / u;
      const double drift_term = -2.0 * (hv[0] * ux * ux + 2.0 * hv[1] * ux * uy + hv[2] * uy * uy) / u;
      const double rhs = hess_term + drift_term;

      out.max_abs_residual = std::max(out.max_abs_residual, std::abs(lhs - rhs));
      out.term_scale = std::max({out.term_scale, std::abs(diffusion), std::abs(transport),
                                 std::abs(dgdt), std::abs(hess_term), std::abs(drift_term)});
    }
  }
  return out;
}

TraceInequality trace_inequality(const SpectralField& w) {
  const int points = evaluation_points(w.manifold(), w.cutoff());
  const auto s = torus_samples(w, points);
  const double n = w.manifold().dimension();
  TraceInequality out;
  out.min_margin = std::numeric_limits<double>::infinity();
  std::vector<double> margins(s.u.size());
  for (std::size_t k = 0; k < s.u.size(); ++k) {
    const double u = s.u[k];
    if (!(u > 0.0)) throw PositivityError("trace_inequality needs a strictly positive w");
    const double hxx = s.uxx[k] - s.ux[k] * s.ux[k] / u;
    const double hxy = s.uxy[k] - s.ux[k] * s.uy[k] / u;
    const double hyy = s.uyy[k] - s.uy[k] * s.uy[k] / u;
    const double lhs = hxx * hxx + 2.0 * hxy * hxy + hyy * hyy;
    const double lap_log = (s.uxx[k] + s.uyy[k]) / u - (s.ux[k] * s.ux[k] + s.uy[k] * s.uy[k]) / (u * u);
    const double rhs = u * u / n * lap_log * lap_log;
    margins[k] = lhs - rhs;
    out.scale = std::max(out.scale, lhs);
    out.min_margin = std::min(out.min_margin, margins[k]);
  }
  for (double mg : margins) {
    if (mg < -1e-12 * out.scale) ++out.violations;
  }
  return out;
}

CauchyStep cauchy_step(const SpectralField& field) {
  if (field.manifold().drifted()) throw std::invalid_argument("cauchy_step is stated without drift");
  const auto r = resolve(field);
  CauchyStep out;
  for (std::size_t i = 0; i < r.weights.size(); ++i) {
    const double v = 1.0 + r.deviation[i];
    const double lap_log = r.laplacian[i] / v - r.grad_sq[i] / (v * v);
    out.mean_lap_log += r.weights[i] * v * lap_log;
    out.mean_sq_lap_log += r.weights[i] * v * lap_log * lap_log;
    out.fisher += r.weights[i] * r.grad_sq[i] / v;
  }
  return out;
}

}  // namespace entropyrate::spectral
