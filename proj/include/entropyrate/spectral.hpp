#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace entropyrate::spectral {

enum class ManifoldKind { circle, torus2, sphere2, torus2_drift };

/// Raised when a resolved field fails the positivity guard.
class PositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the spectral cutoff cannot represent the projected datum.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// cos_coef cos(theta) + sin_coef sin(theta), theta = 2 pi (m1 x / l1 + m2 y / l2).
struct TrigTerm {
  int m1 = 0;
  int m2 = 0;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

/// Real trigonometric polynomial on a periodic box, used for drift potentials.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(std::vector<TrigTerm> terms, double l1, double l2);

  [[nodiscard]] double value(double x, double y) const;
  [[nodiscard]] std::array<double, 2> gradient(double x, double y) const;
  /// (xx, xy, yy)
  [[nodiscard]] std::array<double, 3> hessian(double x, double y) const;
  /// Largest |m1| or |m2| among the terms.
  [[nodiscard]] int degree() const;
  /// Plain Fourier coefficients V_p with V(x) = sum_p V_p exp(i k_p . x).
  [[nodiscard]] std::vector<std::complex<double>> fourier(int dim, int cutoff) const;
  [[nodiscard]] const std::vector<TrigTerm>& terms() const { return terms_; }

 private:
  std::vector<TrigTerm> terms_;
  double l1_ = 1.0;
  double l2_ = 1.0;
};

/// A model closed manifold with its Laplacian eigenbasis.
///
/// circle / torus2 / torus2_drift use complex exponentials exp(i k.x) / sqrt(vol);
/// sphere2 uses the zonal basis sqrt((2l+1) / (4 pi R^2)) P_l(cos theta).
class ManifoldSpec {
 public:
  static ManifoldSpec circle(double length = 1.0);
  static ManifoldSpec torus2(double l1 = 1.0, double l2 = 1.0);
  static ManifoldSpec sphere2(double radius = 1.0);
  /// Flat torus with drift Z = grad V. The curvature bound is the
  /// Bakry-Emery constant k with Ric - 2 Hess V >= k Id, taken as
  /// -2 max(largest Hessian eigenvalue of V) over a 256 x 256 grid.
  static ManifoldSpec torus2_drift(std::vector<TrigTerm> potential, double l1 = 1.0,
                                   double l2 = 1.0);

  [[nodiscard]] ManifoldKind kind() const { return kind_; }
  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] double ricci_lower_bound() const { return ricci_lower_bound_; }
  [[nodiscard]] double volume() const { return volume_; }
  [[nodiscard]] double length(int axis) const { return axis == 0 ? l1_ : l2_; }
  [[nodiscard]] double radius() const { return radius_; }
  [[nodiscard]] bool periodic() const { return kind_ != ManifoldKind::sphere2; }
  [[nodiscard]] bool drifted() const { return kind_ == ManifoldKind::torus2_drift; }
  /// Drift potential; empty polynomial when not drifted.
  [[nodiscard]] const TrigPolynomial& potential() const { return potential_; }
  /// Smallest nonzero Laplacian eigenvalue.
  [[nodiscard]] double spectral_gap() const;
  [[nodiscard]] std::string_view name() const;

 private:
  ManifoldSpec() = default;

  ManifoldKind kind_ = ManifoldKind::circle;
  int dimension_ = 1;
  double ricci_lower_bound_ = 0.0;
  double volume_ = 1.0;
  double l1_ = 1.0;
  double l2_ = 1.0;
  double radius_ = 1.0;
  TrigPolynomial potential_;
};

/// Pointwise function on a manifold: f(x, y) on the periodic box (y ignored
/// on the circle) or f(theta, ignored) on the zonal sphere.
using PointFunction = std::function<double(double, double)>;

/// Coefficients of a function against the manifold's orthonormal eigenbasis.
///
/// Periodic layout: index = (m1 + K) (2K + 1) + (m2 + K) in 2-D, m1 + K in 1-D.
/// Sphere layout: index = l, coefficients real.
class SpectralField {
 public:
  SpectralField(ManifoldSpec manifold, int cutoff, std::vector<std::complex<double>> coefficients);

  [[nodiscard]] const ManifoldSpec& manifold() const { return manifold_; }
  [[nodiscard]] int cutoff() const { return cutoff_; }
  [[nodiscard]] const std::vector<std::complex<double>>& coefficients() const { return coefficients_; }
  [[nodiscard]] std::size_t size() const { return coefficients_.size(); }

  /// (m1, m2) on periodic manifolds, (l, 0) on the sphere.
  [[nodiscard]] std::pair<int, int> mode(std::size_t index) const;
  /// Laplacian eigenvalue of basis function `index` (>= 0).
  [[nodiscard]] double eigenvalue(std::size_t index) const;
  [[nodiscard]] std::complex<double> coefficient(int m1, int m2 = 0) const;

  /// Total mass: int u dx, or int u dmu on a drifted torus.
  [[nodiscard]] double mass() const;
  /// The field divided by its mass.
  [[nodiscard]] SpectralField normalized() const;
  /// ||Laplacian f||_2 = (sum_j lambda_j^2 |c_j|^2)^(1/2).
  [[nodiscard]] double laplacian_norm() const;

  /// Pointwise value, summed directly from the coefficients.
  [[nodiscard]] double value_at(double x, double y = 0.0) const;

 private:
  ManifoldSpec manifold_;
  int cutoff_;
  std::vector<std::complex<double>> coefficients_;
};

/// Evaluation grid for nonlinear functionals: 4x oversampled uniform grid on
/// periodic manifolds, Gauss-Legendre nodes in cos(theta) on the sphere.
int evaluation_points(const ManifoldSpec& m, int cutoff);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// Grid samples of the density relative to its equilibrium.
///
/// With nu the normalized reference measure (dx / vol, or mu = e^{2V} dx / Z)
/// and v the density of u dx (resp. u dmu) against nu, the samples are
/// deviation = v - 1, grad_sq = |grad v|^2, laplacian = Laplacian v.
/// Entropy is log_volume - int phi(v) dnu with phi(s) = s log s - s + 1.
struct ResolvedField {
  std::vector<double> weights;  // nu quadrature weights, summing to 1
  std::vector<double> deviation;
  std::vector<double> grad_sq;
  std::vector<double> laplacian;
  double log_volume = 0.0;
  double density_scale = 1.0;  // u = v / density_scale
  double min_density = 0.0;    // min u on the grid
  double max_density = 0.0;    // max u on the grid
};

/// Positivity guard: resolved minimum of u must exceed this.
inline constexpr double kPositivityFloor = 1e-8;

/// Samples a mass-1 field. Throws PositivityError below kPositivityFloor and
/// std::invalid_argument when the mass differs from 1 by more than 1e-10.
ResolvedField resolve(const SpectralField& field);

/// phi(1 + w) = (1 + w) log(1 + w) - w, accurate for tiny w.
double relative_entropy_density(double w);

SpectralField project_initial(const ManifoldSpec& manifold, const PointFunction& f, int cutoff);

/// Exact heat flow u_t = (1/2) Laplacian u: c_j -> exp(-lambda_j t / 2) c_j.
SpectralField evolve(const SpectralField& field, double t);

/// Coefficients of L u = (1/2) Laplacian u + grad V . grad u. With
/// `extend`, the result keeps every mode of the product (cutoff K + deg V);
/// otherwise it is truncated to the field's cutoff (Galerkin projection).
SpectralField apply_generator(const SpectralField& field, bool extend = false);

/// Largest time step the drifted integrator accepts at this cutoff.
double drift_stability_bound(const SpectralField& field);

/// Galerkin flow of u_t = L u by integrating-factor RK4: the diagonal
/// -lambda / 2 part is applied exactly, the drift coupling by classical RK4.
/// Throws std::invalid_argument if dt exceeds drift_stability_bound and
/// PositivityError if the result is not strictly positive.
SpectralField evolve_drift(const SpectralField& field, double t, double dt);

struct EntropyAndFisher {
  double entropy = 0.0;  // -int u log u (dx, or dmu when drifted)
  double fisher = 0.0;   // q = int |grad u|^2 / u
  double deficit = 0.0;  // int phi(v) dnu >= 0
};

EntropyAndFisher entropy_and_fisher(const SpectralField& field);

struct EntropyTrace {
  std::vector<double> times;
  std::vector<double> entropy;
  std::vector<double> rate_direct;  // q_t / 2
  std::vector<double> rate_fd;      // central difference of entropy
  std::vector<double> fisher;       // q_t
};

struct TraceOptions {
  double drift_dt = 1e-3;  // time step of the drifted integrator
};

/// Finite-difference step used by entropy_trace at time t.
double trace_fd_step(const ManifoldSpec& m, double t);

/// Entropy, rates and Fisher information along the flow from `initial`.
/// Times must be positive and strictly increasing.
EntropyTrace entropy_trace(const SpectralField& initial, const std::vector<double>& times,
                           const TraceOptions& options = {});

struct BochnerResidual {
  double max_abs_residual = 0.0;
  double term_scale = 0.0;  // max over the grid of the largest single term
  [[nodiscard]] double relative() const {
    return term_scale > 0.0 ? max_abs_residual / term_scale : max_abs_residual;
  }
};

/// Both sides of
///   (L - d/dt)(|grad u|^2 / u)
///     = |Hess u - grad u (x) grad u / u|^2 / u + (Ric(grad u, grad u) - 2 <D_{grad u} Z, grad u>) / u
/// at u = w, with d/dt u replaced by L w, on a `points` x `points` grid of the
/// torus. The left side differentiates |grad w|^2 / w by a discrete Fourier
/// transform of its grid samples; the right side uses exact coefficients.
BochnerResidual bochner_residual(const SpectralField& w, int points = 96);

struct TraceInequality {
  double min_margin = 0.0;     // min of |Hess w - grad w (x) grad w / w|^2 - w^2 |Lap log w|^2 / n
  double scale = 0.0;          // max of the left-hand side
  std::size_t violations = 0;  // grid points with margin < -1e-12 scale
};

/// Pointwise |Hess w - grad w (x) grad w / w|^2 >= (w^2 / n) |Laplacian log w|^2 on a 2-D torus grid.
TraceInequality trace_inequality(const SpectralField& w);

struct CauchyStep {
  double mean_lap_log = 0.0;     // int u Laplacian(log u) dx
  double mean_sq_lap_log = 0.0;  // int u |Laplacian(log u)|^2 dx
  double fisher = 0.0;           // q
  [[nodiscard]] bool holds() const { return mean_lap_log * mean_lap_log <= mean_sq_lap_log; }
};

/// Quantities of the Cauchy step (int u Lap log u)^2 <= int u |Lap log u|^2
/// and of the identity int u Lap log u = -q, for an undrifted mass-1 field.
CauchyStep cauchy_step(const SpectralField& field);

struct Extrema {
  double inf = 0.0;
  double sup = 0.0;
};

/// Grid extrema of u on the evaluation grid (they underestimate the true range).
Extrema grid_extrema(const SpectralField& field);

}  // namespace entropyrate::spectral
