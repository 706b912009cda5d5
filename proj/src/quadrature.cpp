#include "entropyrate/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace entropyrate::quadrature {

void QuadratureSpec::validate() const {
  if (!(relative_tolerance > 0.0)) throw std::invalid_argument("relative_tolerance must be > 0");
  if (!(absolute_tolerance > 0.0)) throw std::invalid_argument("absolute_tolerance must be > 0");
  if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be >= 1");
}

DomainFault::DomainFault(double where, double what)
    : std::domain_error("integrand returned " + std::to_string(what) + " at " +
                        std::to_string(where)),
      abscissa_(where) {}

namespace {

// Kronrod abscissae; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool tail;  // integrand is the mapped tail on [0, 1)
};

class Engine {
 public:
  Engine(const Integrand& f, double tail_start, const QuadratureSpec& spec)
      : f_(f), tail_start_(tail_start), spec_(spec) {}

  void add(double a, double b, bool tail) {
    if (!(b > a)) return;
    Panel p{a, b, 0.0, 0.0, tail};
    rule(p);
    panels_.push_back(p);
  }

  QuadratureResult run() {
    QuadratureResult out;
    for (;;) {
      double value = 0.0;
      double error = 0.0;
      for (const auto& p : panels_) {
        value += p.value;
        error += p.error;
      }
      out.value = value;
      out.error_estimate = error;
      out.evaluations = evaluations_;
      if (error <= std::max(spec_.relative_tolerance * std::abs(value), spec_.absolute_tolerance)) {
        out.converged = true;
        return out;
      }
      if (panels_.size() >= spec_.max_subdivisions) return out;

      auto worst = std::max_element(panels_.begin(), panels_.end(),
                                    [](const Panel& x, const Panel& y) { return x.error < y.error; });
      const double mid = 0.5 * (worst->a + worst->b);
      if (!(mid > worst->a && mid < worst->b)) return out;  // cannot bisect further
      Panel left{worst->a, mid, 0.0, 0.0, worst->tail};
      Panel right{mid, worst->b, 0.0, 0.0, worst->tail};
      rule(left);
      rule(right);
      *worst = left;
      panels_.insert(worst + 1, right);
    }
  }

 private:
  double eval(double x, bool tail) {
    ++evaluations_;
    double y;
    double where;
    if (tail) {
      const double one_minus = 1.0 - x;
      where = tail_start_ + x / one_minus;
      y = f_(where) / (one_minus * one_minus);
    } else {
      where = x;
      y = f_(x);
    }
    if (!std::isfinite(y)) throw DomainFault(where, y);
    return y;
  }

  // 15-point Kronrod value with the QUADPACK error heuristic.
  void rule(Panel& p) {
    const double center = 0.5 * (p.a + p.b);
    const double half = 0.5 * (p.b - p.a);
    const double fc = eval(center, p.tail);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (std::size_t j = 0; j < 7; ++j) {
      const double dx = half * kXgk[j];
      f1[j] = eval(center - dx, p.tail);
      f2[j] = eval(center + dx, p.tail);
      const double sum = f1[j] + f2[j];
      resk += kWgk[j] * sum;
      resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
      if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j) {
      resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    resk *= half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg * half));
    if (resasc != 0.0 && err != 0.0) {
      err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    if (resabs > kTiny / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    p.value = resk;
    p.error = err;
  }

  const Integrand& f_;
  double tail_start_;
  QuadratureSpec spec_;
  std::vector<Panel> panels_;
  std::size_t evaluations_ = 0;
};

// Integral over [lower, inf) of an integrand concentrated around `peak` with
// Gaussian width `width`.
QuadratureResult integrate_from(const Integrand& f, double lower, IntegrandScale scale,
                                const QuadratureSpec& spec) {
  spec.validate();
  if (!(scale.width > 0.0) || !std::isfinite(scale.width) || !std::isfinite(scale.peak)) {
    throw std::invalid_argument("integrand scale must be finite with positive width");
  }
  const double reach = 12.0 * scale.width;
  const double tail_start = std::max(lower, scale.peak + reach);

  std::vector<double> cuts{lower};
  for (int j = -4; j <= 4; ++j) {
    const double x = scale.peak + 3.0 * scale.width * j;
    if (x > lower && x < tail_start) cuts.push_back(x);
  }
  if (tail_start > lower) cuts.push_back(tail_start);

  Engine engine(f, tail_start, spec);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) engine.add(cuts[i], cuts[i + 1], false);
  engine.add(0.0, 1.0, true);
  return engine.run();
}

}  // namespace

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSpec& spec) {
  spec.validate();
  if (!(a <= b)) throw std::invalid_argument("integrate_interval requires a <= b");
  Engine engine(f, 0.0, spec);
  engine.add(a, b, false);
  if (a == b) return {0.0, 0.0, 0, true};
  return engine.run();
}

QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec,
                                         IntegrandScale scale) {
  return integrate_from(f, 0.0, scale, spec);
}

QuadratureResult integrate_shifted_gaussian(const Integrand& g, double center, double scale,
                                            const QuadratureSpec& spec) {
  if (!(scale > 0.0)) throw std::invalid_argument("shifted Gaussian scale must be > 0");
  return integrate_from(g, -center / scale, IntegrandScale{0.0, 1.0}, spec);
}

}  // namespace entropyrate::quadrature
