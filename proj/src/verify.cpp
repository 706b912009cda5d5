#include "entropyrate/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "entropyrate/bounds.hpp"
#include "entropyrate/fixtures.hpp"
#include "entropyrate/h3entropy.hpp"
#include "entropyrate/kernels.hpp"
#include "entropyrate/specfun.hpp"
#include "entropyrate/spectral.hpp"

namespace entropyrate::verify {

namespace {

using nlohmann::json;
using spectral::SpectralField;
using spectral::TrigTerm;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double rel_err(double a, double b) {
  const double d = std::abs(b);
  return d > 0.0 ? std::abs(a - b) / d : std::abs(a);
}

// Lazily built data shared by several checks.
class Context {
 public:
  explicit Context(const VerifyOptions& o) : options(o) {}

  const VerifyOptions& options;

  const std::vector<h3::H3EntropyRecord>& h3_records() {
    if (records_.empty()) {
      h3::H3Params p{1.0, options.quadrature};
      const auto times = fixtures::time_grid(0.1, 100.0, 40, true);
      records_ = kernels::h3_sweep_omp(p, times);
    }
    return records_;
  }

  struct Run {
    fixtures::Fixture fixture;
    SpectralField initial;
    spectral::EntropyTrace trace;
  };

  const Run& run(const std::string& name) {
    auto it = runs_.find(name);
    if (it == runs_.end()) {
      auto fx = fixtures::by_name(name);
      auto init = fx.initial();
      auto trace = spectral::entropy_trace(init, fixtures::default_trace_times(), fx.trace_options);
      it = runs_.emplace(name, Run{std::move(fx), std::move(init), std::move(trace)}).first;
    }
    return it->second;
  }

 private:
  std::vector<h3::H3EntropyRecord> records_;
  std::map<std::string, Run> runs_;
};

quadrature::IntegrandScale h3_scale(double kappa, double t) { return {kappa * t, std::sqrt(t)}; }

// ---------------------------------------------------------------------------
// Hyperbolic space

CheckResult check_moments(Context& ctx) {
  CheckResult r{"moments"};
  json rows = json::array();
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (double t : {0.1, 1.0, 10.0}) {
      const double s = 0.5 * kappa * kappa * t;
      for (const auto& m : specfun::kAllMoments) {
        // exp(-r^2/2t) sinh|cosh(kappa r) = exp(s) exp(-(r - kappa t)^2 / 2t) (1 -+ exp(-2 kappa r)) / 2
        const double sign = m.kind == specfun::HyperbolicKind::sinh ? -1.0 : 1.0;
        auto f = [=](double x) {
          const double z = x - kappa * t;
          const double g = std::exp(-z * z / (2.0 * t));
          if (g == 0.0) return 0.0;
          return g * std::pow(x, m.power) * 0.5 * (1.0 + sign * std::exp(-2.0 * kappa * x));
        };
        const auto q = quadrature::integrate_semi_infinite(f, ctx.options.quadrature, h3_scale(kappa, t));
        const double closed = specfun::hyperbolic_moment_closed_form(m, kappa, t).mantissa_at(s);
        const double e = rel_err(closed, q.value);
        r.max_error = std::max(r.max_error, e);
        if (e > 1e-8) rows.push_back({{"moment", m.name()}, {"kappa", kappa}, {"t", t}, {"rel_error", e}});
      }
    }
  }
  r.pass = r.max_error <= 1e-8;
  r.details = {{"cases", 81}, {"failures", rows}};
  return r;
}

// int_0^inf w(r) h(t, r) 4 pi sinh^2(kappa r) / kappa^2 dr
double h3_radial_integral(const h3::H3Params& p, double t, const std::function<double(double)>& w) {
  const double log4pi = std::log(4.0 * std::numbers::pi);
  auto f = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double e = h3::log_heat_kernel(p, t, r) + h3::log_volume_density(p.kappa, r) + log4pi;
    return e < -745.0 ? 0.0 : std::exp(e) * w(r);
  };
  const auto q = quadrature::integrate_semi_infinite(f, p.quadrature, h3_scale(p.kappa, t));
  return q.value;
}

CheckResult check_i1(Context& ctx) {
  CheckResult r{"i1"};
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (double t : {0.1, 1.0, 10.0}) {
      h3::H3Params p{kappa, ctx.options.quadrature};
      const double q = h3_radial_integral(p, t, [t](double x) { return x * x / (2.0 * t); });
      r.max_error = std::max(r.max_error, rel_err(h3::I1(p, t), q));
    }
  }
  // I1 = 2 exactly where kappa^2 t = 1.
  h3::H3Params unit{1.0, ctx.options.quadrature};
  const double at_one = h3_radial_integral(unit, 1.0, [](double x) { return 0.5 * x * x; });
  const double e_one = std::abs(at_one - 2.0) / 2.0;
  r.max_error = std::max(r.max_error, e_one);
  r.pass = r.max_error <= 1e-8;
  r.details = {{"I1_at_kappa2t_1", at_one}};
  return r;
}

CheckResult check_normalization(Context& ctx) {
  CheckResult r{"normalization"};
  json rows = json::array();
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (double t : {0.1, 1.0, 10.0, 50.0}) {
      h3::H3Params p{kappa, ctx.options.quadrature};
      const double mass = h3_radial_integral(p, t, [](double) { return 1.0; });
      const double e = std::abs(mass - 1.0);
      r.max_error = std::max(r.max_error, e);
      rows.push_back({{"kappa", kappa}, {"t", t}, {"mass", mass}});
    }
  }
  r.pass = r.max_error <= 1e-8;
  r.details = {{"cases", rows}};
  return r;
}

CheckResult check_envelopes(Context& ctx) {
  CheckResult r{"envelopes"};
  std::size_t violations = 0;
  json rows = json::array();
  for (const auto& rec : ctx.h3_records()) {
    auto eta_lo = rec.eta_lower;
    auto eta_hi = rec.eta_upper;
    auto etap_lo = rec.etap_lower;
    auto etap_hi = rec.etap_upper;
    if (ctx.options.inject_fault) {
      eta_lo = eta_lo * 1.1;
      eta_hi = eta_hi * 0.9;
      etap_lo = etap_lo * 1.1;
      etap_hi = etap_hi * 0.9;
    }
    const bool ok = h3::Envelope{eta_lo, eta_hi}.strictly_contains(rec.eta) &&
                    h3::Envelope{etap_lo, etap_hi}.strictly_contains(rec.etap);
    // Error: how far outside the bracket, relative to the value (0 when inside).
    const double s = rec.eta.log_scale;
    const double v = rec.eta.mantissa_at(s);
    const double below = std::max(0.0, eta_lo.mantissa_at(s) - v);
    const double above = std::max(0.0, v - eta_hi.mantissa_at(s));
    const double sp = rec.etap.log_scale;
    const double vp = rec.etap.mantissa_at(sp);
    const double below_p = std::max(0.0, etap_lo.mantissa_at(sp) - vp);
    const double above_p = std::max(0.0, vp - etap_hi.mantissa_at(sp));
    r.max_error = std::max({r.max_error, (below + above) / std::abs(v), (below_p + above_p) / std::abs(vp)});
    if (!ok) {
      ++violations;
      if (rows.size() < 5) rows.push_back({{"t", rec.t}});
    }
  }
  r.pass = violations == 0;
  r.details = {{"points", ctx.h3_records().size()}, {"violations", violations}, {"first_violations", rows}};
  if (ctx.options.inject_fault) r.details["injected_fault"] = "envelopes narrowed by 10%";
  return r;
}

CheckResult check_band(Context& ctx) {
  CheckResult r{"band"};
  json rows = json::array();
  bool ok = true;
  const std::pair<double, std::vector<double>> cases[] = {{1.0, {20.0, 50.0, 100.0}},
                                                          {2.0, {5.0, 12.5, 25.0}}};
  for (const auto& [kappa, times] : cases) {
    h3::H3Params p{kappa, ctx.options.quadrature};
    const auto [lo, hi] = h3::asymptotic_band(p);
    const double slack = 0.05 * kappa * kappa;
    for (double t : times) {
      const double rate = h3::entropy_rate(p, t);
      const bool in = rate >= lo - slack && rate <= hi + slack;
      ok = ok && in;
      r.max_error = std::max({r.max_error, lo - slack - rate, rate - hi - slack, 0.0});
      rows.push_back({{"kappa", kappa}, {"t", t}, {"rate", rate}, {"lo", lo - slack}, {"hi", hi + slack}});
    }
  }
  r.pass = ok;
  r.details = {{"cases", rows}};
  return r;
}

CheckResult check_euclidean(Context& ctx) {
  CheckResult r{"euclidean"};
  h3::H3Params p{0.01, ctx.options.quadrature};
  const double rate = h3::entropy_rate(p, 1.0);
  const double ref = bounds::euclidean_rate_reference(3, 1.0);
  r.max_error = rel_err(rate, ref);
  r.pass = r.max_error <= 0.01;
  r.details = {{"rate", rate}, {"reference", ref}};
  return r;
}

CheckResult check_h3_rates(Context& ctx) {
  CheckResult r{"h3_rates"};
  for (const auto& rec : ctx.h3_records()) {
    r.max_error = std::max(r.max_error, rel_err(rec.rate_fd, rec.rate_direct));
  }
  r.pass = r.max_error <= 1e-4;
  r.details = {{"points", ctx.h3_records().size()}};
  return r;
}

// ---------------------------------------------------------------------------
// Model manifolds

CheckResult check_spectral_rates(Context& ctx) {
  CheckResult r{"spectral_rates"};
  bool monotone = true;
  json rows = json::object();
  for (const auto& name : fixtures::names()) {
    const auto& tr = ctx.run(name).trace;
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      worst = std::max(worst, rel_err(tr.rate_fd[i], tr.rate_direct[i]));
      monotone = monotone && tr.rate_direct[i] >= 0.0 && (i == 0 || tr.entropy[i] >= tr.entropy[i - 1]);
    }
    rows[name] = worst;
    r.max_error = std::max(r.max_error, worst);
  }
  r.pass = r.max_error <= 1e-4 && monotone;
  r.details = {{"per_manifold", rows}, {"entropy_nondecreasing", monotone}};
  return r;
}

SpectralField field_from_terms(const spectral::ManifoldSpec& m, const std::vector<TrigTerm>& terms, int cutoff) {
  const spectral::TrigPolynomial poly(terms, m.length(0), m.length(1));
  auto c = poly.fourier(m.dimension(), cutoff);
  for (auto& v : c) v *= std::sqrt(m.volume());
  return {m, cutoff, std::move(c)};
}

// Deterministic random trigonometric data.
class TrigSampler {
 public:
  explicit TrigSampler(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }

  std::vector<TrigTerm> terms(int count, int degree, double amplitude) {
    std::vector<TrigTerm> out;
    for (int i = 0; i < count; ++i) {
      int a = integer(0, degree);
      int b = integer(-degree, degree);
      if (a == 0 && b <= 0) b = integer(1, degree);
      out.push_back({a, b, uniform(-amplitude, amplitude), uniform(-amplitude, amplitude)});
    }
    return out;
  }

 private:
  std::mt19937_64 gen_;
};

struct BochnerCase {
  std::vector<TrigTerm> w;  // around the constant 2
  std::vector<TrigTerm> v;
};

std::vector<BochnerCase> bochner_cases() {
  std::vector<BochnerCase> cases = {
      {{{1, 1, 0.5, 0.0}, {1, -1, 0.5, 0.0}}, {}},
      {{{1, 0, 1.0, 0.0}}, {{0, 1, 0.0, 0.3}}},
  };
  TrigSampler rng(20240917);
  for (int i = 0; i < 10; ++i) {
    cases.push_back({rng.terms(4, 2, 0.2), i == 0 ? std::vector<TrigTerm>{} : rng.terms(2, 2, 0.15)});
  }
  return cases;
}

CheckResult check_bochner(Context&) {
  CheckResult r{"bochner"};
  json rows = json::array();
  for (const auto& c : bochner_cases()) {
    auto terms = c.w;
    terms.push_back({0, 0, 2.0, 0.0});
    const auto m = c.v.empty() ? spectral::ManifoldSpec::torus2() : spectral::ManifoldSpec::torus2_drift(c.v);
    const auto w = field_from_terms(m, terms, 2);
    const auto res = spectral::bochner_residual(w, 96);
    r.max_error = std::max(r.max_error, res.relative());
    rows.push_back({{"drifted", !c.v.empty()}, {"relative_residual", res.relative()}});
  }
  r.pass = r.max_error <= 1e-8;
  r.details = {{"cases", rows}};
  return r;
}

CheckResult check_trace_inequality(Context& ctx) {
  CheckResult r{"trace_inequality"};
  std::size_t violations = 0;
  std::size_t cases = 0;
  TrigSampler rng(77);
  for (int i = 0; i < 10; ++i) {
    auto terms = rng.terms(5, 3, 0.25);
    terms.push_back({0, 0, 2.0, 0.0});
    const auto w = field_from_terms(spectral::ManifoldSpec::torus2(), terms, 3);
    const auto res = spectral::trace_inequality(w);
    violations += res.violations;
    ++cases;
    r.max_error = std::max(r.max_error, std::max(0.0, -res.min_margin) / std::max(res.scale, 1e-300));
  }
  const auto& run = ctx.run("torus");
  for (double t : {0.01, 0.1, 1.0}) {
    const auto res = spectral::trace_inequality(spectral::evolve(run.initial, t));
    violations += res.violations;
    ++cases;
  }
  r.pass = violations == 0;
  r.details = {{"cases", cases}, {"violations", violations}};
  return r;
}

CheckResult check_cauchy(Context& ctx) {
  CheckResult r{"cauchy"};
  std::size_t violations = 0;
  for (const char* name : {"circle", "torus", "sphere"}) {
    const auto& run = ctx.run(name);
    for (double t : run.trace.times) {
      const auto c = spectral::cauchy_step(spectral::evolve(run.initial, t));
      if (!c.holds()) ++violations;
      // Integration by parts: int u Lap log u = -q. Late-time q is far below
      // roundoff, so the scale is floored.
      const double e = std::abs(c.mean_lap_log + c.fisher) / std::max(c.fisher, 1e-6);
      r.max_error = std::max(r.max_error, e);
    }
  }
  r.pass = violations == 0 && r.max_error <= 1e-8;
  r.details = {{"violations", violations}, {"max_ibp_error", r.max_error}};
  return r;
}

std::vector<double> log_grid(double lo, double hi, int n) { return fixtures::time_grid(lo, hi, n, true); }

CheckResult check_sinh_ratio_order(Context&) {
  CheckResult r{"sinh_ratio_order"};
  std::size_t violations = 0;
  for (double x : log_grid(1e-6, 1e3, 2000)) {
    if (!specfun::sinh_ratio_bounds_check(x).strictly_ordered()) ++violations;
  }
  r.pass = violations == 0;
  r.details = {{"points", 2000}, {"violations", violations}};
  return r;
}

CheckResult check_sharpness(Context&) {
  CheckResult r{"sharpness"};
  std::size_t violations = 0;
  json rows = json::array();
  for (double beta : {1.25, 1.5, 1.75}) {
    const double edge = (beta - 1.0) / beta;
    double reversal = 0.0;
    for (double x : log_grid(1e-6, 1e3, 2000)) {
      const double mid = specfun::sinh_ratio_bounds_check(x).mid;
      const double bound = 1.0 / (1.0 + beta * x);
      if (x < edge && !(mid > bound)) ++violations;
      if (reversal == 0.0 && mid < bound) reversal = x;
    }
    if (reversal == 0.0) ++violations;
    rows.push_back({{"beta", beta}, {"first_reversal", reversal}});
  }
  r.pass = violations == 0;
  r.details = {{"cases", rows}, {"violations", violations}};
  return r;
}

CheckResult check_sandwich(Context&) {
  CheckResult r{"sandwich"};
  std::size_t violations = 0;
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (double x : log_grid(1e-6, 1e3, 1000)) {
      const double kr = kappa * x;
      const double v = specfun::log_sinh_ratio(kr);
      const double lo = kr - std::log1p(2.0 * kr);
      const double hi = kr - std::log1p(kr);
      if (!(lo < v && v < hi)) ++violations;
    }
  }
  r.pass = violations == 0;
  r.details = {{"points", 3000}, {"violations", violations}};
  return r;
}

CheckResult check_fixture_bounds(Context& ctx, const std::string& name) {
  CheckResult r{"bounds_" + name};
  const auto& run = ctx.run(name);
  bool ok = true;
  json rows = json::object();
  for (const auto& rep : bounds::check_bounds(run.trace, run.initial, run.fixture.extrema)) {
    ok = ok && rep.all_satisfied();
    rows[rep.name] = {{"all_satisfied", rep.all_satisfied()}, {"min_margin", rep.min_margin}};
    r.max_error = std::max(r.max_error, -rep.min_margin);
  }
  r.max_error = std::max(r.max_error, 0.0);
  r.pass = ok;
  r.details = rows;
  return r;
}

CheckResult check_comparison(Context& ctx) {
  // For k > 0 the curvature bound decays exponentially, the Hamilton bound like 1/t.
  CheckResult r{"comparison"};
  const auto& run = ctx.run("sphere");
  const auto& m = run.initial.manifold();
  const double q0 = spectral::entropy_and_fisher(run.initial).fisher;
  const double sup = *run.fixture.extrema.sup_f * m.volume();
  bool ok = true;
  json rows = json::array();
  for (double t : {5.0, 10.0, 20.0}) {
    const double ricci = bounds::ricci_bound_rhs(m.dimension(), m.ricci_lower_bound(), q0, t);
    const double hamilton = bounds::hamilton_bound_rhs(std::min(m.ricci_lower_bound(), 0.0), sup, t);
    ok = ok && ricci < hamilton;
    rows.push_back({{"t", t}, {"ricci", ricci}, {"hamilton", hamilton}});
  }
  r.pass = ok;
  r.details = {{"cases", rows}};
  return r;
}

CheckResult check_mass_conservation(Context&) {
  CheckResult r{"mass_conservation"};
  const auto fx = fixtures::torus_drift();
  const auto init = fx.initial();
  const auto later = spectral::evolve_drift(init, 1.0, 1e-3);
  r.max_error = rel_err(later.mass(), init.mass());
  r.pass = r.max_error <= 1e-8;
  r.details = {{"mass_0", init.mass()}, {"mass_1", later.mass()}};
  return r;
}

using CheckFn = std::function<CheckResult(Context&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"moments", check_moments},
      {"i1", check_i1},
      {"normalization", check_normalization},
      {"envelopes", check_envelopes},
      {"band", check_band},
      {"euclidean", check_euclidean},
      {"h3_rates", check_h3_rates},
      {"spectral_rates", check_spectral_rates},
      {"bochner", check_bochner},
      {"trace_inequality", check_trace_inequality},
      {"cauchy", check_cauchy},
      {"sinh_ratio_order", check_sinh_ratio_order},
      {"sharpness", check_sharpness},
      {"sandwich", check_sandwich},
      {"bounds_circle", [](Context& c) { return check_fixture_bounds(c, "circle"); }},
      {"bounds_torus", [](Context& c) { return check_fixture_bounds(c, "torus"); }},
      {"bounds_sphere", [](Context& c) { return check_fixture_bounds(c, "sphere"); }},
      {"bounds_torus-drift", [](Context& c) { return check_fixture_bounds(c, "torus-drift"); }},
      {"comparison", check_comparison},
      {"mass_conservation", check_mass_conservation},
  };
  return checks;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

std::string canonical_check_name(const std::string& name) {
  if (name == "lemma41") return "moments";
  if (name == "lemma42") return "sinh_ratio_order";
  return name;
}

std::vector<CheckResult> run_checks(const VerifyOptions& in) {
  VerifyOptions options = in;
  if (options.only) options.only = canonical_check_name(*options.only);
  if (options.only) {
    const auto& names = check_names();
    if (std::find(names.begin(), names.end(), *options.only) == names.end()) {
      throw std::invalid_argument("unknown check '" + *options.only + "'");
    }
  }
  Context ctx(options);
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : registry()) {
    if (options.only && *options.only != name) continue;
    try {
      out.push_back(fn(ctx));
    } catch (const std::exception& e) {
      CheckResult failed{name};
      failed.max_error = std::numeric_limits<double>::infinity();
      failed.details = {{"exception", e.what()}};
      out.push_back(std::move(failed));
    }
  }
  return out;
}

json to_json(const std::vector<CheckResult>& results) {
  json doc = json::object();
  for (const auto& r : results) {
    doc[r.name] = {{"pass", r.pass}, {"max_error", r.max_error}, {"details", r.details}};
  }
  return doc;
}

}  // namespace entropyrate::verify
