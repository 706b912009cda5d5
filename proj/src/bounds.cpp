#include "entropyrate/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "entropyrate/specfun.hpp"

namespace entropyrate::bounds {

bool BoundReport::all_satisfied() const {
  return std::all_of(satisfied.begin(), satisfied.end(), [](bool b) { return b; });
}

double slack(double rhs) { return 1e-9 + 1e-6 * std::abs(rhs); }

double ricci_bound_rhs(int n, double k, double q0, double t) {
  if (!(q0 > 0.0)) throw specfun::ContractViolation("q0 must be > 0, got " + std::to_string(q0));
  if (!(t > 0.0)) throw specfun::ContractViolation("t must be > 0, got " + std::to_string(t));
  if (n < 1) throw specfun::ContractViolation("dimension must be >= 1");
  if (k == 0.0) return n * q0 / (2.0 * (n + q0 * t));
  // Multiply through by e^{kt}; expm1 keeps the k -> 0 limit smooth.
  const double kt = k * t;
  return 0.5 / (std::exp(kt) / q0 + std::expm1(kt) / (n * k));
}

double ricci_bound_asymptote(int n, double k) { return k < 0.0 ? -0.5 * n * k : 0.0; }

double hamilton_bound_rhs(double k, double sup_f, double t) {
  if (!(sup_f > 0.0) || !(t > 0.0)) throw specfun::ContractViolation("sup f and t must be > 0");
  return (1.0 / t - k) * std::log(sup_f);
}

double spectral_gap_bound_rhs(double lambda1, double norm_laplacian_f, double vol, double inf_f,
                              double sup_f, double t) {
  if (!(lambda1 > 0.0) || !(norm_laplacian_f >= 0.0) || !(vol > 0.0) || !(inf_f > 0.0) ||
      !(sup_f > 0.0) || !(t >= 0.0)) {
    throw specfun::ContractViolation("spectral gap bound argument out of range");
  }
  return 0.5 * std::exp(-0.5 * lambda1 * t) * norm_laplacian_f * std::sqrt(vol) *
         (std::abs(std::log(inf_f)) + std::abs(std::log(sup_f)));
}

double euclidean_rate_reference(int n, double t) {
  if (!(t > 0.0)) throw specfun::ContractViolation("t must be > 0");
  return n / (2.0 * t);
}

BoundReport make_report(std::string name, const std::vector<double>& times,
                        const std::vector<double>& lhs, const std::vector<double>& rhs) {
  BoundReport r{std::move(name), times, lhs, rhs, {}, std::numeric_limits<double>::infinity()};
  r.satisfied.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    r.satisfied.push_back(lhs[i] <= rhs[i] + slack(rhs[i]));
    r.min_margin = std::min(r.min_margin, rhs[i] - lhs[i]);
  }
  return r;
}

std::vector<BoundReport> check_bounds(const spectral::EntropyTrace& trace,
                                      const spectral::SpectralField& initial,
                                      const CheckOptions& options) {
  const auto& m = initial.manifold();
  const int n = m.dimension();
  const double k = m.ricci_lower_bound();
  const auto q0 = spectral::entropy_and_fisher(initial).fisher;
  const auto& t = trace.times;
  const auto& lhs = trace.rate_direct;
  std::vector<BoundReport> out;

  auto sampled = [&](auto&& fn) {
    std::vector<double> rhs;
    rhs.reserve(t.size());
    for (double ti : t) rhs.push_back(fn(ti));
    return rhs;
  };

  // A constant datum has q0 = 0 and a zero rate; the bound degenerates to 0.
  const bool flat = !(q0 > 0.0);
  if (!m.drifted()) {
    out.push_back(make_report("ricci", t, lhs, sampled([&](double ti) {
                                return flat ? 0.0 : ricci_bound_rhs(n, k, q0, ti);
                              })));
  } else {
    out.push_back(make_report("drift", t, lhs, sampled([&](double ti) {
                                return 0.5 * std::exp(-k * ti) * q0;
                              })));
  }

  std::optional<spectral::Extrema> grid;
  auto extrema = [&]() -> const spectral::Extrema& {
    if (!grid) grid = spectral::grid_extrema(initial);
    return *grid;
  };
  const double sup_f = options.sup_f ? *options.sup_f : extrema().sup;
  const double inf_f = options.inf_f ? *options.inf_f : extrema().inf;

  // Against the normalized measure sup f scales with the volume; mu is
  // already normalized on the drifted torus.
  const double vol_scale = m.drifted() ? 1.0 : m.volume();
  const double k_eff = std::min(k, 0.0);
  out.push_back(make_report("hamilton", t, lhs, sampled([&](double ti) {
                              return hamilton_bound_rhs(k_eff, vol_scale * sup_f, ti);
                            })));

  if (!m.drifted()) {
    const double lap = initial.laplacian_norm();
    const double gap = m.spectral_gap();
    out.push_back(make_report("spectral", t, lhs, sampled([&](double ti) {
                                return spectral_gap_bound_rhs(gap, lap, m.volume(), inf_f, sup_f, ti);
                              })));
  }
  return out;
}

}  // namespace entropyrate::bounds
