#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entropyrate/spectral.hpp"

namespace entropyrate::bounds {

/// One bound checked along a trace. lhs is always the entropy rate.
struct BoundReport {
  std::string name;
  std::vector<double> times;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<bool> satisfied;
  double min_margin = 0.0;  // min of rhs - lhs

  [[nodiscard]] bool all_satisfied() const;
};

/// Tolerance added to every rhs before comparing.
double slack(double rhs);

/// Curvature bound on the entropy rate for Ric >= k on an n-manifold:
/// e^{-kt}/2 [1/q0 - (e^{-kt} - 1)/(nk)]^{-1}, and n q0 / (2(n + q0 t)) at k = 0.
/// Throws specfun::ContractViolation unless q0 > 0 and t > 0.
double ricci_bound_rhs(int n, double k, double q0, double t);

/// Large-time limit of ricci_bound_rhs: -nk/2 for k < 0, 0 otherwise.
double ricci_bound_asymptote(int n, double k);

/// (1/t - k) log(sup f).
double hamilton_bound_rhs(double k, double sup_f, double t);

/// (1/2) e^{-lambda1 t / 2} ||Laplacian f||_2 sqrt(vol) (|log inf f| + |log sup f|).
double spectral_gap_bound_rhs(double lambda1, double norm_laplacian_f, double vol, double inf_f,
                              double sup_f, double t);

/// n / (2t), the entropy rate of the Euclidean heat kernel.
double euclidean_rate_reference(int n, double t);

/// Builds a report from a measured rate and a bound sampled at the same times.
BoundReport make_report(std::string name, const std::vector<double>& times,
                        const std::vector<double>& lhs, const std::vector<double>& rhs);

struct CheckOptions {
  /// Known extrema of the initial datum; grid extrema are used when absent.
  std::optional<double> sup_f;
  std::optional<double> inf_f;
};

/// Every bound that applies to the manifold, evaluated along `trace`:
///   ricci      - undrifted manifolds, k from the Ricci lower bound
///   drift      - drifted torus, e^{-kt}/2 q0 with the effective k
///   hamilton   - all manifolds, k clipped to min(k, 0), sup f taken against
///                the normalized measure
///   spectral   - undrifted manifolds
std::vector<BoundReport> check_bounds(const spectral::EntropyTrace& trace,
                                      const spectral::SpectralField& initial,
                                      const CheckOptions& options = {});

}  // namespace entropyrate::bounds
