#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entropyrate/quadrature.hpp"

namespace entropyrate::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double max_error = 0.0;
  nlohmann::json details = nlohmann::json::object();
};

struct VerifyOptions {
  /// Run a single check group by name.
  std::optional<std::string> only;
  /// Narrow the eta / eta' envelopes by 10% so the envelope check must fail.
  bool inject_fault = false;
  quadrature::QuadratureSpec quadrature{};
};

/// Names of every check group, in execution order.
const std::vector<std::string>& check_names();

/// Maps the short aliases lemma41 / lemma42 to moments / sinh_ratio_order.
std::string canonical_check_name(const std::string& name);

/// Runs the selected checks. Throws std::invalid_argument for an unknown name.
std::vector<CheckResult> run_checks(const VerifyOptions& options = {});

/// {name: {pass, max_error, details}}
nlohmann::json to_json(const std::vector<CheckResult>& results);

}  // namespace entropyrate::verify
