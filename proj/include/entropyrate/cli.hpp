#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "entropyrate/quadrature.hpp"

namespace entropyrate::cli {

enum class Command { h3, evolve, verify, bounds };
enum class Format { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Raised for invalid configuration; maps to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Command command = Command::verify;
  std::string manifold = "circle";
  double kappa = 1.0;
  // Unset grid fields take the command's default grid.
  std::optional<double> t_start;
  std::optional<double> t_stop;
  std::optional<int> t_count;
  std::optional<bool> t_log;
  quadrature::QuadratureSpec quadrature{};
  Format format = Format::csv;
  std::optional<std::string> out;
  std::optional<std::string> only;
  bool inject_fault = false;

  /// Time grid after defaults; throws UsageError when it is not strictly
  /// increasing and positive.
  [[nodiscard]] std::vector<double> times() const;
};

/// Shortest decimal that round-trips.
std::string format_number(double x);

/// Parses argv (flags override values from --config). Throws UsageError.
RunConfig parse(int argc, const char* const* argv);

int cmd_h3(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_evolve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full entry point: parse, dispatch, route output to --out when given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace entropyrate::cli
