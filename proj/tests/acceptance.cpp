// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "entropyrate/bounds.hpp"
#include "entropyrate/cli.hpp"
#include "entropyrate/fixtures.hpp"
#include "entropyrate/verify.hpp"

using namespace entropyrate;

namespace {

struct Outcome {
  bool pass;
  std::string note;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("AC%-2d %s  %s (%.2fs) %s\n", id, o.pass ? "PASS" : "FAIL", title, secs, o.note.c_str());
  std::fflush(stdout);
}

verify::CheckResult run_one(const std::string& name) {
  verify::VerifyOptions opts;
  opts.only = name;
  return verify::run_checks(opts).front();
}

std::string fmt(double x) { return cli::format_number(x); }

Outcome checks(std::initializer_list<const char*> names) {
  bool ok = true;
  std::string note;
  for (const char* n : names) {
    const auto r = run_one(n);
    ok = ok && r.pass;
    note += std::string(n) + "=" + (r.pass ? "ok" : "FAILED") + "(" + fmt(r.max_error) + ") ";
  }
  return {ok, note};
}

Outcome timed(double limit, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  auto o = body();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= limit) {
    o.pass = false;
    o.note += "runtime " + fmt(secs) + "s over " + fmt(limit) + "s";
  }
  return o;
}

struct FixtureRun {
  fixtures::Fixture fx;
  std::vector<bounds::BoundReport> reports;
};

FixtureRun run_fixture(const std::string& name) {
  auto fx = fixtures::by_name(name);
  const auto init = fx.initial();
  const auto tr = spectral::entropy_trace(init, fixtures::default_trace_times(), fx.trace_options);
  auto reports = bounds::check_bounds(tr, init, fx.extrema);
  return {std::move(fx), std::move(reports)};
}

Outcome bound_reports(const std::vector<std::string>& manifolds, const std::vector<std::string>& bound_names) {
  bool ok = true;
  std::string note;
  for (const auto& m : manifolds) {
    const auto run = run_fixture(m);
    for (const auto& b : bound_names) {
      bool found = false;
      for (const auto& r : run.reports) {
        if (r.name != b) continue;
        found = true;
        ok = ok && r.all_satisfied();
        note += m + "/" + b + " margin " + fmt(r.min_margin) + (r.all_satisfied() ? " " : " VIOLATED ");
      }
      if (!found) {
        ok = false;
        note += m + "/" + b + " missing ";
      }
    }
  }
  return {ok, note};
}

}  // namespace

int main() {
  criterion(1, "hyperbolic moment closed forms vs quadrature", [] { return timed(10.0, [] { return checks({"moments"}); }); });
  criterion(2, "I1 = (kappa^2 t + 3)/2 vs quadrature", [] { return checks({"i1"}); });
  criterion(3, "H3 heat kernel normalization", [] { return checks({"normalization"}); });
  criterion(4, "eta and eta' strictly inside their envelopes", [] { return checks({"envelopes"}); });
  criterion(5, "large-time entropy rate band", [] { return timed(30.0, [] { return checks({"band"}); }); });
  criterion(6, "direct vs finite-difference entropy rate", [] { return checks({"h3_rates", "spectral_rates"}); });
  criterion(7, "curvature bound on circle, torus, sphere",
            [] { return bound_reports({"circle", "torus", "sphere"}, {"ricci"}); });
  criterion(8, "drift bound on the drifted torus", [] { return bound_reports({"torus-drift"}, {"drift"}); });
  criterion(9, "Hamilton and spectral-gap bounds, k > 0 comparison", [] {
    auto o = bound_reports({"circle", "sphere"}, {"hamilton", "spectral"});
    const auto c = checks({"comparison"});
    return Outcome{o.pass && c.pass, o.note + c.note};
  });
  criterion(10, "Bochner identity residual", [] { return checks({"bochner"}); });
  criterion(11, "inequality suite", [] { return checks({"trace_inequality", "cauchy", "sinh_ratio_order", "sharpness", "sandwich"}); });
  criterion(12, "Euclidean reference rate", [] { return checks({"euclidean"}); });
  criterion(13, "verify output is deterministic", [] {
    cli::RunConfig c;
    c.command = cli::Command::verify;
    std::ostringstream a, b, err;
    const int sa = cli::cmd_verify(c, a, err);
    const int sb = cli::cmd_verify(c, b, err);
    const bool same = a.str() == b.str();
    return Outcome{same && sa == 0 && sb == 0,
                   std::string(same ? "identical" : "DIFFERENT") + ", " + std::to_string(a.str().size()) +
                       " bytes, exit " + std::to_string(sa) + "/" + std::to_string(sb)};
  });
  std::printf("%d of 13 criteria failed\n", failures);
  return failures;
}
