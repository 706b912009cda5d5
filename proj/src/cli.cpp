#include "entropyrate/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "entropyrate/bounds.hpp"
#include "entropyrate/fixtures.hpp"
#include "entropyrate/h3entropy.hpp"
#include "entropyrate/kernels.hpp"
#include "entropyrate/verify.hpp"

namespace entropyrate::cli {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

std::vector<double> RunConfig::times() const {
  double start = 0.01;
  double stop = 2.0;
  int count = 40;
  bool log = true;
  if (command == Command::h3) {
    start = 0.1;
    stop = 100.0;
  }
  start = t_start.value_or(start);
  stop = t_stop.value_or(stop);
  count = t_count.value_or(count);
  log = t_log.value_or(log);
  if (!(start > 0.0)) throw UsageError("--t-start must be > 0");
  if (count < 1) throw UsageError("--t-count must be >= 1");
  if (count > 1 && !(stop > start)) throw UsageError("--t-stop must exceed --t-start");
  return fixtures::time_grid(start, stop, count, log);
}

namespace {

struct Flags {
  std::string config_path;
  double kappa = 1.0;
  double t_start = 0.0;
  double t_stop = 0.0;
  int t_count = 0;
  std::string t_scale;
  std::string manifold;
  std::string format;
  std::string out;
  std::string only;
  double rtol = 0.0;
  double atol = 0.0;
  bool inject_fault = false;
};

void add_common(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config_path, "JSON file with default values");
  sub.add_option("--kappa", f.kappa, "curvature scale of hyperbolic space");
  sub.add_option("--t-start", f.t_start, "first time");
  sub.add_option("--t-stop", f.t_stop, "last time");
  sub.add_option("--t-count", f.t_count, "number of times");
  sub.add_option("--t-scale", f.t_scale, "time spacing")->check(CLI::IsMember({"lin", "log"}));
  sub.add_option("--manifold", f.manifold, "model manifold")
      ->check(CLI::IsMember({"circle", "torus", "sphere", "torus-drift"}));
  sub.add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--out", f.out, "output path (default stdout)");
  sub.add_option("--only", f.only, "run a single verification check");
  sub.add_option("--rtol", f.rtol, "quadrature relative tolerance");
  sub.add_option("--atol", f.atol, "quadrature absolute tolerance");
  sub.add_flag("--inject-fault", f.inject_fault, "narrow the eta envelopes to exercise failure reporting");
}

template <typename T>
std::optional<T> json_field(const json& doc, const char* key) {
  if (!doc.contains(key)) return std::nullopt;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config field '") + key + "': " + e.what());
  }
}

void apply_scale(RunConfig& c, const std::string& scale) {
  if (scale == "lin") {
    c.t_log = false;
  } else if (scale == "log") {
    c.t_log = true;
  } else {
    throw UsageError("t_scale must be lin or log");
  }
}

void apply_format(RunConfig& c, const std::string& format) {
  if (format == "csv") {
    c.format = Format::csv;
  } else if (format == "json") {
    c.format = Format::json;
  } else {
    throw UsageError("format must be csv or json");
  }
}

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  if (auto v = json_field<double>(doc, "kappa")) c.kappa = *v;
  if (auto v = json_field<double>(doc, "t_start")) c.t_start = *v;
  if (auto v = json_field<double>(doc, "t_stop")) c.t_stop = *v;
  if (auto v = json_field<int>(doc, "t_count")) c.t_count = *v;
  if (auto v = json_field<std::string>(doc, "t_scale")) apply_scale(c, *v);
  if (auto v = json_field<std::string>(doc, "manifold")) c.manifold = *v;
  if (auto v = json_field<std::string>(doc, "format")) apply_format(c, *v);
  if (auto v = json_field<std::string>(doc, "out")) c.out = *v;
  if (auto v = json_field<std::string>(doc, "only")) c.only = *v;
  if (auto v = json_field<double>(doc, "rtol")) c.quadrature.relative_tolerance = *v;
  if (auto v = json_field<double>(doc, "atol")) c.quadrature.absolute_tolerance = *v;
}

struct Parser {
  CLI::App app{"Entropy growth of heat flows on model manifolds", "entropyrate"};
  Flags flags;
  CLI::App* h3 = nullptr;
  CLI::App* evolve = nullptr;
  CLI::App* verify = nullptr;
  CLI::App* bounds = nullptr;

  Parser() {
    app.require_subcommand(1);
    h3 = app.add_subcommand("h3", "entropy of the heat kernel on hyperbolic 3-space");
    evolve = app.add_subcommand("evolve", "entropy trace and bound reports on a model manifold");
    verify = app.add_subcommand("verify", "run the verification suite");
    bounds = app.add_subcommand("bounds", "closed-form bound tables for a model manifold");
    for (auto* sub : {h3, evolve, verify, bounds}) add_common(*sub, flags);
  }

  RunConfig config() {
    RunConfig c;
    CLI::App* sub = nullptr;
    if (h3->parsed()) {
      c.command = Command::h3;
      sub = h3;
    } else if (evolve->parsed()) {
      c.command = Command::evolve;
      sub = evolve;
    } else if (verify->parsed()) {
      c.command = Command::verify;
      sub = verify;
    } else {
      c.command = Command::bounds;
      sub = bounds;
    }
    if (c.command == Command::verify) c.format = Format::json;
    if (sub->count("--config")) apply_config_file(c, flags.config_path);

    if (sub->count("--kappa")) c.kappa = flags.kappa;
    if (sub->count("--t-start")) c.t_start = flags.t_start;
    if (sub->count("--t-stop")) c.t_stop = flags.t_stop;
    if (sub->count("--t-count")) c.t_count = flags.t_count;
    if (sub->count("--t-scale")) apply_scale(c, flags.t_scale);
    if (sub->count("--manifold")) c.manifold = flags.manifold;
    if (sub->count("--format")) apply_format(c, flags.format);
    if (sub->count("--out")) c.out = flags.out;
    if (sub->count("--only")) c.only = flags.only;
    if (sub->count("--rtol")) c.quadrature.relative_tolerance = flags.rtol;
    if (sub->count("--atol")) c.quadrature.absolute_tolerance = flags.atol;
    c.inject_fault = flags.inject_fault;

    if (!(c.kappa > 0.0) || !std::isfinite(c.kappa)) throw UsageError("--kappa must be > 0");
    try {
      c.quadrature.validate();
      (void)fixtures::by_name(c.manifold);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    (void)c.times();
    return c;
  }
};

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

// Records keyed by the header names, numbers kept as numbers.
json records_json(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    json rec = json::object();
    for (std::size_t i = 0; i < header.size(); ++i) rec[header[i]] = row[i];
    arr.push_back(std::move(rec));
  }
  return arr;
}

void emit_table(const RunConfig& c, std::ostream& out, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows) {
  if (c.format == Format::csv) {
    write_csv(out, header, rows);
  } else {
    out << records_json(header, rows).dump(2) << '\n';
  }
}

}  // namespace

RunConfig parse(int argc, const char* const* argv) {
  Parser p;
  try {
    p.app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  return p.config();
}

int cmd_h3(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const h3::H3Params p{c.kappa, c.quadrature};
  const auto times = c.times();
  std::vector<h3::H3EntropyRecord> records;
  try {
    records = kernels::h3_sweep_omp(p, times);
  } catch (const std::exception& e) {
    err << "h3: " << e.what() << '\n';
    return kExitFailure;
  }
  const std::vector<std::string> header = {"t",   "entropy",   "I1",        "I2",   "rate_direct",
                                           "rate_fd", "eta",     "eta_lower", "eta_upper", "etap",
                                           "etap_lower", "etap_upper", "band_lo", "band_hi"};
  std::vector<std::vector<double>> rows;
  bool ok = true;
  for (const auto& r : records) {
    rows.push_back({r.t, r.entropy, r.I1, r.I2, r.rate_direct, r.rate_fd, r.eta.value(),
                    r.eta_lower.value(), r.eta_upper.value(), r.etap.value(), r.etap_lower.value(),
                    r.etap_upper.value(), r.band_lo, r.band_hi});
    if (!r.envelopes_hold()) {
      err << "h3: envelope violated at t=" << format_number(r.t) << '\n';
      ok = false;
    }
    // The band is an asymptotic statement; test it once kappa^2 t >= 20.
    if (c.kappa * c.kappa * r.t >= 20.0 && !r.in_band(c.kappa)) {
      err << "h3: rate outside the asymptotic band at t=" << format_number(r.t) << '\n';
      ok = false;
    }
  }
  emit_table(c, out, header, rows);
  return ok ? kExitOk : kExitFailure;
}

int cmd_evolve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto fx = fixtures::by_name(c.manifold);
  const auto times = c.times();
  spectral::EntropyTrace trace;
  std::vector<bounds::BoundReport> reports;
  try {
    const auto init = fx.initial();
    trace = spectral::entropy_trace(init, times, fx.trace_options);
    reports = bounds::check_bounds(trace, init, fx.extrema);
  } catch (const std::exception& e) {
    err << "evolve: " << e.what() << '\n';
    return kExitFailure;
  }
  std::vector<std::string> header = {"t", "entropy", "rate_direct", "rate_fd", "fisher"};
  for (const auto& r : reports) header.push_back(r.name + "_rhs");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row = {times[i], trace.entropy[i], trace.rate_direct[i], trace.rate_fd[i],
                               trace.fisher[i]};
    for (const auto& r : reports) row.push_back(r.rhs[i]);
    rows.push_back(std::move(row));
  }
  bool ok = true;
  for (const auto& r : reports) {
    if (!r.all_satisfied()) {
      err << "evolve: bound '" << r.name << "' violated (min margin " << format_number(r.min_margin) << ")\n";
      ok = false;
    }
  }
  if (c.format == Format::csv) {
    write_csv(out, header, rows);
  } else {
    json doc = {{"manifold", c.manifold}, {"trace", records_json(header, rows)}, {"bounds", json::array()}};
    for (const auto& r : reports) {
      doc["bounds"].push_back({{"name", r.name}, {"all_satisfied", r.all_satisfied()}, {"min_margin", r.min_margin}});
    }
    out << doc.dump(2) << '\n';
  }
  return ok ? kExitOk : kExitFailure;
}

int cmd_bounds(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto fx = fixtures::by_name(c.manifold);
  const auto times = c.times();
  const auto& m = fx.manifold;
  try {
    const auto init = fx.initial();
    const double q0 = spectral::entropy_and_fisher(init).fisher;
    const auto grid = spectral::grid_extrema(init);
    const double sup = fx.extrema.sup_f.value_or(grid.sup);
    const double inf = fx.extrema.inf_f.value_or(grid.inf);
    const double vol_scale = m.drifted() ? 1.0 : m.volume();
    const int n = m.dimension();
    const double k = m.ricci_lower_bound();
    std::vector<std::vector<double>> rows;
    for (double t : times) {
      const double ricci = m.drifted() ? 0.5 * std::exp(-k * t) * q0 : bounds::ricci_bound_rhs(n, k, q0, t);
      const double spectral_rhs =
          m.drifted() ? std::nan("")
                      : bounds::spectral_gap_bound_rhs(m.spectral_gap(), init.laplacian_norm(), m.volume(), inf,
                                                       sup, t);
      rows.push_back({t, ricci, bounds::ricci_bound_asymptote(n, k),
                      bounds::hamilton_bound_rhs(std::min(k, 0.0), vol_scale * sup, t), spectral_rhs,
                      bounds::euclidean_rate_reference(n, t)});
    }
    emit_table(c, out, {"t", "ricci", "ricci_asymptote", "hamilton", "spectral", "euclidean"}, rows);
  } catch (const std::exception& e) {
    err << "bounds: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  verify::VerifyOptions opts;
  opts.only = c.only;
  opts.inject_fault = c.inject_fault;
  opts.quadrature = c.quadrature;
  std::vector<verify::CheckResult> results;
  try {
    results = verify::run_checks(opts);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out << verify::to_json(results).dump(2) << '\n';
  bool ok = true;
  for (const auto& r : results) {
    if (!r.pass) {
      err << "verify: check '" << r.name << "' failed\n";
      ok = false;
    }
  }
  return ok ? kExitOk : kExitFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Parser p;
  try {
    p.app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << p.app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }
  try {
    const auto c = p.config();
    std::ofstream file;
    std::ostream* sink = &out;
    if (c.out) {
      file.open(*c.out, std::ios::binary);
      if (!file) throw UsageError("cannot open " + *c.out + " for writing");
      sink = &file;
    }
    switch (c.command) {
      case Command::h3:
        return cmd_h3(c, *sink, err);
      case Command::evolve:
        return cmd_evolve(c, *sink, err);
      case Command::verify:
        return cmd_verify(c, *sink, err);
      case Command::bounds:
        return cmd_bounds(c, *sink, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace entropyrate::cli
