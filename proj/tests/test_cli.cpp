#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "entropyrate/cli.hpp"

using namespace entropyrate::cli;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result invoke(std::vector<const char*> args) {
  args.insert(args.begin(), "entropyrate");
  std::ostringstream out;
  std::ostringstream err;
  const int status = run(static_cast<int>(args.size()), args.data(), out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(format_number(2.0 / 7.0)) == 2.0 / 7.0);
}

TEST_CASE("h3 table") {
  const auto r = invoke({"h3", "--kappa", "1", "--t-start", "1", "--t-stop", "20", "--t-count", "4"});
  CHECK(r.status == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] ==
        "t,entropy,I1,I2,rate_direct,rate_fd,eta,eta_lower,eta_upper,etap,etap_lower,etap_upper,band_lo,band_hi");
  CHECK(rows[1].rfind("1,", 0) == 0);
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("default h3 grid has 40 rows") {
  const auto r = invoke({"h3"});
  CHECK(r.status == kExitOk);
  CHECK(lines(r.out).size() == 41);
}

TEST_CASE("h3 json carries the same records") {
  const auto csv = invoke({"h3", "--t-start", "2", "--t-stop", "4", "--t-count", "2", "--t-scale", "lin"});
  const auto js = invoke({"h3", "--t-start", "2", "--t-stop", "4", "--t-count", "2", "--t-scale", "lin", "--format", "json"});
  REQUIRE(js.status == kExitOk);
  const auto doc = nlohmann::json::parse(js.out);
  REQUIRE(doc.size() == 2);
  CHECK(doc[1]["t"] == 4.0);
  const auto row = lines(csv.out)[1];
  CHECK(row.substr(0, row.find(',')) == "2");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({"h3", "--kappa", "0"}).status == kExitUsage);
  CHECK(invoke({"h3", "--kappa", "-1"}).status == kExitUsage);
  CHECK(invoke({"h3", "--t-start", "2", "--t-stop", "1"}).status == kExitUsage);
  CHECK(invoke({"evolve", "--manifold", "klein"}).status == kExitUsage);
  CHECK(invoke({"nosuch"}).status == kExitUsage);
  CHECK(invoke({"verify", "--only", "nosuch"}).status == kExitUsage);
  CHECK(invoke({"h3", "--rtol", "0"}).status == kExitUsage);
  CHECK(invoke({"--help"}).status == kExitOk);
}

TEST_CASE("config file with flag override") {
  const std::string path = "test_cli_config.json";
  {
    std::ofstream f(path);
    f << R"({"kappa": 2.0, "t_start": 1.0, "t_stop": 3.0, "t_count": 3, "t_scale": "lin"})";
  }
  const char* argv[] = {"entropyrate", "h3", "--config", path.c_str(), "--t-count", "5"};
  const auto c = parse(6, argv);
  CHECK(c.kappa == 2.0);
  CHECK(c.times().size() == 5);
  CHECK(c.times()[1] == doctest::Approx(1.5));
  std::remove(path.c_str());

  const char* missing[] = {"entropyrate", "h3", "--config", "does_not_exist.json"};
  CHECK_THROWS_AS(parse(4, missing), UsageError);
}

TEST_CASE("evolve and bounds tables") {
  const auto e = invoke({"evolve", "--manifold", "circle", "--t-count", "5"});
  CHECK(e.status == kExitOk);
  CHECK(lines(e.out)[0] == "t,entropy,rate_direct,rate_fd,fisher,ricci_rhs,hamilton_rhs,spectral_rhs");
  CHECK(lines(e.out).size() == 6);

  const auto d = invoke({"evolve", "--manifold", "torus-drift", "--t-count", "3", "--format", "json"});
  CHECK(d.status == kExitOk);
  CHECK(nlohmann::json::parse(d.out)["bounds"][0]["name"] == "drift");

  const auto b = invoke({"bounds", "--manifold", "sphere", "--t-count", "3"});
  CHECK(b.status == kExitOk);
  CHECK(lines(b.out)[0] == "t,ricci,ricci_asymptote,hamilton,spectral,euclidean");
}

TEST_CASE("verify filtering, fault injection and determinism") {
  const auto one = invoke({"verify", "--only", "sinh_ratio_order"});
  CHECK(one.status == kExitOk);
  const auto doc = nlohmann::json::parse(one.out);
  CHECK(doc.size() == 1);
  CHECK(doc["sinh_ratio_order"]["pass"] == true);
  const auto alias = invoke({"verify", "--only", "lemma41"});
  CHECK(alias.status == kExitOk);
  CHECK(nlohmann::json::parse(alias.out).contains("moments"));

  const auto fault = invoke({"verify", "--only", "envelopes", "--inject-fault"});
  CHECK(fault.status == kExitFailure);
  CHECK(fault.err.find("envelopes") != std::string::npos);

  const auto again = invoke({"verify", "--only", "sinh_ratio_order"});
  CHECK(again.out == one.out);
}
