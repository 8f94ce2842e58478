#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bjapprox/cli.hpp"

using nlohmann::json;
namespace cli = bjapprox::cli;
namespace fs = std::filesystem;

namespace {

const std::string kData = BJAPPROX_TEST_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "bjapprox_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("dist on the sup-domain fixture") {
  const Run r = run({"dist", kData + "/operator_sup_2x2.json"});
  REQUIRE(r.code == cli::kOk);
  const json d = json::parse(r.out);
  CHECK(cli::validate_result(d).empty());
  CHECK(d["options"]["tolerance"] == 1e-9);
  CHECK(d["options"]["seed"] == 42);
  CHECK(d["options"]["restarts"] == 8);
  for (const auto& route : d["routes"]) CHECK(route["distance"].get<double>() == doctest::Approx(10.0).epsilon(1e-8));
  CHECK(d["routes"].size() == 3);
  CHECK(d["max_relative_disagreement"].get<double>() <= 1e-6);
}

TEST_CASE("dist on the l_3 fixture uses the file seed") {
  const Run r = run({"dist", kData + "/point_subspace_l3.json"});
  REQUIRE(r.code == cli::kOk);
  const json d = json::parse(r.out);
  CHECK(d["options"]["seed"] == 7);
  for (const auto& route : d["routes"]) {
    CHECK(route["distance"].get<double>() == doctest::Approx(std::cbrt(3.0)).epsilon(1e-9));
  }
  // Flags override the file.
  const json d2 = json::parse(run({"--seed", "9", "dist", kData + "/point_subspace_l3.json"}).out);
  CHECK(d2["options"]["seed"] == 9);
}

TEST_CASE("route selection") {
  const Run r = run({"--routes", "closed-form,primal-oracle", "dist",
                     write_temp("c.json", R"({"schema":1,"kind":"point-subspace","p":3,"x":[1,2],"basis":[[3,4]]})")
                         .string()});
  REQUIRE(r.code == cli::kOk);
  const json d = json::parse(r.out);
  REQUIRE(d["routes"].size() == 2);
  CHECK(d["routes"][0]["distance"].get<double>() == doctest::Approx(0.35815013030642046).epsilon(1e-12));

  const Run bad = run({"--routes", "closed-form", "dist", kData + "/point_subspace_l3.json"});
  CHECK(bad.code == cli::kUsage);
}

TEST_CASE("parse errors name the line or the field") {
  const Run syntax = run({"dist", write_temp("s.json", "{\n  \"schema\": 1,\n  \"kind\": ,\n}").string()});
  CHECK(syntax.code == cli::kUsage);
  const json e = json::parse(syntax.out);
  CHECK(e["error"]["code"] == "parse");
  CHECK(e["error"]["message"].get<std::string>().find("s.json:3") != std::string::npos);

  const Run field = run({"dist", write_temp("f.json", R"({"schema":1,"kind":"point-subspace","p":3,"x":[1,"a"],"basis":[[1,0]]})").string()});
  CHECK(field.code == cli::kUsage);
  const json f = json::parse(field.out);
  CHECK(f["error"]["field"] == "/x/1");
  CHECK(cli::validate_result(f).empty());

  const Run exponent = run({"dist", write_temp("p.json", R"({"schema":1,"kind":"point-subspace","p":1,"x":[1,2],"basis":[[1,0]]})").string()});
  CHECK(exponent.code == cli::kUsage);

  const Run version = run({"dist", write_temp("v.json", R"({"schema":2,"kind":"point-subspace"})").string()});
  CHECK(version.code == cli::kUsage);
  CHECK(json::parse(version.out)["error"]["field"] == "/schema");
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"dist"}).code == cli::kUsage);
  CHECK(run({"dist", "/nonexistent/problem.json"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
  CHECK(run({"bench", "--n", "9", "--trials", "1"}).code == cli::kUsage);
  CHECK(run({"check", kData + "/operator_sup_2x2.json"}).code == cli::kUsage);
}

TEST_CASE("check verdicts map to exit codes") {
  const Run yes = run({"check", write_temp("o1.json", R"({"schema":1,"kind":"orthogonality-check","object":"vectors","p":2,"x":[1,0],"y":[0,1],"delta":0.001})").string()});
  CHECK(yes.code == cli::kOk);
  const json dy = json::parse(yes.out);
  CHECK(dy["verdict"] == true);
  CHECK(dy["classification"] == "strong");
  CHECK(cli::validate_result(dy).empty());

  const Run no = run({"check", write_temp("o2.json", R"({"schema":1,"kind":"orthogonality-check","object":"vectors","p":2,"x":[1,0],"y":[1,1]})").string()});
  CHECK(no.code == cli::kVerdictFalse);

  const Run ineq = run({"check", write_temp("i.json", R"({"schema":1,"kind":"inequality-check","p":3,"a":1,"b":2,"c":4,"alpha":0.1,"beta":0.2})").string()});
  CHECK(ineq.code == cli::kOk);

  const Run lam = run({"check", write_temp("l.json", R"({"schema":1,"kind":"orthogonality-check","object":"lambda-condition","T":[[2,0],[0,1]],"A":[[1,0],[0,1]],"lambda0":1.5})").string()});
  CHECK(lam.code == cli::kOk);

  const Run cert = run({"check", write_temp("cert.json", R"({"schema":1,"kind":"point-subspace","p":2,"x":[1,1,1],"basis":[[1,0,-1],[1,2,1]],"alpha":[0,0.6666666666666666]})").string()});
  CHECK(cert.code == cli::kOk);
  const Run bad_cert = run({"check", write_temp("cert2.json", R"({"schema":1,"kind":"point-subspace","p":2,"x":[1,1,1],"basis":[[1,0,-1],[1,2,1]],"alpha":[0.1,0.6666666666666666]})").string()});
  CHECK(bad_cert.code == cli::kVerdictFalse);
}

TEST_CASE("batches keep input order") {
  const std::string text = R"([
    {"schema":1,"kind":"point-subspace","p":2,"x":[3,4],"basis":[[0,1]]},
    {"schema":1,"kind":"point-subspace","p":2,"x":[5,4],"basis":[[0,1]]},
    {"schema":1,"kind":"bogus"},
    {"schema":1,"kind":"point-subspace","p":2,"x":[7,4],"basis":[[0,1]]}
  ])";
  const Run r = run({"dist", write_temp("batch.json", text).string()});
  CHECK(r.code == cli::kUsage);
  const json d = json::parse(r.out);
  REQUIRE(d.size() == 4);
  CHECK(d.at(0).at("routes").at(0)["distance"].get<double>() == doctest::Approx(3.0));
  CHECK(d.at(1).at("routes").at(0)["distance"].get<double>() == doctest::Approx(5.0));
  CHECK(d.at(2).contains("error"));
  CHECK(d.at(3).at("routes").at(0)["distance"].get<double>() == doctest::Approx(7.0));
  CHECK(cli::validate_result(d).empty());
}

TEST_CASE("json-out writes the same document") {
  const fs::path out = fs::temp_directory_path() / "bjapprox_cli_tests" / "out.json";
  fs::remove(out);
  const Run r = run({"--json-out", out.string(), "dist", kData + "/point_subspace_l3.json"});
  REQUIRE(r.code == cli::kOk);
  std::ifstream in(out);
  REQUIRE(in);
  CHECK(json::parse(in) == json::parse(r.out));
}

TEST_CASE("bench") {
  const Run empty = run({"bench", "--trials", "0"});
  CHECK(empty.code == cli::kOk);
  CHECK(json::parse(empty.out)["rows"].empty());

  const Run a = run({"bench", "--n", "2,3", "--p", "1.5,3", "--trials", "2", "--no-timing"});
  const Run b = run({"bench", "--n", "2,3", "--p", "1.5,3", "--trials", "2", "--no-timing"});
  REQUIRE(a.code == cli::kOk);
  CHECK(a.out == b.out);
  const json d = json::parse(a.out);
  CHECK(cli::validate_result(d).empty());
  CHECK(d["rows"].size() == 6);  // (n, k) in {(2,1), (3,1), (3,2)} times two exponents
  CHECK_FALSE(d["rows"][0]["routes"][0].contains("mean_time_ms"));

  const Run timed = run({"bench", "--n", "2", "--p", "2", "--trials", "1"});
  CHECK(json::parse(timed.out)["rows"][0]["routes"][0].contains("mean_time_ms"));
}

TEST_CASE("validate_result rejects incomplete documents") {
  CHECK_FALSE(cli::validate_result(json{{"schema", 1}}).empty());
  CHECK_FALSE(cli::validate_result(json{{"schema", 1}, {"command", "dist"}, {"options", json::object()}}).empty());
  CHECK_FALSE(cli::validate_result(json::array({json{{"schema", 2}}})).empty());
}
