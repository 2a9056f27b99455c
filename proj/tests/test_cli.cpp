#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "guessing/cli.hpp"

using guessing::cli::run;
using Json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kStress = DATA_DIR "/appendixB-stress.json";
const std::string kUniform = DATA_DIR "/uniform4.json";
const std::string kBern = DATA_DIR "/bernoulli03.json";
const std::string kDiag = DATA_DIR "/diagonal-joint.json";

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = std::string(BUILD_DIR) + "/" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("validate") {
  const auto r = call({"validate", kUniform});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["valid"] == true);
  const auto bad = write_temp("bad_pmf.json", R"({"x":["a","b"],"xhat":["a","b"],"pmf":[0.6,0.6],"distortion":[[0,1],[1,0]],"D":0})");
  const auto e = call({"validate", bad});
  CHECK(e.code == 1);
  CHECK(e.err.find("pmf sums to 1.2") != std::string::npos);
  CHECK(call({"validate", "/nonexistent.json"}).code == 1);
  CHECK(call({"nosuch", kUniform}).code == 1);
  CHECK(call({}).code == 1);
}

TEST_CASE("moment") {
  const auto r = call({"moment", kUniform, "--rho", "1"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["moment"].get<double>() == doctest::Approx(2.5));
  CHECK(j["moment_log"].get<double>() == doctest::Approx(1.32193).epsilon(1e-5));

  const auto mc1 = call({"moment", kUniform, "--rho", "1", "--mc", "20000", "--seed", "5"});
  const auto mc2 = call({"moment", kUniform, "--rho", "1", "--mc", "20000", "--seed", "5"});
  CHECK(mc1.out == mc2.out);
  CHECK(Json::parse(mc1.out)["monte_carlo"]["seed"] == 5);

  const auto side = call({"moment", kDiag, "--rho", "2", "--side-info"});
  REQUIRE(side.code == 0);
  CHECK(Json::parse(side.out)["moment_log"].get<double>() == 0.0);
  CHECK(call({"moment", kUniform, "--rho", "1", "--side-info"}).code == 1);
  CHECK(call({"moment", kUniform, "--rho", "-1"}).code == 1);
}

TEST_CASE("bounds") {
  const auto r = call({"bounds", kStress, "--rho", "1", "--oracle"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["functional_gap"].get<double>() == doctest::Approx(0.38234).epsilon(1e-3));
  CHECK(j["greedy_functional"].get<double>() == doctest::Approx(1.95510).epsilon(1e-5));
  CHECK(call({"bounds", kStress, "--rho", "1", "--oracle", "--assert"}).code == 0);

  const auto csv = call({"--format", "csv", "bounds", kStress, "--rho", "1"});
  CHECK(csv.out.rfind("rho,alpha,eps,", 0) == 0);
  CHECK(csv.out.find("0.382329616888") != std::string::npos);
}

TEST_CASE("floating output uses 12 significant digits") {
  const auto r = call({"entropy", kBern, "--alpha", "0.5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("0.938485394361") != std::string::npos);
}

TEST_CASE("remaining subcommands") {
  CHECK(call({"entropy", kDiag, "--alpha", "0.5", "--conditional"}).code == 0);
  CHECK(call({"entropy", kUniform, "--alpha", "0.5", "--conditional"}).code == 1);
  CHECK(call({"functional", kStress, "--alpha", "0.5", "--oracle"}).code == 0);
  CHECK(Json::parse(call({"functional", kStress, "--alpha", "0.5", "--oracle"}).out)["oracle_map"].size() == 7);
  CHECK(call({"rd", kBern}).code == 0);
  CHECK(Json::parse(call({"rd", kBern, "--D", "0.3"}).out)["rate"].get<double>() == 0.0);
  CHECK(call({"exponent", kBern, "--rho", "1", "--D", "0", "--grid", "50"}).code == 0);
  CHECK(call({"code", kStress}).code == 0);
  CHECK(Json::parse(call({"code", kStress}).out)["entries"][0]["word"] == "");

  const std::string out = std::string(BUILD_DIR) + "/strategy_out.json";
  std::remove(out.c_str());
  const auto s = call({"strategy", kStress, "--out", out});
  REQUIRE(s.code == 0);
  std::ifstream f(out);
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str() == s.out);
  CHECK(Json::parse(call({"strategy", kDiag}).out)["per_y"].size() == 3);
}

TEST_CASE("sweep csv") {
  const auto r = call({"--format", "csv", "sweep", kBern, "--rho", "1,2", "--nmax", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("n,functional,moment_log_rho_1,moment_log_rho_2,target,gap\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
  CHECK(call({"sweep", kBern, "--rho", "1", "--nmax", "13"}).code == 3);
  CHECK(Json::parse(call({"sweep", kBern, "--rho", "1", "--nmax", "13"}).out)["cap_hit"] == true);
}

TEST_CASE("verify and assert exit codes") {
  CHECK(call({"verify", kStress, "--suite", "coverage", "--assert"}).code == 0);
  CHECK(call({"verify", kStress, "--suite", "lemma3", "--trials", "200", "--assert"}).code == 0);
  CHECK(call({"verify", kStress, "--suite", "schur", "--trials", "200", "--assert"}).code == 0);
  const auto maj = call({"verify", kStress, "--suite", "majorization", "--assert"});
  CHECK(maj.code == 2);
  CHECK(Json::parse(maj.out)["violations"].get<int>() > 0);
  CHECK(call({"verify", kStress, "--suite", "majorization"}).code == 0);
  CHECK(call({"verify", kStress, "--suite", "bogus"}).code == 1);
}

TEST_CASE("identical invocations are byte-identical") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"bounds", kStress, "--rho", "2", "--oracle", "--all-strategies"},
           {"verify", kStress, "--suite", "schur", "--trials", "300", "--seed", "3"},
           {"exponent", kBern, "--rho", "1", "--grid", "40"}}) {
    CHECK(call(args).out == call(args).out);
  }
}
