#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "test_util.hpp"

using namespace ca;
using namespace catest;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

std::string cli_binary() {
  const char* bin = std::getenv("CONSTRUCT_AUDIT_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

RunResult run_cli(const std::string& args) {
  std::string cmd = cli_binary() + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "construct_audit_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = temp_dir() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("audit of the xor table flags misclassification but not output disparity", "[cli]") {
  auto path = write_temp("xor.json", joint_to_json(xor_example<Rational>()).dump());
  auto r = run_cli("audit --input " + path + " --tests dp,misclass --mode rational --criterion none");
  CHECK(r.exit_code == 1);  // the misclassification test fails
  auto rep = Json::parse(r.output);
  CHECK(rep["schema"] == "construct-audit/1");
  CHECK(rep["mode"] == "rational");
  REQUIRE(rep["tests"].size() == 2);
  CHECK(rep["tests"][0]["test"] == "demographic_parity");
  CHECK(rep["tests"][0]["pass"] == true);
  CHECK(rep["tests"][1]["test"] == "misclassification_parity");
  CHECK(rep["tests"][1]["statistic"] == 1);
  CHECK(rep["tests"][1]["pass"] == false);
  CHECK(rep["pass"] == false);
}

TEST_CASE("audit reports are byte-stable across runs", "[cli]") {
  auto path = write_temp("stable.json",
                         joint_to_json(eqodds_amplifying_counterexample<Rational>(5)).dump());
  std::string args = "audit --input " + path + " --mode rational --criterion both --seed 9";
  auto a = run_cli(args);
  auto b = run_cli(args);
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.output == b.output);
  CHECK_FALSE(a.output.empty());
}

TEST_CASE("an equalized-odds construction audits clean under WYSIWYG", "[cli]") {
  using S = Rational;
  auto base = random_joint<S>(harness::unit_support(), sup({0, 1}), harness::unit_support(), 3);
  auto wys = impose_worldview(base, Worldview<S>::WYSIWYG(), 4);
  auto joint = apply_model(wys, harness::eq_odds_kernel<S>(wys.support(Var::Yo), b01(), 5));
  auto path = write_temp("eo.json", joint_to_json(joint).dump());
  auto r = run_cli("audit --input " + path +
                   " --tests eo --criterion categorical --worldview wysiwyg --mode rational");
  CHECK(r.exit_code == 0);
  auto rep = Json::parse(r.output);
  CHECK(rep["tests"][0]["pass"] == true);
  CHECK(rep["criteria"]["categorical"]["amplification"] == false);
  CHECK(rep["worldview"]["holds"] == true);
  CHECK(rep["pass"] == true);
}

TEST_CASE("the alpha test fails with the documented margin", "[cli]") {
  using S = Rational;
  // observed disparity 2/5, output disparity 1/4, alpha 1/2 -> statistic 1/20
  auto u = Distribution<S>::uniform(b01());
  Distribution<S> o0(b01(), {frac<S>(1, 10), frac<S>(9, 10)});
  Distribution<S> o1(b01(), {frac<S>(1, 2), frac<S>(1, 2)});
  Distribution<S> p0(b01(), {frac<S>(3, 4), frac<S>(1, 4)});
  auto p1 = Distribution<S>::point_mass(b01(), Label::number(0));
  auto path = write_temp("alpha.json",
                         joint_to_json(product_joint<S>(u, u, o0, o1, p0, p1)).dump());
  auto r = run_cli("audit --input " + path +
                   " --tests alpha --alpha 0.5 --criterion none --mode rational");
  CHECK(r.exit_code == 1);
  auto rep = Json::parse(r.output);
  CHECK(rep["tests"][0]["statistic"] == "1/20");
  CHECK(rep["tests"][0]["margin"] == "-1/20");
}

TEST_CASE("distance command", "[cli]") {
  auto d1 = write_temp("d1.json",
                       distribution_to_json(Distribution<Rational>(
                           sup({0, 1, 2}), {Rational(1, 2), Rational(1, 2), Rational(0)}))
                           .dump());
  auto d2 = write_temp("d2.json",
                       distribution_to_json(Distribution<Rational>(
                           sup({0, 1, 2}), {Rational(0), Rational(1, 2), Rational(1, 2)}))
                           .dump());

  SECTION("identical files are at distance zero") {
    auto r = run_cli("distance " + d1 + " " + d1 + " --mode rational");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "0\n");
  }

  SECTION("total variation by default") {
    auto r = run_cli("distance " + d1 + " " + d2 + " --mode rational");
    CHECK(r.output == "1/2\n");
  }

  SECTION("earthmover under the absolute metric") {
    auto r = run_cli("distance " + d1 + " " + d2 + " --metric absolute --mode rational");
    CHECK(r.output == "1\n");
  }

  SECTION("earthmover under an explicit matrix metric") {
    Json m = {{"labels", {0, 1, 2}},
              {"d", {{"0", "2", "2"}, {"2", "0", "2"}, {"2", "2", "0"}}}};
    auto metric = write_temp("metric.json", m.dump());
    auto r = run_cli("distance " + d1 + " " + d2 + " --metric " + metric + " --mode rational");
    CHECK(r.output == "1\n");  // 2 x tv = 2 * 1/2 under the uniform metric
  }
}

TEST_CASE("construct then audit round trip", "[cli]") {
  auto out = (temp_dir() / "pp.json").string();
  auto r = run_cli("construct pp-adversarial --yo0 0.6 --yo1 0.3 --epsilon 0.02 --out " + out);
  REQUIRE(r.exit_code == 0);
  auto dist = joint_from_json<Rational>(load_json_file(out));
  CHECK(predictive_parity(dist, Rational(0)).pass);
  CHECK(output_disparity(dist) == Rational(49, 50));

  auto audit = run_cli("audit --input " + out + " --tests pp --criterion none --mode rational");
  CHECK(audit.exit_code == 0);
  auto rep = Json::parse(audit.output);
  CHECK(rep["tests"][0]["pass"] == true);
}

TEST_CASE("verify command runs a suite and reports", "[cli]") {
  auto out = (temp_dir() / "verify.json").string();
  auto r = run_cli("verify --theorem L1 --trials 50 --seed 4 --out " + out);
  CHECK(r.exit_code == 0);
  auto rep = load_json_file(out);
  CHECK(rep["schema"] == "construct-audit/1");
  CHECK(rep["suites"][0]["theorem"] == "L1");
  CHECK(rep["suites"][0]["failures"] == 0);
  CHECK(rep["pass"] == true);

  auto unknown = run_cli("verify --theorem T99 --trials 5");
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("malformed inputs exit with the usage code", "[cli]") {
  auto bad = write_temp("bad.json", "{ not json");
  CHECK(run_cli("audit --input " + bad).exit_code == 2);
  auto missing = run_cli("audit --input /nonexistent/nope.json");
  CHECK(missing.exit_code == 2);
  CHECK(run_cli("nonsense-subcommand").exit_code == 2);
}

TEST_CASE("CSV datasets audit end to end", "[cli]") {
  std::string csv = "z,y_obs,y_pred,y_construct\n";
  for (int k = 0; k < 2; ++k) {
    csv += "0,1,1,1\n0,0,0,0\n1,1,0,1\n1,0,1,0\n";
  }
  auto path = write_temp("data.csv", csv);
  auto r = run_cli("audit --input " + path + " --tests dp,misclass --mode rational");
  auto rep = Json::parse(r.output);
  CHECK(rep["input"]["format"] == "csv");
  CHECK(rep["input"]["records"] == 8);
  CHECK(rep["tests"][0]["pass"] == true);   // both groups split predictions evenly
  CHECK(rep["tests"][1]["pass"] == false);  // group 1 is always wrong
  CHECK(r.exit_code == 1);
}

TEST_CASE("the mode environment variable sets the default", "[cli]") {
  auto path = write_temp("env.json", joint_to_json(xor_example<Rational>()).dump());
  std::string cmd = "CONSTRUCT_AUDIT_MODE=rational " + cli_binary() + " audit --input " + path +
                    " --tests dp --criterion none 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), buf.size(), pipe)) output += buf.data();
  pclose(pipe);
  auto rep = Json::parse(output);
  CHECK(rep["mode"] == "rational");
}
