// End-to-end exit-code contract of the CLI binary. The test runner exports
// WCHAOS_CLI with the binary path; without it these tests are skipped.
#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

std::string cli_path() {
  const char* p = std::getenv("WCHAOS_CLI");
  return p ? std::string(p) : std::string();
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  RunResult res;
  FILE* pipe = popen((cli_path() + " " + args + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << text;
  return path;
}

const char* kChiSquareSpec = R"({"dim": 1, "components": [
  {"name": "F1", "order": 2, "coeffs": [{"idx": [0,0], "value": 1.0}]}]})";

}  // namespace

TEST_CASE("cli: exit-code contract") {
  if (cli_path().empty()) SKIP("WCHAOS_CLI not set");
  const auto spec = write_temp("wchaos_cli_test_spec.json", kChiSquareSpec);

  SECTION("cumulant on a valid spec") {
    const auto r = run("cumulant --spec " + spec.string() + " --m 3 --no-timings");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"routes_agree\": true") != std::string::npos);
    CHECK(r.output.find("\"oracle\": 8") != std::string::npos);
    const auto parsed = nlohmann::json::parse(r.output);
    CHECK(parsed["results"]["closed_form_averaged"].get<double>() == 8.0);
  }

  SECTION("bounds on a valid spec") {
    const auto r = run("bounds --spec " + spec.string() + " --no-timings");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"delta_le_psi\": true") != std::string::npos);
    CHECK_NOTHROW(nlohmann::json::parse(r.output));
  }

  SECTION("covariance-level multi-index agrees across routes") {
    const auto r = run("cumulant --spec " + spec.string() + " --m 2 --no-timings");
    CHECK(r.exit_code == 0);
    const auto parsed = nlohmann::json::parse(r.output);
    CHECK(parsed["results"]["oracle"].get<double>() == 2.0);
  }

  SECTION("malformed spec file exits 64") {
    const auto bad = write_temp("wchaos_cli_test_bad.json", "{ nope");
    CHECK(run("cumulant --spec " + bad.string() + " --m 1 --no-timings").exit_code == 64);
  }

  SECTION("missing spec file exits 64") {
    CHECK(run("bounds --spec /nonexistent/x.json --no-timings").exit_code == 64);
  }

  SECTION("multi-index parse errors exit 64") {
    CHECK(run("cumulant --spec " + spec.string() + " --m 1,2 --no-timings").exit_code == 64);
    CHECK(run("cumulant --spec " + spec.string() + " --m abc --no-timings").exit_code == 64);
    CHECK(run("cumulant --spec " + spec.string() + " --m 0 --no-timings").exit_code == 64);
  }

  SECTION("missing required flag exits 64") {
    CHECK(run("cumulant --m 2 --no-timings").exit_code == 64);
  }

  SECTION("order cap exceeded exits 65") {
    const auto big = write_temp("wchaos_cli_test_big.json",
                                R"({"dim": 1, "components": [{"name": "F", "order": 6,
                                    "coeffs": [{"idx": [0,0,0,0,0,0], "value": 1.0}]}]})");
    CHECK(run("cumulant --spec " + big.string() + " --m 3 --no-timings").exit_code == 65);
  }

  SECTION("verify passes and the negative control fails") {
    CHECK(run("verify --instances 5 --no-timings").exit_code == 0);
    CHECK(run("verify --instances 5 --corrupt-constant --no-timings").exit_code == 2);
  }

  SECTION("demo and simulate succeed") {
    CHECK(run("demo-fourth-moment --n 1,2,4 --no-timings").exit_code == 0);
    const auto r =
        run("simulate --spec " + spec.string() + " --m 2 --samples 10000 --no-timings");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"oracle\": 2") != std::string::npos);
  }

  SECTION("reports are byte-identical across runs with timings suppressed") {
    const std::string cmd = "verify --instances 10 --seed 9 --no-timings";
    CHECK(run(cmd).output == run(cmd).output);
  }
}
