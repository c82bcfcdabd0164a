#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SUBWEIBULL_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "subweibull_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("norm examples") {
  const Run a = run("norm --family exp --p 1 --method quadrature");
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out)["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
  const Run b = run("norm --family exp --p 1 --method quadrature");
  CHECK(a.out == b.out);

  const Run c = run("norm --family pnormal --param p=3 --p 3 --method analytic");
  REQUIRE(c.code == 0);
  CHECK(json::parse(c.out)["value"].get<double>() == doctest::Approx(std::cbrt(8.0 / 3.0)).epsilon(1e-15));

  const Run d = run("norm --family weibull --param shape=2 --param scale=1 --p 2 --method empirical "
                    "--samples 100000 --seed 3");
  REQUIRE(d.code == 0);
  CHECK(json::parse(d.out)["value"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(0.03));
}

TEST_CASE("tau and conjugate examples") {
  const Run a = run("tau --cumulant exp_centered");
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out)["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  const Run b = run("tau --cumulant exp_centered_sum --n 100");
  REQUIRE(b.code == 0);
  CHECK(json::parse(b.out)["value"].get<double>() == doctest::Approx(11.0).epsilon(1e-6));
  const Run c = run("tau --cumulant gaussian --sigma 2");
  CHECK(json::parse(c.out)["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  const Run d = run("conjugate --f phi_inf --t 3");
  REQUIRE(d.code == 0);
  CHECK(json::parse(d.out)["values"][0]["value"].get<double>() == doctest::Approx(2.5).epsilon(1e-12));
  const Run e = run("conjugate --f quadratic --t 2 --format csv");
  CHECK(e.out == "f,t,value\nquadratic,2,2\n");
}

TEST_CASE("tailbound and bernstein") {
  const Run a = run("tailbound --family exp --p 1 --t 0 2 4");
  REQUIRE(a.code == 0);
  const auto j = json::parse(a.out);
  CHECK(j["norm"].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(j["rows"][0]["bound"] == 1.0);
  CHECK(j["rows"][1]["bound"].get<double>() == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-7));
  for (const auto& row : j["rows"]) CHECK(row["exact_tail"].get<double>() <= row["bound"].get<double>());
  const Run b = run("bernstein --n 10 --t 4 --K 1");
  REQUIRE(b.code == 0);
  CHECK(json::parse(b.out)["rows"][0]["phi1_form"].get<double>() == doctest::Approx(2.0 * std::exp(-5.0)));
}

TEST_CASE("config file and flag override") {
  const auto cfg = scratch("norm.json");
  std::ofstream(cfg) << R"({"family": "weibull", "params": {"shape": 3, "scale": 2}, "p": 3, "method": "analytic"})";
  const Run a = run("norm --config " + cfg.string());
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out)["value"].get<double>() == doctest::Approx(2.0 * std::cbrt(2.0)));
  const Run b = run("norm --config " + cfg.string() + " --param scale=1");
  REQUIRE(b.code == 0);
  CHECK(json::parse(b.out)["value"].get<double>() == doctest::Approx(std::cbrt(2.0)));
  std::ofstream(cfg) << R"({"family": "exp", "p": 1, "method": "analytic", "bogus": 1})";
  CHECK(run("norm --config " + cfg.string()).code == 2);
  std::ofstream(cfg) << "{not json";
  CHECK(run("norm --config " + cfg.string()).code == 2);
}

TEST_CASE("exit codes") {
  CHECK(run("norm --family exp --p 1").code == 2);
  CHECK(run("norm --family exp --p 1 --method magic").code == 2);
  CHECK(run("norm --family exp --p abc --method analytic").code == 2);
  CHECK(run("norm --family weibull --param shape=-1 --param scale=1 --p 1 --method analytic").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("norm --family exp --p 2 --method quadrature").code == 3);
  CHECK(run("norm --family exp --p 2 --method analytic").code == 3);
  CHECK(run("conjugate --f quadratic --t 5 --search-bound 1").code == 3);
}

TEST_CASE("atomic output") {
  const auto out = scratch("out.json");
  std::filesystem::remove(out);
  CHECK(run("norm --family exp --p 2 --method quadrature --out " + out.string()).code == 3);
  CHECK_FALSE(std::filesystem::exists(out));
  CHECK(run("norm --family exp --p 1 --method analytic --out " + out.string()).code == 0);
  REQUIRE(std::filesystem::exists(out));
  std::ifstream in(out);
  CHECK(json::parse(in)["value"] == 2.0);
  for (const auto& entry : std::filesystem::directory_iterator(out.parent_path())) {
    CHECK(entry.path().string().find(".tmp") == std::string::npos);
  }
}

TEST_CASE("concentrate csv is deterministic across worker counts") {
  const std::string args =
      "concentrate --family pnormal --param p=3 --n 16 --p 3 --trials 10000 --seed 5 --bootstrap 10 "
      "--t-max 1 --t-points 6 --format csv";
  const Run a = run(args + " --threads 1");
  const Run b = run(args + " --threads 4");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("family,p,n,trials,seed,", 0) == 0);
}

TEST_CASE("verify without Monte Carlo") {
  const Run r = run("verify --no-mc");
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["checks"].size() >= 20);
}
