#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "bglfrps/bglfrps.hpp"
#include "bglfrps/dataset.hpp"
#include "doctest.h"

using namespace bglfrps;

namespace {

std::string cli_path() { return BGLFRPS_CLI_PATH; }

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string out_file = "./cli_out.txt";
  std::string cmd = cli_path() + " " + args + " > " + out_file + " 2>&1";
  int rc = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream buf;
  buf << in.rdbuf();
  std::remove(out_file.c_str());
  return {WEXITSTATUS(rc), buf.str()};
}

double parse_key(const std::string& text, const std::string& key) {
  auto pos = text.find(key + ": ");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 2));
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run("frobnicate").exit_code == 1);
  CHECK(run("fit --family weibull").exit_code == 1);
  CHECK(run("grid --grid backwards").exit_code == 1);
  CHECK(run("--help").exit_code == 0);
}

TEST_CASE("data errors exit 2") {
  CHECK(run("fit --data ./definitely_missing.csv").exit_code == 2);

  std::ofstream("./bad_rows.csv") << "1,2\n3,oops\n";
  RunResult r = run("fit --data ./bad_rows.csv");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("line 2") != std::string::npos);
  std::remove("./bad_rows.csv");

  std::ofstream("./empty.csv") << "";
  CHECK(run("fit --data ./empty.csv").exit_code == 2);
  std::remove("./empty.csv");

  // five pairs is below the minimum sample size
  std::ofstream("./tiny.csv") << "1,2\n2,1\n3,3\n4,5\n6,6\n";
  CHECK(run("fit --data ./tiny.csv").exit_code == 2);
  std::remove("./tiny.csv");
}

TEST_CASE("eval matches the library") {
  std::string flags =
      "--alpha1 0.0605 --alpha2 0.4197 --alpha3 0.7471 --beta 12.0961 "
      "--gamma 2e-4 --family geometric --theta 0.6128";
  RunResult r = run("eval " + flags + " --y1 0.05 --y2 0.1");
  REQUIRE(r.exit_code == 0);

  auto fam = PowerSeriesFamily::geometric();
  Theta t = fam.make_theta(0.6128);
  BglfrpsParams p{BglfrParams(0.0605, 0.4197, 0.7471, 12.0961, 2e-4),
                  std::move(fam), t};
  CHECK(parse_key(r.output, "cdf") ==
        doctest::Approx(joint_cdf(p, 0.05, 0.1)).epsilon(1e-10));
  CHECK(parse_key(r.output, "pdf") ==
        doctest::Approx(joint_pdf(p, 0.05, 0.1).value).epsilon(1e-10));
  CHECK(parse_key(r.output, "conditional_n_mean") ==
        doctest::Approx(conditional_n_mean(p, 0.05, 0.1)).epsilon(1e-10));
  CHECK(r.output.find("region: Lower") != std::string::npos);

  r = run("eval " + flags + " --y1 0.1 --y2 0.1");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("region: Diagonal") != std::string::npos);

  r = run("eval " + flags + " --y1 0 --y2 0");
  REQUIRE(r.exit_code == 0);
  CHECK(parse_key(r.output, "cdf") == 0.0);
}

TEST_CASE("simulate is deterministic per seed") {
  std::string flags =
      "simulate --alpha1 0.5 --alpha2 0.8 --alpha3 1.1 --beta 2 --gamma 1 "
      "--family geometric --theta 0.45 -n 200 --seed 99";
  RunResult a = run(flags);
  RunResult b = run(flags);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output != run(flags + "1").output);  // seed 991

  RunResult empty = run(
      "simulate -n 0 --family geometric --theta 0.5 --beta 1 --seed 4");
  CHECK(empty.exit_code == 0);
  CHECK(empty.output == "y1,y2\n");
}

TEST_CASE("simulated ties survive a csv round trip") {
  std::string path = "./sim_pairs.csv";
  RunResult r = run(
      "simulate --alpha1 0.5 --alpha2 0.8 --alpha3 1.1 --beta 2 --gamma 1 "
      "--family geometric --theta 0.45 -n 400 --seed 7 --out " + path);
  REQUIRE(r.exit_code == 0);
  auto pairs = load_csv_pairs(path);
  REQUIRE(pairs.size() == 400);
  int ties = 0;
  for (const auto& d : pairs) {
    if (d.y1 == d.y2) ++ties;
  }
  // expected tie rate alpha3 / (alpha1 + alpha2 + alpha3) = 0.458...
  CHECK(ties > 120);
  CHECK(ties < 250);
  std::remove(path.c_str());
}

TEST_CASE("grid emission") {
  RunResult r = run(
      "grid --alpha1 1 --alpha2 1 --alpha3 1 --beta 1 --gamma 1 "
      "--family poly:1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,1 --theta 1 "
      "--grid 0,2,9");
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.output);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++rows;
    std::istringstream cols(line);
    double v = -1.0;
    while (cols >> v) {
    }
    CHECK(v >= 0.0);
  }
  CHECK(rows == 9 * 9 + 9);
}

TEST_CASE("fit on the embedded data reproduces the reference fit") {
  RunResult r = run("fit --data embedded --scale 0.01 --family geometric");
  REQUIRE(r.exit_code == 0);
  CHECK(parse_key(r.output, "loglik") >= 38.30);
  CHECK(parse_key(r.output, "m0") == 24);
  CHECK(parse_key(r.output, "m1") == 16);
  CHECK(parse_key(r.output, "m2") == 2);
  CHECK(r.output.find("aic:") != std::string::npos);
  CHECK(r.output.find("ks_max:") != std::string::npos);

  RunResult j = run(
      "fit --data embedded --scale 0.01 --family geometric --json");
  REQUIRE(j.exit_code == 0);
  CHECK(j.output.find("\"loglik\"") != std::string::npos);
  CHECK(j.output.find("\"m0\": 24") != std::string::npos);
}

TEST_CASE("fit partition counts match a re-ingested simulation") {
  std::string path = "./sim_fit.csv";
  REQUIRE(run(
      "simulate --alpha1 0.5 --alpha2 0.8 --alpha3 1.1 --beta 2 --gamma 1 "
      "--family geometric --theta 0.45 -n 60 --seed 21 --out " + path)
              .exit_code == 0);
  auto pairs = load_csv_pairs(path);
  int m0 = 0, m1 = 0, m2 = 0;
  for (const auto& d : pairs) {
    if (d.y1 == d.y2) ++m0;
    else if (d.y1 < d.y2) ++m1;
    else ++m2;
  }
  RunResult r = run("fit --data " + path + " --family geometric --json");
  CHECK(r.output.find("\"m0\": " + std::to_string(m0)) != std::string::npos);
  CHECK(r.output.find("\"m1\": " + std::to_string(m1)) != std::string::npos);
  CHECK(r.output.find("\"m2\": " + std::to_string(m2)) != std::string::npos);
  std::remove(path.c_str());
}
