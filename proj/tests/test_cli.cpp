#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int rc = -1;
  std::string out;
};

Run spl(const std::string& args) {
  const std::string cmd = std::string(SPL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  Run r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::filesystem::path tmpdir() {
  auto d = std::filesystem::temp_directory_path() / "spl_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: classify example") {
  const auto r = spl("mapping classify --setting jacobi-pol --alpha 0 --beta 0 --sigma 0.5 --p 1 --q 2");
  CHECK(r.rc == 0);
  CHECK(r.out == "Weak\n");
  CHECK(spl("mapping classify --setting jacobi-pol --sigma 0.5 --p 2 --q inf").out == "RestrictedWeak\n");
  CHECK(spl("mapping classify --setting jacobi-pol --sigma 0.5 --p 1 --q inf").out == "None\n");
}

TEST_CASE("cli: bessel zero and config embedding") {
  const auto r = spl("specfun bessel-zero --nu 0.5 --n 3");
  REQUIRE(r.rc == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::fabs(j["result"]["value"].get<double>() - 3 * M_PI) < 1e-12);
  CHECK(j["command"] == "specfun bessel-zero");
  CHECK(j["config"]["nu"] == 0.5);
  CHECK(j["config"]["seed"] == 1);
  CHECK(j["config"].contains("tol"));
}

TEST_CASE("cli: exit codes") {
  CHECK(spl("kernel poisson --bogus 1").rc == 64);
  CHECK(spl("nosuchgroup").rc == 64);
  CHECK(spl("kernel poisson --setting jacobi-pol --alpha -2 --t 0.5 --x 1 --y 2").rc == 2);
  CHECK(spl("kernel poisson --setting nowhere").rc == 2);
  CHECK(spl("kernel poisson --setting jacobi-pol --alpha abc").rc == 2);
  CHECK(spl("potential kernel --setting jacobi-pol --alpha -0.5 --beta -0.5 --sigma 0.7 --x 1 --y 2").rc == 2);
  CHECK(spl("kernel poisson --setting jacobi-pol --t 1e-7 --x 1 --y 2").rc == 3);
  CHECK(spl("kernel poisson --setting jacobi-pol --t 0.5 --x 1 --y 2").rc == 0);
}

TEST_CASE("cli: config file with flag override") {
  const auto cfg = tmpdir() / "classify.cfg";
  {
    std::ofstream os(cfg);
    os << "# pol(0,0) at sigma = 1/2\nsetting = jacobi-pol\nalpha=0\nbeta = 0\nsigma=0.5\np=1\nq=2\n";
  }
  CHECK(spl("--config " + cfg.string() + " mapping classify").out == "Weak\n");
  CHECK(spl("--config " + cfg.string() + " mapping classify --q inf").out == "None\n");
  {
    std::ofstream os(cfg);
    os << "not a pair\n";
  }
  CHECK(spl("--config " + cfg.string() + " mapping classify").rc == 2);
  CHECK(spl("--config /nonexistent/spl.cfg mapping classify").rc == 2);
}

TEST_CASE("cli: seeded runs are byte-identical") {
  const std::string cmd = "kernel subordination-check --setting fb-natural --nu 0.3 --count 4 --seed 11";
  const auto a = spl(cmd), b = spl(cmd);
  REQUIRE(a.rc == 0);
  CHECK(a.out == b.out);
  const auto c = spl("kernel subordination-check --setting fb-natural --nu 0.3 --count 4 --seed 12");
  CHECK(c.out != a.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["result"]["samples"].size() == 4);
  CHECK(j["result"]["max_rel_error"].get<double>() < 1e-5);
}

TEST_CASE("cli: region grid csv and gnuplot script") {
  const auto dir = tmpdir();
  const auto csv = dir / "grid.csv", gp = dir / "grid.gp";
  const auto r = spl("mapping grid --setting jacobi-fun --alpha -0.7 --beta 0 --sigma 0.25 --grid 16 --out " +
                     csv.string() + " --gnuplot-script " + gp.string());
  REQUIRE(r.rc == 0);
  const auto text = slurp(csv);
  CHECK(text.rfind("inv_p,inv_q,type\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 16 * 16);
  CHECK(slurp(gp).find(csv.string()) != std::string::npos);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["config"]["grid"] == 16);
  // the script needs a csv to point at
  CHECK(spl("mapping grid --setting jacobi-pol --gnuplot-script " + gp.string()).rc == 2);
}

TEST_CASE("cli: envelope compare report") {
  const auto r = spl("envelope compare --setting jacobi-pol --alpha 0.5 --beta 0 --sigma 0.75 --grid 8");
  REQUIRE(r.rc == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto& b = j["result"];
  CHECK(b["ok"] == true);
  CHECK(b["lower_ratio"].get<double>() > 0);
  CHECK(b["upper_ratio"].get<double>() >= b["lower_ratio"].get<double>());
  CHECK(b["argmin"].size() == 2);
}

TEST_CASE("cli: near-activation warning") {
  const auto r = spl("envelope eval --kind potential --setting jacobi-pol --alpha 0.5 --sigma 1.5000001 --x 1 --y 2");
  REQUIRE(r.rc == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["warnings"].size() >= 1);
}
