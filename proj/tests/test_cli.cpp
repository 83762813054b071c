#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spherecon/cli.hpp"
#include "spherecon/report.hpp"

using namespace spherecon;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json standard_json(int n = 2048) {
  json j;
  j["problem"] = {{"N", 3},
                  {"k", 2},
                  {"f", {{"kind", "pure-power"}, {"p", 3}}},
                  {"V", {{"kind", "shifted-polynomial"}, {"params", {0.1, 1.0, 2.0}}}},
                  {"K", {{"kind", "constant"}, {"params", {1.0}}}}};
  j["lambda"] = {{"r_lo", 1.2}, {"r_hi", 2.8}};
  j["grid"] = {{"r_min", 0.1}, {"r_max", 9.0}, {"n", n}};
  j["sweep"] = {{"eps_list", {0.1, 0.05}}};
  j["growth"] = {{"at_origin", {{"class", "G0_1"}, {"tau", 0.0}}},
                 {"at_infinity", {{"class", "Ginf_2"}, {"sigma", 0.0}}}};
  return j;
}

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("spherecon_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const fs::path& dir, const json& j) {
  const auto path = dir / "config.json";
  std::ofstream out(path);
  out << j.dump(2);
  return path.string();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SPHERECON_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("load_config: minimal config gets defaults") {
  json j;
  j["problem"] = {{"N", 3},
                  {"p", 3.0},
                  {"V", {{"kind", "shifted-polynomial"}, {"params", {0.1, 1.0, 2.0}}}}};
  j["lambda"] = {{"r_lo", 1.2}, {"r_hi", 2.8}};
  const RunConfig cfg = parse_config(j);
  CHECK(cfg.problem.k == 2);
  CHECK(cfg.problem.params.kappa == doctest::Approx(0.125));
  CHECK(cfg.problem.params.mu == doctest::Approx(0.5));
  CHECK(cfg.problem.grid.n == 8192);
  CHECK(cfg.problem.grid.r_min == doctest::Approx(0.3));
  CHECK(cfg.eps_list.size() == 5);
  CHECK(cfg.eps == doctest::Approx(0.0125));
  CHECK(cfg.problem.K(3.7) == 1.0);  // K defaults to 1
  CHECK(cfg.resolved.contains("penalization"));
}

TEST_CASE("load_config: violations are reported with field names") {
  json j = standard_json();
  j["penalization"] = {{"kappa", 5.0}};
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    bool named = false;
    for (const auto& f : e.violated_fields)
      if (f == "penalization.kappa") named = true;
    CHECK(named);
  }

  json j2 = standard_json();
  j2["lambda"] = {{"r_lo", 2.8}, {"r_hi", 1.2}};
  CHECK_THROWS_AS(parse_config(j2), ConfigError);

  json j3 = standard_json();
  j3["sweep"] = {{"eps_list", {0.05, 0.1}}};
  CHECK_THROWS_AS(parse_config(j3), ConfigError);
}

TEST_CASE("cli: aux-pot emits CSV and admissibility JSON, exit 0") {
  const auto dir = temp_dir("auxpot");
  const auto cfgp = write_config(dir, standard_json());
  const int code =
      run_cli("--config " + cfgp + " --out " + (dir / "out").string() + " aux-pot");
  CHECK(code == 0);
  CHECK(fs::exists(dir / "out" / "aux_potential.csv"));
  CHECK(fs::exists(dir / "out" / "aux_potential.json"));
  CHECK(fs::exists(dir / "out" / "resolved_config.json"));
  const auto rep = json::parse(slurp(dir / "out" / "aux_potential.json"));
  CHECK(rep["admissibility"]["pass"].get<bool>());
  CHECK(rep["r_star"].get<double>() == doctest::Approx(1.96568542).epsilon(1e-5));
  CHECK(rep["artifact_version"].is_string());
}

TEST_CASE("cli: kelvin echoes the transformed potentials, exit 0") {
  const auto dir = temp_dir("kelvin");
  json j = standard_json();
  j["problem"]["V"] = {{"kind", "constant"}, {"params", {1.0}}};
  const auto cfgp = write_config(dir, j);
  const int code = run_cli("--config " + cfgp + " --out " + (dir / "out").string() + " kelvin");
  CHECK(code == 0);
  const auto rep = json::parse(slurp(dir / "out" / "kelvin.json"));
  CHECK(rep["V_hat"]["kind"] == "power");
  CHECK(rep["V_hat"]["params"][1].get<double>() == doctest::Approx(-4.0));
  CHECK(rep["K_hat"]["params"][1].get<double>() == doctest::Approx(-2.0));
}

TEST_CASE("cli: validate on the standard config passes, exit 0") {
  const auto dir = temp_dir("validate");
  const auto cfgp = write_config(dir, standard_json(1024));
  const int code = run_cli("--config " + cfgp + " --out " + (dir / "out").string() + " validate");
  CHECK(code == 0);
  const auto rep = json::parse(slurp(dir / "out" / "validate.json"));
  CHECK(rep["pass"].get<bool>());
  CHECK(rep["f_certificate"]["pass"].get<bool>());
  CHECK(rep["growth"]["pass"].get<bool>());
  CHECK(rep["lambda_admissibility"]["pass"].get<bool>());
  CHECK(rep["hardy_positivity"]["lambda_min"].get<double>() >= -1e-8);
}

TEST_CASE("cli: sweep --require-certified with eps = 1 in the list exits 3") {
  const auto dir = temp_dir("sweep3");
  json j = standard_json(2048);
  j["sweep"] = {{"eps_list", {1.0, 0.1}}};
  const auto cfgp = write_config(dir, j);
  const int code = run_cli("--config " + cfgp + " --out " + (dir / "out").string() +
                           " --require-certified sweep");
  CHECK(code == 3);
  const auto rep = json::parse(slurp(dir / "out" / "sweep.json"));
  REQUIRE(rep["reports"].size() == 2);
  CHECK_FALSE(rep["reports"][0]["certified"].get<bool>());  // eps = 1: penalty active
  CHECK(rep["reports"][1]["certified"].get<bool>());
  CHECK(fs::exists(dir / "out" / "profile_eps_0.csv"));
  CHECK(fs::exists(dir / "out" / "profile_eps_1.csv"));
  CHECK(fs::exists(dir / "out" / "envelope_eps_1.dat"));
}

TEST_CASE("cli: solve emits profile, trace and certification, exit 0") {
  const auto dir = temp_dir("solve");
  json j = standard_json(2048);
  j["eps"] = 0.05;
  const auto cfgp = write_config(dir, j);
  const int code = run_cli("--config " + cfgp + " --out " + (dir / "out").string() + " solve");
  CHECK(code == 0);
  CHECK(fs::exists(dir / "out" / "solution.csv"));
  CHECK(fs::exists(dir / "out" / "trace.jsonl"));
  const auto rep = json::parse(slurp(dir / "out" / "solution.json"));
  CHECK(rep["solution"]["certified"].get<bool>());
  CHECK(rep["solution"]["grad_norm"].get<double>() < 1e-8);
}

TEST_CASE("cli: unknown command and bad config exit 2") {
  const auto dir = temp_dir("errors");
  const auto cfgp = write_config(dir, standard_json());
  CHECK(run_cli("--config " + cfgp + " frobnicate") == 2);

  json bad = standard_json();
  bad["penalization"] = {{"kappa", -1.0}};
  const auto badp = write_config(dir, bad);
  CHECK(run_cli("--config " + badp + " validate") == 2);

  std::ofstream((dir / "broken.json")) << "{ not json";
  CHECK(run_cli("--config " + (dir / "broken.json").string() + " validate") == 2);
}

TEST_CASE("cli: identical config and command produce byte-identical reports") {
  const auto dir = temp_dir("determinism");
  const auto cfgp = write_config(dir, standard_json(1024));
  CHECK(run_cli("--config " + cfgp + " --out " + (dir / "a").string() + " aux-pot") == 0);
  CHECK(run_cli("--config " + cfgp + " --out " + (dir / "b").string() + " aux-pot") == 0);
  CHECK(slurp(dir / "a" / "aux_potential.json") == slurp(dir / "b" / "aux_potential.json"));
  CHECK(slurp(dir / "a" / "aux_potential.csv") == slurp(dir / "b" / "aux_potential.csv"));
  CHECK(slurp(dir / "a" / "resolved_config.json") == slurp(dir / "b" / "resolved_config.json"));

  // The blocked reductions make the thread count immaterial as well.
  json j = standard_json(2048);
  j["eps"] = 0.1;
  const auto cfgs = write_config(dir, j);
  CHECK(run_cli("--config " + cfgs + " --out " + (dir / "t1").string() + " --threads 1 solve") ==
        0);
  CHECK(run_cli("--config " + cfgs + " --out " + (dir / "t2").string() + " --threads 2 solve") ==
        0);
  CHECK(slurp(dir / "t1" / "solution.json") == slurp(dir / "t2" / "solution.json"));
  CHECK(slurp(dir / "t1" / "solution.csv") == slurp(dir / "t2" / "solution.csv"));
}

TEST_CASE("cli: limit-solve reports the soliton ground state") {
  const auto dir = temp_dir("limit");
  json j = standard_json();
  j["limit"] = {{"d", 1}, {"a", 1.0}, {"b", 1.0}};
  const auto cfgp = write_config(dir, j);
  const int code =
      run_cli("--config " + cfgp + " --out " + (dir / "out").string() + " limit-solve");
  CHECK(code == 0);
  const auto rep = json::parse(slurp(dir / "out" / "limit_solve.json"));
  CHECK(rep["w0"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(rep["energy"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-5));
  CHECK(fs::exists(dir / "out" / "limit_profile.csv"));
}
