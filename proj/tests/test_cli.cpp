#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ldp/cli.hpp"

using namespace ldp;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = LDPKIT_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("ldpkit_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

cli::RunOutcome run_config(const std::string& file, const fs::path& out,
                           std::vector<std::string> overrides = {}) {
  cli::RunOptions o;
  o.config_path = kConfigs + "/" + file;
  o.out_dir = out.string();
  o.overrides = std::move(overrides);
  o.quiet = true;
  std::ostringstream sout, serr;
  return cli::run(o, sout, serr);
}

cli::RunOutcome run_text(const std::string& text, const fs::path& out) {
  cli::RunOptions o;
  o.config_text = text;
  o.out_dir = out.string();
  o.quiet = true;
  std::ostringstream sout, serr;
  return cli::run(o, sout, serr);
}

}  // namespace

TEST_CASE("check run on the rotational model passes") {
  const auto dir = scratch("check");
  const auto r = run_config("check_rotational_growth.cfg", dir);
  CHECK(r.status == cli::kOk);
  const auto csv = slurp(dir / "condition_report.csv");
  CHECK(csv.rfind("condition_id,samples,violations,verdict\n", 0) == 0);
  CHECK(csv.find("growth,10000,0,pass") != std::string::npos);
}

TEST_CASE("rate run for Brownian motion") {
  const auto dir = scratch("rate");
  const auto r = run_config("rate_brownian.cfg", dir);
  CHECK(r.status == cli::kOk);
  CHECK(r.summary.find("I ≈ 0.5000, residual < 1e-6") != std::string::npos);
  const auto csv = slurp(dir / "rate.csv");
  CHECK(csv.rfind("target,value,residual,grad_norm,converged,stages\n", 0) == 0);
}

TEST_CASE("validation errors map to status 2") {
  CHECK(run_config("simulate_ou.cfg", scratch("v1"), {"epsilon=-1"}).summary.find(
            "epsilon must be ≥ 0") != std::string::npos);
  CHECK(run_config("simulate_ou.cfg", scratch("v2"), {"epsilon=-1"}).status == cli::kValidation);
  CHECK(run_config("missing.cfg", scratch("v3")).status == cli::kValidation);
  CHECK(run_text("[model]\nname = unknown\n[experiment]\nkind = simulate\n", scratch("v4")).status ==
        cli::kValidation);
}

TEST_CASE("divergence maps to status 3") {
  const auto r = run_text(
      "[model]\nname = custom\ndrift = x1^3\ndiffusion = 1\n"
      "[experiment]\nkind = simulate\nx0 = 2\nepsilon = 1\nn = 16\nreplicas = 50\n",
      scratch("diverge"));
  CHECK(r.status == cli::kDivergence);
}

TEST_CASE("unreachable rate target maps to status 4") {
  const auto r = run_text(
      "[model]\nname = sqrt-drift\n[experiment]\nkind = rate\nx0 = 1\ntargets = -1\n"
      "N = 10\nsubsteps = 1\n",
      scratch("notconv"));
  CHECK(r.status == cli::kNotConverged);
  CHECK(r.summary.find("not converged") != std::string::npos);
}

TEST_CASE("re-running from the embedded configuration reproduces every artifact") {
  for (const char* file : {"simulate_ou.cfg", "lemma1_cubic.cfg", "rate_brownian.cfg",
                           "osgood_sqrt.cfg", "skeleton_ou.cfg"}) {
    const auto a = scratch(std::string("rt_a_") + file);
    const auto b = scratch(std::string("rt_b_") + file);
    const auto first = run_config(file, a, {"seed=5"});
    REQUIRE(first.status == cli::kOk);
    const auto embedded = cli::extract_resolved_config(first.summary);
    CHECK(embedded.find("seed = 5") != std::string::npos);
    const auto second = run_text(embedded, b);
    REQUIRE(second.status == cli::kOk);
    CHECK(first.artifacts == second.artifacts);
    for (const auto& name : first.artifacts)
      if (name.ends_with(".csv")) CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name);
  }
}

TEST_CASE("model listing") {
  std::ostringstream out;
  cli::list_models(out);
  const auto s = out.str();
  CHECK(s.find("brownian") != std::string::npos);
  CHECK(s.find("rotational(r)") != std::string::npos);
  CHECK(s.find("growth condition lhs = 0") != std::string::npos);
  CHECK(s.find("cubic") != std::string::npos);
  CHECK(s.find("need truncate") != std::string::npos);
}

TEST_CASE("every shipped config validates") {
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".cfg") continue;
    auto raw = config::parse_file(entry.path().string());
    CHECK_NOTHROW(config::resolve(raw));
  }
}
