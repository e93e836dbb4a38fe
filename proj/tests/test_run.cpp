#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "run.hpp"

using namespace polyjump;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("polyjump_test_run_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_text(const std::string& text, const fs::path& dir, const std::string& command = "") {
  const fs::path cfg = dir / "case.ini";
  std::ofstream(cfg) << text;
  std::ostringstream log, err;
  RunOverrides ov;
  ov.out = (dir / "out").string();
  ov.command = command;
  return run_config_file(cfg.string(), ov, log, err);
}

nlohmann::json summary(const fs::path& dir) {
  std::ifstream in(dir / "out" / "summary.json");
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("config errors give exit 2 and write nothing") {
  const fs::path d = scratch("bad");
  CHECK(run_text("[run]\ncommand = solve\n[curve]\nradius = 1.5\n", d) == kExitConfig);
  CHECK(run_text("[run]\ncommand = solve\nfoo = 1\n", d) == kExitConfig);
  CHECK_FALSE(fs::exists(d / "out"));
  std::ostringstream log, err;
  CHECK(run_config_file((d / "missing.ini").string(), {}, log, err) == kExitConfig);
  fs::remove_all(d);
}

TEST_CASE("solve run writes reports and cites invariant ids") {
  const fs::path d = scratch("solve");
  const int rc = run_text(
      "[run]\ncommand = solve\n[grid]\nn = 129\n[bc]\nsource = oracle\nvalues = 0\n[assert]\naccuracy_n = 129\nmax_error = 5e-3\n", d);
  CHECK(rc == kExitOk);
  for (const char* f : {"summary.json", "manifest.json", "solve_reports.csv", "errors.csv"})
    CHECK(fs::exists(d / "out" / f));
  const auto s = summary(d);
  CHECK(s["exit_code"] == 0);
  REQUIRE(s["assertions"].size() > 0);
  for (const auto& a : s["assertions"]) {
    CHECK(a["id"].get<std::string>().rfind("INV-", 0) == 0);
    CHECK(a["pass"] == true);
  }
  fs::remove_all(d);
}

TEST_CASE("failed assertion gives exit 1") {
  const fs::path d = scratch("fail");
  const int rc = run_text(
      "[run]\ncommand = solve\n[grid]\nn = 65\n[bc]\nsource = oracle\nvalues = 0\n"
      "[assert]\naccuracy_n = 65\nmax_error = 1e-9\n",
      d);
  CHECK(rc == kExitAssertion);
  CHECK(summary(d)["status"] == "fail");
  fs::remove_all(d);
}

TEST_CASE("altcaf run") {
  const fs::path d = scratch("altcaf");
  CHECK(run_text("[run]\ncommand = altcaf\n[altcaf]\nu0 = 0.07\n", d) == kExitOk);
  for (const char* f : {"energy.csv", "profile.csv", "verdict.json"}) CHECK(fs::exists(d / "out" / f));
  fs::remove_all(d);
}

TEST_CASE("solver failure gives exit 3") {
  const fs::path d = scratch("solver");
  CHECK(run_text("[run]\ncommand = solve\n[grid]\nn = 65\n[problem]\nmaxiter = 2\n", d) == kExitSolver);
  fs::remove_all(d);
}
