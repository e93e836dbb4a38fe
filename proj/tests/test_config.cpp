#include <string>

#include "config.hpp"
#include "doctest.h"
#include "error.hpp"

using namespace polyjump;

namespace {

ErrorCode code_of(const std::string& text, const std::string& command = "") {
  try {
    parse_config(text, command);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c = parse_config("[run]\ncommand = solve\n");
  CHECK(c.m == 1);
  CHECK(c.grids == std::vector<int>{129});
  CHECK(c.max_error_threshold() == 2e-3);
  CHECK(parse_config("[run]\ncommand = tv\n").m == 2);
  CHECK(parse_config("[run]\ncommand = validate-lemma23\n").grids == std::vector<int>{65, 129, 257});
}

TEST_CASE("command line command replaces run.command") {
  const RunConfig c = parse_config("[run]\ncommand = solve\n", "altcaf");
  CHECK(c.command == Command::altcaf);
}

TEST_CASE("comments and whitespace") {
  const RunConfig c = parse_config("# header\n[grid]   \n  n = 65 , 129  # two grids\n\n[run]\ncommand=solve\n");
  CHECK(c.grids == std::vector<int>{65, 129});
}

TEST_CASE("rejected configurations") {
  CHECK(code_of("[run]\ncommand = solve\nbogus = 1\n") == ErrorCode::config_error);
  CHECK(message_of("[run]\ncommand = solve\nbogus = 1\n").find("bogus") != std::string::npos);
  CHECK(code_of("[nonsense]\n") == ErrorCode::config_error);
  CHECK(code_of("[run]\ncommand = solve\ncommand = tv\n") == ErrorCode::config_error);
  CHECK(code_of("[run]\ncommand = dance\n") == ErrorCode::config_error);
  CHECK(code_of("[run]\ncommand = solve\n[grid]\nn = 129, 65\n") == ErrorCode::config_error);
  CHECK(code_of("[run]\ncommand = solve\n[grid]\nn = 8\n") == ErrorCode::config_error);
  CHECK(code_of("[run]\ncommand = convergence\n[grid]\nn = 65, 129\n[bc]\nsource = oracle\nvalues = 0\n") ==
        ErrorCode::config_error);
  CHECK(code_of("[run]\ncommand = solve\n[problem]\nm = 5\n") == ErrorCode::config_error);
  CHECK(code_of("[run]\ncommand = solve\n[curve]\nkind = ellipse\nradius = 0.4\n") == ErrorCode::config_error);
  CHECK(code_of("[run]\ncommand = solve\n[curve]\nkind = ellipse\n[bc]\nsource = oracle\nvalues = 0\n") ==
        ErrorCode::config_error);
  CHECK(code_of("[run]\ncommand = solve\n[problem]\nm = 2\n[bc]\nsource = oracle\nvalues = 0\n") ==
        ErrorCode::config_error);
  CHECK(code_of("[run]\ncommand = solve\nworkers = 0\n") == ErrorCode::config_error);
  CHECK(code_of("[run]\ncommand = solve\n[grid]\nn = abc\n") == ErrorCode::config_error);
  CHECK(code_of("key outside = 1\n") == ErrorCode::config_error);
}

TEST_CASE("interface leaving the domain") {
  CHECK(code_of("[run]\ncommand = solve\n[curve]\nradius = 1.5\n") == ErrorCode::interface_touches_boundary);
}

TEST_CASE("regularized width must fit the tube") {
  CHECK(code_of("[run]\ncommand = solve\n[grid]\nn = 17\n[problem]\nmethod = regularized\nregularized_width = 8\n") ==
        ErrorCode::config_error);
}

TEST_CASE("threshold defaults depend on the order") {
  RunConfig c = parse_config("[run]\ncommand = solve\n[problem]\nm = 2\n");
  CHECK(c.max_error_threshold() == 5e-3);
  CHECK(c.jump_threshold() == 0.10);
  c = parse_config("[run]\ncommand = solve\n[problem]\nm = 3\n");
  CHECK(c.max_error_threshold() == 1e-2);
  c = parse_config("[run]\ncommand = solve\n[assert]\nmax_error = 1e-4\n");
  CHECK(c.max_error_threshold() == 1e-4);
}
