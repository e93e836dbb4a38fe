// Command-line front end; everything goes through the C API.
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "polyjump/polyjump.h"

int main(int argc, char** argv) {
  CLI::App app{"polyjump: polyharmonic equations with surface-measure sources"};
  app.set_version_flag("--version", std::string(pj_version()));

  std::string command, config, out;
  int workers = 0;
  bool strict = false, quiet = false;
  app.add_option("command", command, "solve | convergence | jumps | tv | altcaf | validate-lemma23 (default: run.command)")
      ->check(CLI::IsMember({"solve", "convergence", "jumps", "tv", "altcaf", "validate-lemma23"}));
  app.add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory (overrides run.out)");
  app.add_option("--workers", workers, "worker threads (overrides run.workers)")->check(CLI::Range(1, 256));
  app.add_flag("--strict", strict, "treat warnings as assertion failures");
  app.add_flag("-q,--quiet", quiet, "no progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  int exit_code = 0;
  const pj_status st = pj_run_config(config.c_str(), command.empty() ? nullptr : command.c_str(),
                                     out.empty() ? nullptr : out.c_str(), workers, strict ? 1 : 0, quiet ? 1 : 0,
                                     &exit_code);
  if (st != PJ_OK) {
    std::fprintf(stderr, "polyjump: %s: %s\n", pj_status_string(st), pj_last_error());
    return 3;
  }
  return exit_code;
}
