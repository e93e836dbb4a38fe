#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "assembly.hpp"
#include "geometry.hpp"
#include "solve.hpp"

namespace polyjump {

enum class Command { solve, convergence, jumps, tv, altcaf, validate_lemma23 };
const char* to_string(Command c);

struct CurveSpec {
  CurveKind kind = CurveKind::circle;
  Vec2 center;
  double radius = 0.5;
  double a = 0.6, b = 0.4;
  double r0 = 0.5;
  std::vector<CosineMode> modes;
  Curve build() const;
};

struct DensitySpec {
  bool cosine = false;
  double value = 1.0;
  double mean = 1.0, amplitude = 0.5;
  int k = 1;
  SurfaceDensity build() const;
};

enum class BcSource { zero, oracle, polynomial };

struct BcSpec {
  BcSource source = BcSource::zero;
  std::vector<double> oracle;                 // v_j(1) on the unit circle, one per level
  std::vector<std::array<double, 6>> poly;    // c, cx, cy, cxx, cxy, cyy per level
};

struct Thresholds {
  double max_error = 0.0;  // 0: 2e-3 for m = 1, 5e-3 for m = 2, 1e-2 above
  int accuracy_n = 257;
  double min_order = 1.8;
  double baseline_max_order = 1.5;
  double jump_median = 0.0;  // 0: 0.05 for m = 1, 0.10 otherwise
  double tangential_ratio = 0.10;
  int regularity_from_n = 129;
  double reg_off_lo = 0.8, reg_off_hi = 1.2;
  double reg_cross_lo = 1.6, reg_cross_hi = 2.4;
  double tv_fraction = 0.6;
  double tv_jump_rel = 0.25;
  double tv_step_rel = 0.05;
  double mass_rel = 0.0;  // 0: 1e-8 for direct-measure, 1e-2 for regularized
  double ac_el = 1e-6;
  double ac_stationary = 1e-4;
  double ac_continuity = 1e-10;
  std::string expect_free_boundary = "any";  // any | true | false
  double lemma_order = 1.5;
};

struct RunConfig {
  Command command = Command::solve;
  std::string out = "out";
  int workers = 1;
  bool deterministic = true;
  bool export_fields = true;

  Rect box;
  std::vector<int> grids{129};

  int m = 1;
  Method method = Method::corrector;
  std::string baseline = "none";  // none | direct-measure | regularized
  LinearSolver solver = LinearSolver::cg;
  double tol = 0.0;
  int maxiter = 0;
  double regularized_width = 2.0;
  int samples_per_cell = 8;
  int probes = 64;

  CurveSpec curve;
  DensitySpec density;
  BcSpec bc;

  double u0 = 0.07, rho_min = 0.05, rho_max = 0.95, rho_step = 0.002;

  int bumps = 3;
  std::uint64_t seed = 20240601;
  double bump_radius = 0.0;  // 0: 0.9 times the tube radius
  std::vector<std::pair<int, int>> pairs{{1, 1}, {1, 2}, {2, 2}};

  std::vector<std::string> tv_components{"xx", "xy", "yy"};
  std::string tv_mode = "gradient";  // gradient | step
  double tube_cells = 3.0;

  Thresholds thr;

  /// Every key as resolved after defaults, section.key -> printable value.
  std::map<std::string, std::string> resolved;

  double max_error_threshold() const;
  double jump_threshold() const;
  double mass_threshold() const;
  SolveOptions solve_options() const;
  Problem problem() const;
};

/// Parses the key = value format and validates every parameter, including the
/// geometry of the curve against the domain. Throws Error(config_error) naming
/// the offending section.key; geometry failures keep their own error code.
/// A non-empty `command` replaces run.command.
RunConfig parse_config(const std::string& text, const std::string& command = "");
RunConfig load_config(const std::string& path, const std::string& command = "");

}  // namespace polyjump
