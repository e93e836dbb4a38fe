#pragma once

#include <array>
#include <vector>

namespace polyjump {

/// Radial sign-changing candidate on the unit disk: u = a + b r^2 for r < rho,
/// u = c + d r^2 + e ln r + f r^2 ln r for r > rho.
struct RadialAltCafSolution {
  bool has_free_boundary = false;  // false: the constant solution u = u0
  double u0 = 0.0;
  double rho = 0.0;
  double a = 0.0, b = 0.0;
  double c = 0.0, d = 0.0, e = 0.0, f = 0.0;
  double bending = 0.0;
  double measure = 0.0;  // |{u > 0}| = pi (1 - rho^2)
  double energy = 0.0;
  double q_geom = 0.0;   // [u'''](rho), outer minus inner
  double q_el = 0.0;     // -1 / (2 |u'(rho)|)

  /// u and its first three radial derivatives at r (r < rho uses the inner piece).
  std::array<double, 4> profile(double r) const;
  std::array<double, 4> one_sided(bool outer) const;
};

/// Solves the 6x6 matching system for a fixed free-boundary radius and
/// integrates the bending energy exactly. Throws SingularSystem or
/// SignPatternViolated; requires 0.05 <= rho <= 0.95 and u0 > 0.
RadialAltCafSolution radial_constrained_solve(double rho, double u0);

struct EnergySample {
  double rho = 0.0;
  bool feasible = false;
  double bending = 0.0;
  double measure = 0.0;
  double energy = 0.0;
};

struct EnergyScan {
  std::vector<EnergySample> samples;
  RadialAltCafSolution best;  // minimizer, or the constant solution if no candidate beats pi
};

/// E(rho) on [lo, hi] with the given step; the best sample is refined by golden
/// section to 1e-6 and then polished on the centred-difference slope of E.
EnergyScan energy_scan(double u0, double lo = 0.05, double hi = 0.95, double step = 0.002);

struct ELReport {
  double el_relative = 0.0;       // |Q_geom - Q_el| / |Q_el|
  double dE_drho = 0.0;           // centred difference at rho*
  bool stationary = false;        // |dE/drho| <= 1e-4 E
  std::vector<double> weak_residuals;  // relative residuals of the weak equation, one per bump
  double off_rho = 0.0;
  double off_el_relative = 0.0;   // el_relative at rho* + 0.05
  double off_ratio = 0.0;         // off_el_relative / el_relative
};

ELReport verify_euler_lagrange(const RadialAltCafSolution& sol);

struct AltCafRegularity {
  double u3_inner = 0.0;
  double u3_outer = 0.0;
  double u3_jump = 0.0;
  double sup_u3 = 0.0;      // max |u'''| over [0, 1] minus {rho*}
  double grad_at_rho = 0.0; // |u'(rho*)|
  double c0_gap = 0.0;      // |[u]|, |[u']|, |[u'']| at rho*
  double c1_gap = 0.0;
  double c2_gap = 0.0;
  int zero_crossings = 0;   // sign changes of u on (0, 1]
};

AltCafRegularity altcaf_regularity_report(const RadialAltCafSolution& sol, int samples = 4001);

}  // namespace polyjump
