#include "altcaf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "error.hpp"

namespace polyjump {

namespace {

constexpr double kPi = std::numbers::pi;

// int_lo^hi r (alpha + beta ln r)^2 dr, exact.
double outer_bending_integral(double alpha, double beta, double lo, double hi) {
  const auto prim = [&](double r) {
    const double l = std::log(r), r2 = r * r;
    const double i0 = 0.5 * r2;
    const double i1 = 0.5 * r2 * l - 0.25 * r2;
    const double i2 = 0.5 * r2 * l * l - 0.5 * r2 * l + 0.25 * r2;
    return alpha * alpha * i0 + 2.0 * alpha * beta * i1 + beta * beta * i2;
  };
  return prim(hi) - prim(lo);
}

double laplacian_at(const RadialAltCafSolution& s, double r) {
  if (r < s.rho) return 4.0 * s.b;
  return 4.0 * s.d + 4.0 * s.f * (std::log(r) + 1.0);
}

// Solve without the sign-pattern check; used for derivative stencils too.
RadialAltCafSolution solve_system(double rho, double u0) {
  const double l = std::log(rho), r2 = rho * rho;
  Eigen::Matrix<double, 6, 6> A;
  Eigen::Matrix<double, 6, 1> rhs;
  A.setZero();
  rhs.setZero();
  // unknowns: a b c d e f
  A.row(0) << 1, r2, 0, 0, 0, 0;
  A.row(1) << 0, 0, 1, r2, l, r2 * l;
  A.row(2) << 0, 2 * rho, 0, -2 * rho, -1 / rho, -(2 * rho * l + rho);
  A.row(3) << 0, 2, 0, -2, 1 / r2, -(2 * l + 3);
  A.row(4) << 0, 0, 1, 1, 0, 0;
  rhs(4) = u0;
  A.row(5) << 0, 0, 0, 4, 0, 4;
  const Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 6, 6>> qr(A);
  const auto R = qr.matrixR();
  const double rmax = std::abs(R(0, 0));
  double rmin = rmax;
  for (int k = 0; k < 6; ++k) rmin = std::min(rmin, std::abs(R(k, k)));
  if (!(rmin > 1e-13 * rmax)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "matching system singular at rho = %.6g", rho);
    throw Error(ErrorCode::singular_system, buf);
  }
  const Eigen::Matrix<double, 6, 1> x = qr.solve(rhs);
  RadialAltCafSolution s;
  s.has_free_boundary = true;
  s.u0 = u0;
  s.rho = rho;
  s.a = x(0);
  s.b = x(1);
  s.c = x(2);
  s.d = x(3);
  s.e = x(4);
  s.f = x(5);
  const double inner = 16.0 * kPi * s.b * s.b * r2;  // 2 pi int_0^rho (4b)^2 r dr
  const double outer = 2.0 * kPi * outer_bending_integral(4.0 * s.d + 4.0 * s.f, 4.0 * s.f, rho, 1.0);
  s.bending = inner + outer;
  s.measure = kPi * (1.0 - r2);
  s.energy = s.bending + s.measure;
  const auto out = s.one_sided(true);
  s.q_geom = out[3] - s.one_sided(false)[3];
  s.q_el = -1.0 / (2.0 * std::abs(out[1]));
  return s;
}

double energy_at(double rho, double u0) { return solve_system(rho, u0).energy; }

double slope_at(double rho, double u0) {
  constexpr double kStep = 1e-5;
  return (energy_at(rho + kStep, u0) - energy_at(rho - kStep, u0)) / (2.0 * kStep);
}

}  // namespace

std::array<double, 4> RadialAltCafSolution::profile(double r) const {
  if (!has_free_boundary) return {u0, 0.0, 0.0, 0.0};
  if (r < rho) return {a + b * r * r, 2.0 * b * r, 2.0 * b, 0.0};
  const double l = std::log(r);
  return {c + d * r * r + e * l + f * r * r * l, 2.0 * d * r + e / r + f * (2.0 * r * l + r),
          2.0 * d - e / (r * r) + f * (2.0 * l + 3.0), 2.0 * e / (r * r * r) + 2.0 * f / r};
}

std::array<double, 4> RadialAltCafSolution::one_sided(bool outer) const {
  if (outer) return profile(rho);
  return {a + b * rho * rho, 2.0 * b * rho, 2.0 * b, 0.0};
}

RadialAltCafSolution radial_constrained_solve(double rho, double u0) {
  if (!(rho >= 0.05 && rho <= 0.95))
    throw Error(ErrorCode::invalid_argument, "free-boundary radius must lie in [0.05, 0.95]");
  if (!(u0 > 0.0)) throw Error(ErrorCode::invalid_argument, "boundary datum u0 must be positive");
  RadialAltCafSolution s = solve_system(rho, u0);
  // u < 0 on (0, rho), u > 0 on (rho, 1].
  constexpr int kChecks = 200;
  for (int k = 0; k < kChecks; ++k) {
    const double ri = rho * k / kChecks;
    const double ro = rho + (1.0 - rho) * (k + 1.0) / kChecks;
    if (!(s.profile(ri)[0] < 0.0) || !(s.profile(ro)[0] > 0.0)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "candidate at rho = %.6g does not change sign exactly once", rho);
      throw Error(ErrorCode::sign_pattern_violated, buf);
    }
  }
  return s;
}

EnergyScan energy_scan(double u0, double lo, double hi, double step) {
  if (!(u0 > 0.0)) throw Error(ErrorCode::invalid_argument, "boundary datum u0 must be positive");
  if (!(step > 0.0) || !(hi > lo)) throw Error(ErrorCode::invalid_argument, "invalid scan range");
  EnergyScan scan;
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  int best = -1;
  for (int k = 0; k < count; ++k) {
    EnergySample s;
    s.rho = std::min(hi, lo + k * step);
    try {
      const RadialAltCafSolution sol = radial_constrained_solve(s.rho, u0);
      s.feasible = true;
      s.bending = sol.bending;
      s.measure = sol.measure;
      s.energy = sol.energy;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::sign_pattern_violated && e.code() != ErrorCode::singular_system) throw;
    }
    scan.samples.push_back(s);
    if (s.feasible && (best < 0 || s.energy < scan.samples[best].energy)) best = k;
  }

  RadialAltCafSolution trivial;
  trivial.u0 = u0;
  trivial.energy = kPi;
  trivial.measure = kPi;
  if (best < 0 || scan.samples[best].energy > kPi) {
    scan.best = trivial;
    return scan;
  }

  // Golden section on the bracket around the best sample.
  double a = std::max(lo, scan.samples[best].rho - step), b = std::min(hi, scan.samples[best].rho + step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = energy_at(x1, u0), f2 = energy_at(x2, u0);
  while (b - a > 1e-6) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = energy_at(x1, u0);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = energy_at(x2, u0);
    }
  }
  double rho = 0.5 * (a + b);
  // Near a flat minimum E is only resolved to sqrt(machine eps) in rho; polish
  // by bisection on the centred-difference slope when it brackets a root.
  double sa = slope_at(a, u0), sb = slope_at(b, u0);
  if (sa < 0.0 && sb > 0.0) {
    for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
      const double mid = 0.5 * (a + b);
      const double sm = slope_at(mid, u0);
      if (sm < 0.0) a = mid; else b = mid;
    }
    rho = 0.5 * (a + b);
  }
  RadialAltCafSolution sol = radial_constrained_solve(std::clamp(rho, 0.05, 0.95), u0);
  scan.best = sol.energy < kPi ? sol : trivial;
  return scan;
}

ELReport verify_euler_lagrange(const RadialAltCafSolution& sol) {
  ELReport rep;
  if (!sol.has_free_boundary) throw Error(ErrorCode::invalid_argument, "no free boundary to verify");
  rep.el_relative = std::abs(sol.q_geom - sol.q_el) / std::abs(sol.q_el);
  rep.dE_drho = slope_at(sol.rho, sol.u0);
  rep.stationary = std::abs(rep.dE_drho) <= 1e-4 * sol.energy;

  // Weak equation int Lap u Lap phi dx = -1/2 int_Gamma phi / |grad u| against
  // radial bumps straddling the free boundary.
  const double rho = sol.rho;
  const double grad = std::abs(sol.one_sided(true)[1]);
  const double room = std::min(rho, 1.0 - rho);
  const double widths[3] = {0.6 * room, 0.8 * room, 0.9 * room};
  const double shifts[3] = {0.0, 0.8, -0.8};
  for (int k = 0; k < 3; ++k) {
    const double w = widths[k];
    const double c = rho + shifts[k] * (room - w);
    auto bump = [&](double r, int order) {
      const double z = (r - c) / w, q = z * z;
      if (q >= 1.0) return 0.0;
      const double om = 1.0 - q;
      const double phi = std::exp(1.0 - 1.0 / om);
      const double phi_q = -phi / (om * om);
      const double phi_qq = phi * (1.0 / (om * om * om * om) - 2.0 / (om * om * om));
      const double qr = 2.0 * z / w;
      if (order == 0) return phi;
      const double d1 = phi_q * qr;
      const double d2 = phi_qq * qr * qr + phi_q * 2.0 / (w * w);
      return d2 + d1 / r;  // Laplacian
    };
    const auto integrand = [&](double r) { return laplacian_at(sol, r) * bump(r, 2) * 2.0 * kPi * r; };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double lhs = GK::integrate(integrand, c - w, rho, 15, 1e-13) + GK::integrate(integrand, rho, c + w, 15, 1e-13);
    const double rhs = -0.5 * 2.0 * kPi * rho * bump(rho, 0) / grad;
    rep.weak_residuals.push_back(std::abs(lhs - rhs) / std::abs(rhs));
  }

  // Perturb outward; near the outer scan limit perturb inward instead.
  rep.off_rho = rho + 0.05 <= 0.95 ? rho + 0.05 : rho - 0.05;
  {
    const RadialAltCafSolution off = solve_system(rep.off_rho, sol.u0);
    rep.off_el_relative = std::abs(off.q_geom - off.q_el) / std::abs(off.q_el);
    rep.off_ratio = rep.el_relative > 0.0 ? rep.off_el_relative / rep.el_relative : INFINITY;
  }
  return rep;
}

AltCafRegularity altcaf_regularity_report(const RadialAltCafSolution& sol, int samples) {
  AltCafRegularity rep;
  if (!sol.has_free_boundary) return rep;
  const auto in = sol.one_sided(false), out = sol.one_sided(true);
  rep.u3_inner = in[3];
  rep.u3_outer = out[3];
  rep.u3_jump = out[3] - in[3];
  rep.grad_at_rho = std::abs(out[1]);
  rep.c0_gap = std::abs(out[0] - in[0]);
  rep.c1_gap = std::abs(out[1] - in[1]);
  rep.c2_gap = std::abs(out[2] - in[2]);
  rep.sup_u3 = std::max(std::abs(in[3]), std::abs(out[3]));
  double prev = sol.profile(1e-12)[0];
  for (int k = 1; k <= samples; ++k) {
    const double r = static_cast<double>(k) / samples;
    const auto p = sol.profile(r);
    rep.sup_u3 = std::max(rep.sup_u3, std::abs(p[3]));
    if ((p[0] > 0.0) != (prev > 0.0) && p[0] != 0.0) ++rep.zero_crossings;
    if (p[0] != 0.0) prev = p[0];
  }
  return rep;
}

}  // namespace polyjump
