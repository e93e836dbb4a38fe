#include "polyjump/polyjump.h"

#include <cstring>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "altcaf.hpp"
#include "analysis.hpp"
#include "error.hpp"
#include "oracle.hpp"
#include "report.hpp"
#include "run.hpp"
#include "solve.hpp"

using namespace polyjump;

struct pj_curve {
  Curve curve;
};

struct pj_problem {
  Problem pb;
  std::optional<RadialSolution> oracle;
  std::vector<double> oracle_values;
  double q_const = 1.0;
  bool q_is_constant = true;
};

struct pj_solution {
  Problem pb;
  std::optional<RadialSolution> oracle;
  ProblemRun run;
};

namespace {

thread_local std::string last_error;

pj_status map_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ok: return PJ_OK;
    case ErrorCode::invalid_argument: return PJ_ERR_INVALID_ARGUMENT;
    case ErrorCode::no_convergence: return PJ_ERR_NO_CONVERGENCE;
    case ErrorCode::interface_touches_boundary: return PJ_ERR_INTERFACE_TOUCHES_BOUNDARY;
    case ErrorCode::probe_crosses_interface:
    case ErrorCode::probe_leaves_domain: return PJ_ERR_PROBE;
    case ErrorCode::quadrature_underresolved:
    case ErrorCode::quadrature_tol_not_met: return PJ_ERR_QUADRATURE;
    case ErrorCode::tube_too_narrow:
    case ErrorCode::tube_degenerate:
    case ErrorCode::support_violation: return PJ_ERR_TUBE;
    case ErrorCode::max_iter_exceeded: return PJ_ERR_MAX_ITER;
    case ErrorCode::order_unsupported: return PJ_ERR_ORDER_UNSUPPORTED;
    case ErrorCode::degenerate_fit:
    case ErrorCode::singular_system:
    case ErrorCode::sign_pattern_violated: return PJ_ERR_DEGENERATE;
    case ErrorCode::config_error: return PJ_ERR_CONFIG;
    case ErrorCode::io_error: return PJ_ERR_IO;
  }
  return PJ_ERR_INTERNAL;
}

pj_status fail(pj_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class Fn>
pj_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PJ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PJ_ERR_INTERNAL, e.what());
  }
}

#define PJ_REQUIRE(cond, msg) \
  if (!(cond)) return fail(PJ_ERR_INVALID_ARGUMENT, msg)

pj_status make_curve(Curve c, pj_curve** out) {
  *out = new pj_curve{std::move(c)};
  return PJ_OK;
}

}  // namespace

extern "C" {

const char* pj_version(void) { return kVersion; }

const char* pj_last_error(void) { return last_error.c_str(); }

const char* pj_status_string(pj_status s) {
  switch (s) {
    case PJ_OK: return "ok";
    case PJ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PJ_ERR_NO_CONVERGENCE: return "projection did not converge";
    case PJ_ERR_INTERFACE_TOUCHES_BOUNDARY: return "interface touches the domain boundary";
    case PJ_ERR_PROBE: return "probe unusable";
    case PJ_ERR_QUADRATURE: return "quadrature failure";
    case PJ_ERR_TUBE: return "tube too narrow or degenerate";
    case PJ_ERR_MAX_ITER: return "iteration limit reached";
    case PJ_ERR_ORDER_UNSUPPORTED: return "order not supported";
    case PJ_ERR_DEGENERATE: return "degenerate problem";
    case PJ_ERR_CONFIG: return "configuration error";
    case PJ_ERR_IO: return "i/o error";
    case PJ_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

pj_status pj_curve_circle(double cx, double cy, double radius, pj_curve** out) {
  PJ_REQUIRE(out, "out is null");
  return guarded([&] { return make_curve(Curve::circle({cx, cy}, radius), out); });
}

pj_status pj_curve_ellipse(double cx, double cy, double a, double b, pj_curve** out) {
  PJ_REQUIRE(out, "out is null");
  return guarded([&] { return make_curve(Curve::ellipse({cx, cy}, a, b), out); });
}

pj_status pj_curve_fourier_star(double cx, double cy, double r0, const int* k, const double* amp, size_t n_modes,
                                pj_curve** out) {
  PJ_REQUIRE(out, "out is null");
  PJ_REQUIRE(n_modes == 0 || (k && amp), "mode arrays are null");
  return guarded([&] {
    std::vector<CosineMode> modes;
    for (size_t i = 0; i < n_modes; ++i) modes.push_back({k[i], amp[i]});
    return make_curve(Curve::fourier_star({cx, cy}, r0, modes), out);
  });
}

void pj_curve_destroy(pj_curve* curve) { delete curve; }

pj_status pj_curve_point(const pj_curve* c, double t, double point[2], double normal[2], double* curvature) {
  PJ_REQUIRE(c, "curve is null");
  return guarded([&] {
    const Vec2 p = c->curve.point(t), nu = c->curve.normal(t);
    if (point) point[0] = p.x, point[1] = p.y;
    if (normal) normal[0] = nu.x, normal[1] = nu.y;
    if (curvature) *curvature = c->curve.curvature(t);
    return PJ_OK;
  });
}

pj_status pj_curve_project(const pj_curve* c, double x, double y, double* t, double* d, double normal[2]) {
  PJ_REQUIRE(c, "curve is null");
  return guarded([&] {
    const Projection pr = project_to_curve(c->curve, {x, y});
    if (t) *t = pr.t;
    if (d) *d = pr.d;
    if (normal) normal[0] = pr.normal.x, normal[1] = pr.normal.y;
    return PJ_OK;
  });
}

pj_status pj_tube_radius(const pj_curve* c, double x0, double x1, double y0, double y1, double* eps) {
  PJ_REQUIRE(c && eps, "null argument");
  return guarded([&] {
    *eps = tube_radius(c->curve, Rect{x0, x1, y0, y1});
    return PJ_OK;
  });
}

pj_status pj_problem_create(const pj_curve* c, pj_problem** out) {
  PJ_REQUIRE(c && out, "null argument");
  return guarded([&] {
    auto p = std::make_unique<pj_problem>();
    p->pb.curve = c->curve;
    *out = p.release();
    return PJ_OK;
  });
}

void pj_problem_destroy(pj_problem* p) { delete p; }

pj_status pj_problem_set_domain(pj_problem* p, double x0, double x1, double y0, double y1) {
  PJ_REQUIRE(p, "problem is null");
  return guarded([&] {
    const Rect box{x0, x1, y0, y1};
    Grid::make(box, 17);      // checks the square shape
    tube_radius(p->pb.curve, box);  // checks containment
    p->pb.box = box;
    return PJ_OK;
  });
}

pj_status pj_problem_set_order(pj_problem* p, int m) {
  PJ_REQUIRE(p, "problem is null");
  if (m < 1 || m > 4) return fail(PJ_ERR_ORDER_UNSUPPORTED, "order m must be in 1..4");
  p->pb.m = m;
  p->pb.bcs.clear();
  p->oracle.reset();
  return PJ_OK;
}

pj_status pj_problem_set_method(pj_problem* p, pj_method method) {
  PJ_REQUIRE(p, "problem is null");
  switch (method) {
    case PJ_METHOD_DIRECT_MEASURE: p->pb.method = Method::direct_measure; break;
    case PJ_METHOD_CORRECTOR: p->pb.method = Method::corrector; break;
    case PJ_METHOD_REGULARIZED: p->pb.method = Method::regularized; break;
    default: return fail(PJ_ERR_INVALID_ARGUMENT, "unknown method");
  }
  return PJ_OK;
}

pj_status pj_problem_set_solver(pj_problem* p, pj_solver solver, double tol, int maxiter) {
  PJ_REQUIRE(p, "problem is null");
  PJ_REQUIRE(solver == PJ_SOLVER_CG || solver == PJ_SOLVER_FFT, "unknown solver");
  PJ_REQUIRE(tol == 0.0 || (tol >= 1e-12 && tol <= 1e-4), "tol must be 0 or in [1e-12, 1e-4]");
  PJ_REQUIRE(maxiter >= 0, "maxiter must be >= 0");
  p->pb.opt.solver = solver == PJ_SOLVER_CG ? LinearSolver::cg : LinearSolver::fft;
  p->pb.opt.tol = tol;
  p->pb.opt.maxiter = maxiter;
  return PJ_OK;
}

pj_status pj_problem_set_workers(pj_problem* p, int workers) {
  PJ_REQUIRE(p, "problem is null");
  PJ_REQUIRE(workers >= 1 && workers <= 256, "workers must be in 1..256");
  p->pb.opt.workers = workers;
  return PJ_OK;
}

pj_status pj_problem_set_density_constant(pj_problem* p, double q) {
  PJ_REQUIRE(p, "problem is null");
  PJ_REQUIRE(std::isfinite(q), "density must be finite");
  p->pb.q = SurfaceDensity::constant(q);
  p->q_const = q;
  p->q_is_constant = true;
  p->oracle.reset();
  if (!p->oracle_values.empty()) p->pb.bcs.clear();
  p->oracle_values.clear();
  return PJ_OK;
}

pj_status pj_problem_set_density_cosine(pj_problem* p, double mean, double amplitude, int k) {
  PJ_REQUIRE(p, "problem is null");
  PJ_REQUIRE(std::isfinite(mean) && std::isfinite(amplitude) && k >= 0, "invalid cosine density");
  p->pb.q = SurfaceDensity::cosine_mode(mean, amplitude, k);
  p->q_is_constant = false;
  p->oracle.reset();
  if (!p->oracle_values.empty()) p->pb.bcs.clear();
  p->oracle_values.clear();
  return PJ_OK;
}

pj_status pj_problem_set_bc_oracle(pj_problem* p, const double* values, size_t count) {
  PJ_REQUIRE(p, "problem is null");
  PJ_REQUIRE(p->pb.curve.kind() == CurveKind::circle, "oracle data needs a circle");
  PJ_REQUIRE(p->q_is_constant, "oracle data needs a constant density");
  PJ_REQUIRE(static_cast<int>(count) == p->pb.m, "one value per level is required");
  PJ_REQUIRE(count == 0 || values, "values is null");
  return guarded([&] {
    std::vector<double> v(values, values + count);
    RadialSolution ex = radial_polyharmonic_exact(p->pb.m, p->q_const, p->pb.curve.radius(), v);
    ex.center = p->pb.curve.center();
    p->pb.bcs = ex.boundary_list();
    p->oracle = std::move(ex);
    p->oracle_values = std::move(v);
    return PJ_OK;
  });
}

pj_status pj_problem_set_bc_zero(pj_problem* p) {
  PJ_REQUIRE(p, "problem is null");
  p->pb.bcs.clear();
  p->oracle.reset();
  p->oracle_values.clear();
  return PJ_OK;
}

pj_status pj_solve(const pj_problem* p, int n, pj_solution** out) {
  PJ_REQUIRE(p && out, "null argument");
  return guarded([&] {
    auto s = std::make_unique<pj_solution>();
    s->pb = p->pb;
    s->oracle = p->oracle;
    s->run = solve_problem(p->pb, n);
    *out = s.release();
    return PJ_OK;
  });
}

void pj_solution_destroy(pj_solution* s) { delete s; }

pj_status pj_solution_info(const pj_solution* s, int* n, int* m, double* h) {
  PJ_REQUIRE(s, "solution is null");
  if (n) *n = s->run.cache.grid.n;
  if (m) *m = s->run.solution.m;
  if (h) *h = s->run.cache.grid.h;
  return PJ_OK;
}

pj_status pj_solution_copy_level(const pj_solution* s, int level, double* buf, size_t len) {
  PJ_REQUIRE(s && buf, "null argument");
  PJ_REQUIRE(level >= 0 && level < s->run.solution.m, "level out of range");
  const auto& v = s->run.solution.levels[level].values;
  PJ_REQUIRE(len == v.size(), "buffer length must be n*n");
  std::memcpy(buf, v.data(), v.size() * sizeof(double));
  return PJ_OK;
}

pj_status pj_solution_report(const pj_solution* s, int level, int* iterations, double* residual) {
  PJ_REQUIRE(s, "solution is null");
  PJ_REQUIRE(level >= 0 && level < s->run.solution.m, "level out of range");
  const SolveReport& r = s->run.solution.reports[level];
  if (iterations) *iterations = r.iterations;
  if (residual) *residual = r.relative_residual;
  return PJ_OK;
}

pj_status pj_solution_oracle_error(const pj_solution* s, double* max_error) {
  PJ_REQUIRE(s && max_error, "null argument");
  PJ_REQUIRE(s->oracle.has_value(), "problem has no oracle boundary data");
  const GridField& u = s->run.solution.u();
  const Grid& g = u.grid;
  double e = 0.0;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) e = std::max(e, std::abs(u(i, j) - s->oracle->at(0, g.node(i, j))));
  *max_error = e;
  return PJ_OK;
}

pj_status pj_jump_scan(const pj_solution* s, int n_probes, double* median_error, double* max_error,
                       int* valid_probes) {
  PJ_REQUIRE(s, "solution is null");
  return guarded([&] {
    const JumpReport r = jump_scan(s->run.solution, s->run.cache, s->pb.curve, s->pb.q, n_probes, s->pb.opt.workers);
    if (median_error) *median_error = r.median_error;
    if (max_error) *max_error = r.max_error;
    if (valid_probes) *valid_probes = r.valid;
    return PJ_OK;
  });
}

pj_status pj_altcaf_minimize(double u0, pj_altcaf_result* out) {
  PJ_REQUIRE(out, "out is null");
  PJ_REQUIRE(u0 > 0.0 && std::isfinite(u0), "u0 must be positive");
  return guarded([&] {
    const EnergyScan sc = energy_scan(u0);
    const RadialAltCafSolution& s = sc.best;
    *out = pj_altcaf_result{};
    out->has_free_boundary = s.has_free_boundary ? 1 : 0;
    out->energy = s.energy;
    out->bending = s.bending;
    if (s.has_free_boundary) {
      const ELReport el = verify_euler_lagrange(s);
      const AltCafRegularity rg = altcaf_regularity_report(s);
      out->rho = s.rho;
      out->q_geom = s.q_geom;
      out->q_el = s.q_el;
      out->el_relative = el.el_relative;
      out->dE_drho = el.dE_drho;
      out->u3_jump = rg.u3_jump;
      out->c2_gap = rg.c2_gap;
      out->zero_crossings = rg.zero_crossings;
    }
    return PJ_OK;
  });
}

pj_status pj_run_config(const char* path, const char* command, const char* out_dir, int workers, int strict,
                        int quiet, int* exit_code) {
  PJ_REQUIRE(path && exit_code, "null argument");
  return guarded([&] {
    RunOverrides ov;
    ov.command = command ? command : "";
    ov.out = out_dir ? out_dir : "";
    ov.workers = workers > 0 ? workers : 0;
    ov.strict = strict != 0;
    std::ostringstream sink, errs;
    *exit_code = run_config_file(path, ov, quiet ? static_cast<std::ostream&>(sink) : std::cout, errs);
    if (!errs.str().empty()) {
      std::cerr << errs.str();
      last_error = errs.str();
      while (!last_error.empty() && last_error.back() == '\n') last_error.pop_back();
    }
    return PJ_OK;
  });
}

}  // extern "C"
