#ifndef POLYJUMP_H
#define POLYJUMP_H

#include <stddef.h>

#if defined(_WIN32)
#define PJ_API __declspec(dllexport)
#else
#define PJ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pj_status {
  PJ_OK = 0,
  PJ_ERR_INVALID_ARGUMENT = 1,
  PJ_ERR_NO_CONVERGENCE = 2,
  PJ_ERR_INTERFACE_TOUCHES_BOUNDARY = 3,
  PJ_ERR_PROBE = 4,
  PJ_ERR_QUADRATURE = 5,
  PJ_ERR_TUBE = 6,
  PJ_ERR_MAX_ITER = 7,
  PJ_ERR_ORDER_UNSUPPORTED = 8,
  PJ_ERR_DEGENERATE = 9,
  PJ_ERR_CONFIG = 10,
  PJ_ERR_IO = 11,
  PJ_ERR_INTERNAL = 12
} pj_status;

typedef enum pj_method { PJ_METHOD_DIRECT_MEASURE = 0, PJ_METHOD_CORRECTOR = 1, PJ_METHOD_REGULARIZED = 2 } pj_method;

typedef enum pj_solver { PJ_SOLVER_CG = 0, PJ_SOLVER_FFT = 1 } pj_solver;

typedef struct pj_curve pj_curve;
typedef struct pj_problem pj_problem;
typedef struct pj_solution pj_solution;

/* Library version, e.g. "0.1.0". */
PJ_API const char* pj_version(void);

/* Message of the last failed call on the calling thread ("" if none). */
PJ_API const char* pj_last_error(void);

PJ_API const char* pj_status_string(pj_status status);

/* Curves. Parameter t runs over [0, 2 pi); the normal points out of the
   enclosed region and d is negative inside. */
PJ_API pj_status pj_curve_circle(double cx, double cy, double radius, pj_curve** out);
PJ_API pj_status pj_curve_ellipse(double cx, double cy, double a, double b, pj_curve** out);
/* r(t) = r0 + sum amp[i] cos(k[i] t) */
PJ_API pj_status pj_curve_fourier_star(double cx, double cy, double r0, const int* k, const double* amp,
                                       size_t n_modes, pj_curve** out);
PJ_API void pj_curve_destroy(pj_curve* curve);
PJ_API pj_status pj_curve_point(const pj_curve* curve, double t, double point[2], double normal[2],
                                double* curvature);
PJ_API pj_status pj_curve_project(const pj_curve* curve, double x, double y, double* t, double* d,
                                  double normal[2]);
PJ_API pj_status pj_tube_radius(const pj_curve* curve, double x0, double x1, double y0, double y1, double* eps);

/* Problems: (-Laplace)^m u = Q dH1 on the curve, Navier data on the box.
   Defaults: box (-1,1)^2, m = 1, Q = 1, corrector method, CG, zero data. */
PJ_API pj_status pj_problem_create(const pj_curve* curve, pj_problem** out);
PJ_API void pj_problem_destroy(pj_problem* problem);
PJ_API pj_status pj_problem_set_domain(pj_problem* problem, double x0, double x1, double y0, double y1);
PJ_API pj_status pj_problem_set_order(pj_problem* problem, int m);
PJ_API pj_status pj_problem_set_method(pj_problem* problem, pj_method method);
PJ_API pj_status pj_problem_set_solver(pj_problem* problem, pj_solver solver, double tol, int maxiter);
PJ_API pj_status pj_problem_set_workers(pj_problem* problem, int workers);
PJ_API pj_status pj_problem_set_density_constant(pj_problem* problem, double q);
/* Q(t) = mean + amplitude cos(k t) */
PJ_API pj_status pj_problem_set_density_cosine(pj_problem* problem, double mean, double amplitude, int k);
/* Boundary data from the exact radial solution (circle and constant Q only):
   values[j] = (-Laplace)^j u on the unit circle about the curve center,
   count must equal m. */
PJ_API pj_status pj_problem_set_bc_oracle(pj_problem* problem, const double* values, size_t count);
PJ_API pj_status pj_problem_set_bc_zero(pj_problem* problem);

/* Solves on an n x n grid. */
PJ_API pj_status pj_solve(const pj_problem* problem, int n, pj_solution** out);
PJ_API void pj_solution_destroy(pj_solution* solution);
PJ_API pj_status pj_solution_info(const pj_solution* solution, int* n, int* m, double* h);
/* Copies level j = (-Laplace)^j u (row-major, x fastest) into buf of n*n
   doubles. Level 0 is u. */
PJ_API pj_status pj_solution_copy_level(const pj_solution* solution, int level, double* buf, size_t len);
PJ_API pj_status pj_solution_report(const pj_solution* solution, int level, int* iterations, double* residual);
/* Max nodal error of level 0 against the radial solution; needs oracle data. */
PJ_API pj_status pj_solution_oracle_error(const pj_solution* solution, double* max_error);

/* Jump law scan: median and max relative error of the measured jump of the
   (2m-1)-th normal derivative against (-1)^m Q over n_probes probes. */
PJ_API pj_status pj_jump_scan(const pj_solution* solution, int n_probes, double* median_error, double* max_error,
                              int* valid_probes);

typedef struct pj_altcaf_result {
  int has_free_boundary;
  double rho;
  double energy;
  double bending;
  double q_geom;
  double q_el;
  double el_relative;
  double dE_drho;
  double u3_jump;
  double c2_gap;
  int zero_crossings;
} pj_altcaf_result;

/* Radial Alt-Caffarelli minimizer for boundary value u0 > 0. */
PJ_API pj_status pj_altcaf_minimize(double u0, pj_altcaf_result* out);

/* Runs a config file like the command-line tool. command, out_dir may be NULL
   to keep the config values; workers <= 0 keeps run.workers. *exit_code gets
   0 ok, 1 assertion failure, 2 config error, 3 solver failure. quiet != 0
   suppresses progress output. */
PJ_API pj_status pj_run_config(const char* path, const char* command, const char* out_dir, int workers,
                               int strict, int quiet, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
