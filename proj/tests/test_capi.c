/* Plain C client of the shared library. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "polyjump/polyjump.h"

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

int main(void) {
  pj_curve* circle = NULL;
  pj_problem* pb = NULL;
  pj_solution* sol = NULL;
  double pt[2], nu[2], kappa, t, d, eps, err, med, mx;
  int n, m, valid, iters;
  double h, res;

  EXPECT(strcmp(pj_version(), "0.1.0") == 0);
  EXPECT(pj_curve_circle(0.0, 0.0, -1.0, &circle) == PJ_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(pj_last_error()) > 0);
  EXPECT(pj_curve_circle(0.0, 0.0, 0.5, &circle) == PJ_OK);
  EXPECT(pj_curve_point(circle, 0.0, pt, nu, &kappa) == PJ_OK);
  EXPECT(fabs(pt[0] - 0.5) < 1e-15 && fabs(kappa - 2.0) < 1e-14);
  EXPECT(pj_curve_project(circle, 0.25, 0.0, &t, &d, nu) == PJ_OK);
  EXPECT(fabs(d + 0.25) < 1e-14 && fabs(nu[0] - 1.0) < 1e-14);
  EXPECT(pj_tube_radius(circle, -1, 1, -1, 1, &eps) == PJ_OK && fabs(eps - 0.25) < 1e-12);

  EXPECT(pj_problem_create(circle, &pb) == PJ_OK);
  EXPECT(pj_problem_set_order(pb, 7) == PJ_ERR_ORDER_UNSUPPORTED);
  {
    const double zero = 0.0;
    EXPECT(pj_problem_set_bc_oracle(pb, &zero, 1) == PJ_OK);
  }
  EXPECT(pj_solve(pb, 129, &sol) == PJ_OK);
  EXPECT(pj_solution_info(sol, &n, &m, &h) == PJ_OK && n == 129 && m == 1);
  EXPECT(pj_solution_report(sol, 0, &iters, &res) == PJ_OK && iters > 0 && res <= 1e-10);
  EXPECT(pj_solution_oracle_error(sol, &err) == PJ_OK && err < 5e-3);
  {
    double* buf = malloc(sizeof(double) * 129 * 129);
    EXPECT(pj_solution_copy_level(sol, 0, buf, 10) == PJ_ERR_INVALID_ARGUMENT);
    EXPECT(pj_solution_copy_level(sol, 0, buf, 129 * 129) == PJ_OK);
    /* centre: v = -q rho ln rho */
    EXPECT(fabs(buf[64 * 129 + 64] - (-0.5 * log(0.5))) < 5e-3);
    free(buf);
  }
  EXPECT(pj_jump_scan(sol, 32, &med, &mx, &valid) == PJ_OK && valid == 32 && med < 0.05);
  pj_solution_destroy(sol);
  pj_problem_destroy(pb);

  {
    pj_curve* big = NULL;
    EXPECT(pj_curve_circle(0.0, 0.0, 1.5, &big) == PJ_OK);
    EXPECT(pj_problem_create(big, &pb) == PJ_OK);
    EXPECT(pj_solve(pb, 65, &sol) == PJ_ERR_INTERFACE_TOUCHES_BOUNDARY);
    pj_problem_destroy(pb);
    pj_curve_destroy(big);
  }
  pj_curve_destroy(circle);

  {
    pj_altcaf_result r;
    EXPECT(pj_altcaf_minimize(0.07, &r) == PJ_OK);
    EXPECT(r.has_free_boundary == 1 && r.energy < 3.14159 && r.el_relative <= 1e-6 && r.zero_crossings == 1);
    EXPECT(pj_altcaf_minimize(-1.0, &r) == PJ_ERR_INVALID_ARGUMENT);
  }
  EXPECT(pj_solve(NULL, 65, &sol) == PJ_ERR_INVALID_ARGUMENT);
  EXPECT(strcmp(pj_status_string(PJ_OK), "ok") == 0);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
