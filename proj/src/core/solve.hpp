#pragma once

#include <functional>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "geometry.hpp"
#include "grid.hpp"

namespace polyjump {

using BoundaryFn = std::function<double(Vec2)>;

/// -Laplace_h on the (n-2)^2 interior nodes with Dirichlet elimination, stored
/// row-compressed. `boundary` holds the eliminated Dirichlet contributions
/// (already divided by h^2) so that A u = f + boundary.
struct SparseOperator {
  Grid grid;
  int interior = 0;  // interior nodes per side, n - 2
  std::vector<int> row_ptr;
  std::vector<int> cols;
  std::vector<double> vals;
  std::vector<double> diag;
  std::vector<double> boundary;
  GridField dirichlet;  // boundary values, zero in the interior

  std::size_t rows() const { return diag.size(); }
  void multiply(const std::vector<double>& x, std::vector<double>& y, int workers = 1) const;
};

SparseOperator assemble_laplacian(const Grid& grid, const BoundaryFn& dirichlet);
SparseOperator assemble_laplacian(const Grid& grid, const GridField& dirichlet);

enum class Method { direct_measure, corrector, regularized };
enum class LinearSolver { cg, fft };

const char* to_string(Method m);
const char* to_string(LinearSolver s);

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  std::string method;
  std::string solver;
  double wall_seconds = 0.0;
  bool converged = true;
};

struct CgResult {
  std::vector<double> x;
  SolveReport report;
};

/// Jacobi-preconditioned conjugate gradients. Dot products use fixed-block
/// summation, so results do not depend on `workers`. If maxiter is reached the
/// best iterate is returned with converged = false.
CgResult cg_solve(const SparseOperator& op, const std::vector<double>& rhs, double tol, int maxiter, int workers = 1);

/// Direct solve by two-dimensional sine transforms (exact up to roundoff).
/// measure_plan lets FFTW time candidate plans; the chosen plan, and so the
/// last bits of the result, may then differ between runs.
CgResult fft_solve(const SparseOperator& op, const std::vector<double>& rhs, bool measure_plan = false);

/// Default relative tolerance: 1e-10 for n <= 257, 1e-9 above.
double default_tolerance(int n);

struct SolveOptions {
  double tol = 0.0;  // 0 selects default_tolerance(n)
  int maxiter = 0;   // 0 selects 20 n
  int workers = 1;
  LinearSolver solver = LinearSolver::cg;
  double regularized_width_cells = 2.0;
  int samples_per_cell = 8;
  double eps = 0.0;  // tube radius; 0 selects tube_radius(curve, box)
  bool measure_fft_plan = false;
};

/// Solves -Laplace_h u = f in the interior with u = bc on the boundary. Throws
/// MaxIterExceeded if the iterative solver does not reach the tolerance.
GridField solve_dirichlet(const GridField& f, const GridField& bc, const SolveOptions& opt, SolveReport* report);

struct MeasureSolution {
  GridField v;
  SolveReport report;
  double eps = 0.0;
  double total_mass = 0.0;
};

/// -Laplace v = Q H1|Gamma in the box, v = bc on the boundary.
MeasureSolution solve_measure_poisson(const GeometryCache& cache, const Curve& curve, const SurfaceDensity& q,
                                      const BoundaryFn& bc, Method method, const SolveOptions& opt = {});

struct CascadeSolution {
  int m = 1;
  Method method = Method::corrector;
  std::vector<GridField> levels;  // levels[j] = v_j = (-Laplace)^j u, levels[0] = u
  std::vector<SolveReport> reports;
  double eps = 0.0;

  const GridField& u() const { return levels.front(); }
};

/// Navier cascade for (-Laplace)^m u = Q H1|Gamma: v_{m-1} solves the measure
/// problem with bcs[m-1], then -Laplace v_j = v_{j+1} with bcs[j]. m <= 4.
CascadeSolution solve_navier_cascade(int m, const GeometryCache& cache, const Curve& curve, const SurfaceDensity& q,
                                     const std::vector<BoundaryFn>& bcs, Method method, const SolveOptions& opt = {});

/// Everything needed to solve one configuration on a grid of a given size.
struct Problem {
  Rect box;
  Curve curve = Curve::circle({0.0, 0.0}, 0.5);
  SurfaceDensity q = SurfaceDensity::constant(1.0);
  int m = 1;
  Method method = Method::corrector;
  std::vector<BoundaryFn> bcs;  // empty means zero data on every level
  SolveOptions opt;
};

struct ProblemRun {
  GeometryCache cache;
  CascadeSolution solution;
};

ProblemRun solve_problem(const Problem& pb, int n);

}  // namespace polyjump
