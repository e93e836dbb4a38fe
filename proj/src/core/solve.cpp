#include "solve.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>

#include <fftw3.h>

#include "error.hpp"
#include "parallel.hpp"

namespace polyjump {

const char* to_string(Method m) {
  switch (m) {
    case Method::direct_measure:
      return "direct-measure";
    case Method::corrector:
      return "corrector";
    case Method::regularized:
      return "regularized";
  }
  return "?";
}

const char* to_string(LinearSolver s) { return s == LinearSolver::cg ? "cg" : "fft"; }

void SparseOperator::multiply(const std::vector<double>& x, std::vector<double>& y, int workers) const {
  y.resize(rows());
  parallel_for(rows(), workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      double s = 0.0;
      for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += vals[k] * x[cols[k]];
      y[r] = s;
    }
  });
}

SparseOperator assemble_laplacian(const Grid& grid, const GridField& dirichlet) {
  SparseOperator op;
  op.grid = grid;
  op.interior = grid.n - 2;
  const int m = op.interior;
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  const std::size_t nrows = static_cast<std::size_t>(m) * m;
  op.row_ptr.reserve(nrows + 1);
  op.cols.reserve(5 * nrows);
  op.vals.reserve(5 * nrows);
  op.diag.assign(nrows, 4.0 * inv_h2);
  op.boundary.assign(nrows, 0.0);
  op.dirichlet = GridField::zeros(grid);
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i)
      if (grid.is_boundary(i, j)) op.dirichlet(i, j) = dirichlet(i, j);

  op.row_ptr.push_back(0);
  for (int j = 1; j <= m; ++j) {
    for (int i = 1; i <= m; ++i) {
      const std::size_t r = static_cast<std::size_t>(j - 1) * m + (i - 1);
      const int ni[4] = {i, i - 1, i + 1, i}, nj[4] = {j - 1, j, j, j + 1};
      // Column order: south, west, self, east, north.
      for (int k = 0; k < 4; ++k) {
        if (k == 2) {
          op.cols.push_back(static_cast<int>(r));
          op.vals.push_back(4.0 * inv_h2);
        }
        if (grid.is_boundary(ni[k], nj[k])) {
          op.boundary[r] += op.dirichlet(ni[k], nj[k]) * inv_h2;
        } else {
          op.cols.push_back((nj[k] - 1) * m + (ni[k] - 1));
          op.vals.push_back(-inv_h2);
        }
      }
      op.row_ptr.push_back(static_cast<int>(op.cols.size()));
    }
  }
  return op;
}

SparseOperator assemble_laplacian(const Grid& grid, const BoundaryFn& dirichlet) {
  GridField bc = GridField::zeros(grid);
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i)
      if (grid.is_boundary(i, j)) bc(i, j) = dirichlet(grid.node(i, j));
  return assemble_laplacian(grid, bc);
}

double default_tolerance(int n) { return n <= 257 ? 1e-10 : 1e-9; }

namespace {

double norm2(const std::vector<double>& v, int workers) {
  return std::sqrt(blocked_sum(v.size(), workers, [&](std::size_t i) { return v[i] * v[i]; }));
}

double true_relative_residual(const SparseOperator& op, const std::vector<double>& x, const std::vector<double>& b,
                              double bnorm, int workers) {
  std::vector<double> ax;
  op.multiply(x, ax, workers);
  const double rn = std::sqrt(blocked_sum(b.size(), workers, [&](std::size_t i) {
    const double r = b[i] - ax[i];
    return r * r;
  }));
  return bnorm > 0.0 ? rn / bnorm : rn;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

CgResult cg_solve(const SparseOperator& op, const std::vector<double>& rhs, double tol, int maxiter, int workers) {
  if (!(tol >= 1e-12 && tol <= 1e-4)) throw Error(ErrorCode::invalid_argument, "cg tolerance must lie in [1e-12, 1e-4]");
  if (rhs.size() != op.rows()) throw Error(ErrorCode::invalid_argument, "right-hand side size mismatch");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = op.rows();
  CgResult res;
  res.x.assign(n, 0.0);
  res.report.solver = "cg";
  const double bnorm = norm2(rhs, workers);
  if (bnorm == 0.0) {
    res.report.wall_seconds = seconds_since(t0);
    return res;
  }

  std::vector<double> r = rhs, z(n), p(n), q(n);
  auto precondition = [&] {
    parallel_for(n, workers, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) z[i] = r[i] / op.diag[i];
    });
  };
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    return blocked_sum(n, workers, [&](std::size_t i) { return a[i] * b[i]; });
  };

  int it = 0;
  for (int restart = 0; restart < 4; ++restart) {
    precondition();
    p = z;
    double rz = dot(r, z);
    double rel = norm2(r, workers) / bnorm;
    while (rel > tol && it < maxiter) {
      op.multiply(p, q, workers);
      const double alpha = rz / dot(p, q);
      parallel_for(n, workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          res.x[i] += alpha * p[i];
          r[i] -= alpha * q[i];
        }
      });
      precondition();
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      parallel_for(n, workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) p[i] = z[i] + beta * p[i];
      });
      rel = norm2(r, workers) / bnorm;
      ++it;
    }
    const double true_rel = true_relative_residual(op, res.x, rhs, bnorm, workers);
    res.report.relative_residual = true_rel;
    if (true_rel <= tol || it >= maxiter) break;
    // Recursive residual drifted below the true one: restart from b - A x.
    std::vector<double> ax;
    op.multiply(res.x, ax, workers);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ax[i];
  }
  res.report.iterations = it;
  res.report.converged = res.report.relative_residual <= tol;
  res.report.wall_seconds = seconds_since(t0);
  return res;
}

CgResult fft_solve(const SparseOperator& op, const std::vector<double>& rhs, bool measure_plan) {
  if (rhs.size() != op.rows()) throw Error(ErrorCode::invalid_argument, "right-hand side size mismatch");
  const auto t0 = std::chrono::steady_clock::now();
  const int m = op.interior;
  const double h = op.grid.h;
  CgResult res;
  res.report.solver = "fft";

  static std::mutex plan_mutex;  // FFTW planning is not thread safe
  double* buf = fftw_alloc_real(rhs.size());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    plan = fftw_plan_r2r_2d(m, m, buf, buf, FFTW_RODFT00, FFTW_RODFT00,
                                measure_plan ? FFTW_MEASURE : FFTW_ESTIMATE);
  }
  std::copy(rhs.begin(), rhs.end(), buf);
  fftw_execute(plan);
  std::vector<double> lam(m);
  for (int k = 0; k < m; ++k) {
    const double s = std::sin(std::numbers::pi * (k + 1) / (2.0 * (m + 1)));
    lam[k] = 4.0 * s * s / (h * h);
  }
  const double scale = 1.0 / (4.0 * (m + 1.0) * (m + 1.0));
  for (int b = 0; b < m; ++b)
    for (int a = 0; a < m; ++a) buf[static_cast<std::size_t>(b) * m + a] *= scale / (lam[a] + lam[b]);
  fftw_execute(plan);
  res.x.assign(buf, buf + rhs.size());
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);

  const double bnorm = norm2(rhs, 1);
  res.report.relative_residual = bnorm > 0.0 ? true_relative_residual(op, res.x, rhs, bnorm, 1) : 0.0;
  res.report.wall_seconds = seconds_since(t0);
  return res;
}

GridField solve_dirichlet(const GridField& f, const GridField& bc, const SolveOptions& opt, SolveReport* report) {
  const Grid& g = f.grid;
  const SparseOperator op = assemble_laplacian(g, bc);
  const int m = op.interior;
  std::vector<double> rhs(op.rows());
  for (int j = 1; j <= m; ++j)
    for (int i = 1; i <= m; ++i) {
      const std::size_t r = static_cast<std::size_t>(j - 1) * m + (i - 1);
      rhs[r] = f(i, j) + op.boundary[r];
    }
  const double tol = opt.tol > 0.0 ? opt.tol : default_tolerance(g.n);
  const int maxiter = opt.maxiter > 0 ? opt.maxiter : 20 * g.n;
  CgResult res = opt.solver == LinearSolver::fft ? fft_solve(op, rhs, opt.measure_fft_plan) : cg_solve(op, rhs, tol, maxiter, opt.workers);
  if (!res.report.converged) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "cg stopped after %d iterations at relative residual %.3e (tol %.1e)",
                  res.report.iterations, res.report.relative_residual, tol);
    throw Error(ErrorCode::max_iter_exceeded, buf);
  }
  GridField u = op.dirichlet;
  for (int j = 1; j <= m; ++j)
    for (int i = 1; i <= m; ++i) u(i, j) = res.x[static_cast<std::size_t>(j - 1) * m + (i - 1)];
  if (!u.all_finite()) throw Error(ErrorCode::no_convergence, "solution contains non-finite values");
  if (report) *report = res.report;
  return u;
}

namespace {

GridField sample_boundary(const Grid& g, const BoundaryFn& bc) {
  GridField out = GridField::zeros(g);
  if (!bc) return out;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      if (g.is_boundary(i, j)) out(i, j) = bc(g.node(i, j));
  return out;
}

}  // namespace

MeasureSolution solve_measure_poisson(const GeometryCache& cache, const Curve& curve, const SurfaceDensity& q,
                                      const BoundaryFn& bc, Method method, const SolveOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid& g = cache.grid;
  MeasureSolution out;
  out.eps = opt.eps > 0.0 ? opt.eps : tube_radius(curve, g.box);
  GridField bcf = sample_boundary(g, bc);
  const double inv_h2 = 1.0 / (g.h * g.h);

  switch (method) {
    case Method::direct_measure:
    case Method::regularized: {
      const MeasureLoad load = method == Method::direct_measure
                                   ? surface_load_collocation(cache, curve, q, opt.samples_per_cell)
                                   : surface_load_regularized(cache, curve, q, opt.regularized_width_cells, out.eps);
      GridField f = load.load;
      for (double& v : f.values) v *= inv_h2;
      out.total_mass = load.total_mass;
      out.v = solve_dirichlet(f, bcf, opt, &out.report);
      break;
    }
    case Method::corrector: {
      const CorrectorBundle b = build_corrector(cache, curve, q, out.eps, opt.workers);
      GridField f = b.residual_load;
      for (double& v : f.values) v = -v;
      for (std::size_t k = 0; k < bcf.values.size(); ++k) bcf.values[k] -= b.w.values[k];
      GridField h = solve_dirichlet(f, bcf, opt, &out.report);
      for (std::size_t k = 0; k < h.values.size(); ++k) h.values[k] += b.w.values[k];
      out.v = std::move(h);
      out.total_mass = surface_integral(curve, q);
      break;
    }
  }
  out.report.method = to_string(method);
  out.report.wall_seconds = seconds_since(t0);
  return out;
}

CascadeSolution solve_navier_cascade(int m, const GeometryCache& cache, const Curve& curve, const SurfaceDensity& q,
                                     const std::vector<BoundaryFn>& bcs, Method method, const SolveOptions& opt) {
  if (m < 1 || m > 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "order m = %d not supported (1..4)", m);
    throw Error(ErrorCode::order_unsupported, buf);
  }
  if (!bcs.empty() && static_cast<int>(bcs.size()) != m)
    throw Error(ErrorCode::invalid_argument, "cascade needs one boundary function per level");
  const Grid& g = cache.grid;
  auto bc_at = [&](int j) -> BoundaryFn { return bcs.empty() ? BoundaryFn{} : bcs[j]; };

  CascadeSolution sol;
  sol.m = m;
  sol.method = method;
  sol.levels.resize(m);
  sol.reports.resize(m);
  MeasureSolution top = solve_measure_poisson(cache, curve, q, bc_at(m - 1), method, opt);
  sol.eps = top.eps;
  sol.levels[m - 1] = std::move(top.v);
  sol.reports[m - 1] = top.report;
  for (int j = m - 2; j >= 0; --j) {
    const auto t0 = std::chrono::steady_clock::now();
    sol.levels[j] = solve_dirichlet(sol.levels[j + 1], sample_boundary(g, bc_at(j)), opt, &sol.reports[j]);
    sol.reports[j].method = to_string(method);
    sol.reports[j].wall_seconds = seconds_since(t0);
  }
  return sol;
}

ProblemRun solve_problem(const Problem& pb, int n) {
  const Grid g = Grid::make(pb.box, n);
  ProblemRun run;
  run.cache = build_geometry_cache(pb.curve, g, pb.opt.workers);
  run.solution = solve_navier_cascade(pb.m, run.cache, pb.curve, pb.q, pb.bcs, pb.method, pb.opt);
  return run;
}

}  // namespace polyjump
