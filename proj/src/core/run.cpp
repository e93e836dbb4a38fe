#include "run.hpp"

#include <fftw3.h>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

#include "altcaf.hpp"
#include "analysis.hpp"
#include "error.hpp"
#include "json.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "report.hpp"

namespace polyjump {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Assertion {
  std::string id;
  std::string name;
  double value = 0.0;
  std::string op;
  double threshold = 0.0;
  double threshold_hi = 0.0;  // only for op "in"
  bool pass = false;
  std::string detail;
};

class Context {
 public:
  Context(const RunConfig& c, std::ostream& l) : cfg(c), log(l), dir(c.out) {}

  const RunConfig& cfg;
  std::ostream& log;
  fs::path dir;
  json results = json::object();
  json timings = json::object();
  std::vector<Assertion> assertions;
  std::vector<std::string> warnings;
  std::vector<std::string> files;

  fs::path file(const std::string& name) {
    files.push_back(name);
    return dir / name;
  }

  void check(const std::string& id, const std::string& name, double value, const std::string& op, double thr,
             const std::string& detail = "", double thr_hi = 0.0) {
    Assertion a{id, name, value, op, thr, thr_hi, false, detail};
    if (op == "<=") a.pass = value <= thr;
    else if (op == ">=") a.pass = value >= thr;
    else if (op == "<") a.pass = value < thr;
    else if (op == ">") a.pass = value > thr;
    else if (op == "==") a.pass = value == thr;
    else if (op == "in") a.pass = value >= thr && value <= thr_hi;
    if (!std::isfinite(value)) a.pass = false;
    log << (a.pass ? "  ok    " : "  FAIL  ") << id << " " << name << " = " << value << "\n";
    assertions.push_back(std::move(a));
  }

  void warn(const std::string& msg) {
    log << "  warning: " << msg << "\n";
    warnings.push_back(msg);
  }

  void time(const std::string& key, Clock::time_point t0) { timings[key] = since(t0); }
};

std::string grid_tag(int n) { return "n" + std::to_string(n); }

json report_json(const SolveReport& r) {
  return {{"iterations", r.iterations}, {"relative_residual", r.relative_residual}, {"method", r.method},
          {"solver", r.solver}, {"converged", r.converged}};
}

// Oracle for configurations with bc.source = oracle.
RadialSolution oracle_of(const RunConfig& cfg) {
  RadialSolution ex = radial_polyharmonic_exact(cfg.m, cfg.density.value, cfg.curve.radius, cfg.bc.oracle);
  ex.center = cfg.curve.center;
  return ex;
}

struct ErrorStats {
  double max_error = 0.0;
  double max_near = 0.0;  // |d| <= 3h
  double max_far = 0.0;
};

ErrorStats level_error(const GridField& f, const GeometryCache& cache, const RadialSolution& ex, int level) {
  ErrorStats s;
  const Grid& g = f.grid;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const std::size_t k = g.index(i, j);
      const double e = std::abs(f.values[k] - ex.at(level, g.node(i, j)));
      s.max_error = std::max(s.max_error, e);
      if (std::abs(cache.d[k]) <= 3.0 * g.h) s.max_near = std::max(s.max_near, e);
      else s.max_far = std::max(s.max_far, e);
    }
  return s;
}

void solver_residual_check(Context& ctx, const std::vector<SolveReport>& reports) {
  double worst = 0.0;
  bool all = true;
  for (const auto& r : reports) {
    worst = std::max(worst, r.relative_residual);
    all = all && r.converged;
  }
  ctx.check("INV-SOLVER-RESIDUAL", "linear solves converged (worst relative residual)", all ? worst : NAN, "<=",
            ctx.cfg.tol > 0.0 ? ctx.cfg.tol : 1e-9, all ? "" : "a linear solve stopped before the tolerance");
}

void export_field(Context& ctx, const ProblemRun& run, const RadialSolution* ex) {
  const Grid& g = run.cache.grid;
  const int m = run.solution.m;
  std::vector<std::string> header{"i", "j", "x", "y", "d", "side"};
  for (int l = 0; l < m; ++l) header.push_back("v" + std::to_string(l));
  if (ex)
    for (int l = 0; l < m; ++l) header.push_back("exact" + std::to_string(l));
  CsvWriter csv(ctx.file("field_" + grid_tag(g.n) + ".csv"), header);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const std::size_t k = g.index(i, j);
      const Vec2 x = g.node(i, j);
      const NodeSide s = run.cache.side[k];
      std::vector<CsvWriter::Cell> row{static_cast<long long>(i), static_cast<long long>(j), x.x, x.y, run.cache.d[k],
                                       std::string(s == NodeSide::inner   ? "inner"
                                                   : s == NodeSide::outer ? "outer"
                                                                          : "near")};
      for (int l = 0; l < m; ++l) row.push_back(run.solution.levels[l].values[k]);
      if (ex)
        for (int l = 0; l < m; ++l) row.push_back(ex->at(l, x));
      csv.row(row);
    }
  csv.close();
}

// ---------------------------------------------------------------- solve

void cmd_solve(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Problem pb = cfg.problem();
  const bool oracle = cfg.bc.source == BcSource::oracle;
  RadialSolution ex;
  if (oracle) ex = oracle_of(cfg);

  CsvWriter rep(ctx.file("solve_reports.csv"),
                {"n", "h", "level", "method", "solver", "iterations", "relative_residual", "converged"});
  std::unique_ptr<CsvWriter> err;
  if (oracle)
    err = std::make_unique<CsvWriter>(ctx.file("errors.csv"),
                                      std::vector<std::string>{"n", "h", "level", "max_error", "max_error_near",
                                                               "max_error_far"});
  std::vector<SolveReport> all_reports;
  json per_grid = json::array();
  ProblemRun last;
  for (int n : cfg.grids) {
    ctx.log << "solve n=" << n << "\n";
    const auto t0 = Clock::now();
    ProblemRun run = solve_problem(pb, n);
    ctx.time("solve_" + grid_tag(n), t0);
    const double h = run.cache.grid.h;
    json g = {{"n", n}, {"h", h}, {"eps", run.solution.eps}};
    json reps = json::array();
    for (int l = 0; l < cfg.m; ++l) {
      const SolveReport& r = run.solution.reports[l];
      all_reports.push_back(r);
      reps.push_back(report_json(r));
      rep.row({static_cast<long long>(n), h, static_cast<long long>(l), r.method, r.solver,
               static_cast<long long>(r.iterations), r.relative_residual, std::string(r.converged ? "1" : "0")});
    }
    g["reports"] = reps;
    if (oracle) {
      json errs = json::array();
      for (int l = 0; l < cfg.m; ++l) {
        const ErrorStats s = level_error(run.solution.levels[l], run.cache, ex, l);
        err->row({static_cast<long long>(n), h, static_cast<long long>(l), s.max_error, s.max_near, s.max_far});
        errs.push_back({{"level", l}, {"max_error", s.max_error}, {"max_error_near", s.max_near}});
        if (l == 0 && n >= cfg.thr.accuracy_n)
          ctx.check("INV-SOLVE-ACCURACY", "max error vs radial solution at n=" + std::to_string(n), s.max_error, "<=",
                    cfg.max_error_threshold());
      }
      g["errors"] = errs;
    }
    if (cfg.method != Method::corrector) {
      const MeasureLoad load = cfg.method == Method::direct_measure
                                   ? surface_load_collocation(run.cache, pb.curve, pb.q, cfg.samples_per_cell)
                                   : surface_load_regularized(run.cache, pb.curve, pb.q, cfg.regularized_width,
                                                              run.solution.eps);
      const double exact = surface_integral(pb.curve, pb.q);
      const double rel = std::abs(load.total_mass - exact) / std::max(std::abs(exact), 1e-300);
      g["total_mass"] = load.total_mass;
      g["surface_integral"] = exact;
      ctx.check("INV-MASS", "discrete load mass vs surface integral at n=" + std::to_string(n), rel, "<=",
                cfg.mass_threshold());
    }
    if (cfg.export_fields) export_field(ctx, run, oracle ? &ex : nullptr);
    per_grid.push_back(g);
    last = std::move(run);
  }
  rep.close();
  if (err) err->close();
  solver_residual_check(ctx, all_reports);
  ctx.results["grids"] = per_grid;

  write_heatmap_svg(ctx.file("u_" + grid_tag(last.cache.grid.n) + ".svg"), last.solution.u(),
                    "u, n = " + std::to_string(last.cache.grid.n));
  if (cfg.m > 1)
    write_heatmap_svg(ctx.file("v" + std::to_string(cfg.m - 1) + "_" + grid_tag(last.cache.grid.n) + ".svg"),
                      last.solution.levels.back(), "top level of the cascade, n = " + std::to_string(last.cache.grid.n));
}

// ---------------------------------------------------------- convergence

double fit_or_warn(Context& ctx, const std::vector<double>& e, const std::vector<double>& h, const std::string& what) {
  try {
    return convergence_order(e, h);
  } catch (const Error& ex) {
    ctx.warn(what + ": " + ex.what());
    return NAN;
  }
}

void cmd_convergence(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const RadialSolution ex = oracle_of(cfg);
  std::vector<std::pair<std::string, Method>> methods{{to_string(cfg.method), cfg.method}};
  if (cfg.baseline != "none")
    methods.push_back({cfg.baseline, cfg.baseline == "corrector"        ? Method::corrector
                                     : cfg.baseline == "direct-measure" ? Method::direct_measure
                                                                        : Method::regularized});

  CsvWriter csv(ctx.file("convergence.csv"),
                {"method", "n", "h", "max_error", "max_error_near", "max_error_far", "iterations"});
  CsvWriter reg(ctx.file("regularity.csv"), {"n", "h", "order", "sup_off", "sup_cross", "off_ratio", "cross_ratio"});
  std::vector<SolveReport> all_reports;
  json fits = json::object();
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    Problem pb = cfg.problem();
    pb.method = methods[mi].second;
    std::vector<double> errs, near, hs;
    std::vector<RegularityRow> rows;
    for (int n : cfg.grids) {
      ctx.log << "convergence " << methods[mi].first << " n=" << n << "\n";
      const auto t0 = Clock::now();
      const ProblemRun run = solve_problem(pb, n);
      ctx.time("solve_" + methods[mi].first + "_" + grid_tag(n), t0);
      const ErrorStats s = level_error(run.solution.u(), run.cache, ex, 0);
      int iters = 0;
      for (const auto& r : run.solution.reports) {
        all_reports.push_back(r);
        iters += r.iterations;
      }
      csv.row({methods[mi].first, static_cast<long long>(n), run.cache.grid.h, s.max_error, s.max_near, s.max_far,
               static_cast<long long>(iters)});
      errs.push_back(s.max_error);
      near.push_back(s.max_near);
      hs.push_back(run.cache.grid.h);
      if (mi == 0) {
        if (n >= cfg.thr.accuracy_n)
          ctx.check("INV-SOLVE-ACCURACY", "max error vs radial solution at n=" + std::to_string(n), s.max_error,
                    "<=", cfg.max_error_threshold());
        if (n >= cfg.thr.regularity_from_n) rows.push_back(regularity_row(run.solution.u(), run.cache, 2 * cfg.m - 1));
      }
    }
    const double p = fit_or_warn(ctx, errs, hs, methods[mi].first + " order fit");
    const double p_near = fit_or_warn(ctx, near, hs, methods[mi].first + " near-interface order fit");
    fits[methods[mi].first] = {{"order", p}, {"order_near", p_near}, {"errors", errs}, {"h", hs}};
    if (mi == 0) {
      ctx.check("INV-CONVERGENCE-ORDER", "fitted order, " + methods[mi].first + " (max norm)", p, ">=",
                cfg.thr.min_order);
      json rj = json::array();
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const double ro = k ? rows[k].sup_off / rows[k - 1].sup_off : NAN;
        const double rc = k ? rows[k].sup_cross / rows[k - 1].sup_cross : NAN;
        reg.row({static_cast<long long>(rows[k].n), rows[k].h, static_cast<long long>(rows[k].order), rows[k].sup_off,
                 rows[k].sup_cross, ro, rc});
        rj.push_back({{"n", rows[k].n}, {"sup_off", rows[k].sup_off}, {"sup_cross", rows[k].sup_cross}});
        if (k) {
          const std::string step = std::to_string(rows[k - 1].n) + "->" + std::to_string(rows[k].n);
          ctx.check("INV-REG-BOUNDED", "off-interface D^" + std::to_string(rows[k].order) + " ratio " + step, ro,
                    "in", cfg.thr.reg_off_lo, "", cfg.thr.reg_off_hi);
          ctx.check("INV-REG-BLOWUP", "cross-interface D^" + std::to_string(rows[k].order + 1) + " ratio " + step, rc,
                    "in", cfg.thr.reg_cross_lo, "", cfg.thr.reg_cross_hi);
        }
      }
      if (rows.size() < 2) ctx.warn("regularity sweep needs two grids with n >= assert.regularity_from_n");
      ctx.results["regularity"] = rj;
    } else {
      ctx.check("INV-BASELINE-ORDER", "fitted order, " + methods[mi].first + " (max norm)", p, "<=",
                cfg.thr.baseline_max_order);
    }
  }
  csv.close();
  reg.close();
  solver_residual_check(ctx, all_reports);
  ctx.results["fits"] = fits;
}

// ---------------------------------------------------------------- jumps

void cmd_jumps(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Problem pb = cfg.problem();
  std::vector<SolveReport> all_reports;
  json per = json::array();
  for (std::size_t gi = 0; gi < cfg.grids.size(); ++gi) {
    const int n = cfg.grids[gi];
    const bool finest = gi + 1 == cfg.grids.size();
    ctx.log << "jumps n=" << n << "\n";
    auto t0 = Clock::now();
    const ProblemRun run = solve_problem(pb, n);
    ctx.time("solve_" + grid_tag(n), t0);
    for (const auto& r : run.solution.reports) all_reports.push_back(r);
    t0 = Clock::now();
    const JumpReport jr = jump_scan(run.solution, run.cache, pb.curve, pb.q, cfg.probes, cfg.workers);
    ctx.time("jump_scan_" + grid_tag(n), t0);
    CsvWriter csv(ctx.file("jumps_" + grid_tag(n) + ".csv"),
                  {"t", "x", "y", "nu_x", "nu_y", "valid", "inner0", "inner1", "inner2", "inner3", "outer0", "outer1",
                   "outer2", "outer3", "measured", "predicted", "error"});
    for (const JumpProbe& p : jr.probes) {
      csv.row({p.t, p.p.x, p.p.y, p.normal.x, p.normal.y, static_cast<long long>(p.valid), p.inner[0], p.inner[1],
               p.inner[2], p.inner[3], p.outer[0], p.outer[1], p.outer[2], p.outer[3], p.measured, p.predicted,
               p.error});
    }
    csv.close();
    json g = {{"n", n},           {"field", jr.field},           {"order", jr.order},
              {"valid", jr.valid}, {"skipped", jr.skipped},       {"median_error", jr.median_error},
              {"max_error", jr.max_error}};
    if (jr.skipped > 0) ctx.warn(std::to_string(jr.skipped) + " of " + std::to_string(cfg.probes) +
                                 " jump probes skipped at n=" + std::to_string(n));
    if (finest) {
      ctx.check("INV-JUMP-LAW", "median relative error of the jump of d^" + std::to_string(2 * cfg.m - 1) +
                                    "_nu u at n=" + std::to_string(n),
                jr.valid >= 8 ? jr.median_error : NAN, "<=", cfg.jump_threshold(),
                std::to_string(jr.valid) + " valid probes");
    }
    if (cfg.m == 2) {
      t0 = Clock::now();
      const MixedJumpReport mx = mixed_jump_scan(run.solution.u(), run.cache, pb.curve, pb.q, cfg.probes, cfg.workers);
      ctx.time("mixed_scan_" + grid_tag(n), t0);
      CsvWriter mc(ctx.file("mixed_jumps_" + grid_tag(n) + ".csv"), {"t", "valid", "nnt", "ntt", "ttt", "q"});
      for (const auto& r : mx.rows)
        mc.row({r.t, static_cast<long long>(r.valid), r.nnt, r.ntt, r.ttt, r.q});
      mc.close();
      g["mixed"] = {{"valid", mx.valid}, {"max_ratio", mx.max_ratio}, {"median_ratio", mx.median_ratio}};
      if (finest)
        ctx.check("INV-TANGENTIAL-JUMP", "max over probes of mixed third-order jumps / |Q|",
                  mx.valid >= 8 ? mx.max_ratio : NAN, "<=", cfg.thr.tangential_ratio,
                  "median over probes " + format_real(mx.median_ratio));
    }
    per.push_back(g);
  }
  solver_residual_check(ctx, all_reports);
  ctx.results["grids"] = per;
}

// ------------------------------------------------------------------- tv

double l1_perimeter(const Curve& c) {
  const int n = 4096;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = Curve::period * k / n;
    const Vec2 nu = c.normal(t);
    s += (std::abs(nu.x) + std::abs(nu.y)) * c.speed(t);
  }
  return s * Curve::period / n;
}

void cmd_tv(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Problem pb = cfg.problem();
  const bool step = cfg.tv_mode == "step";
  CsvWriter csv(ctx.file("tv.csv"),
                {"n", "component", "total", "tube", "fraction", "jump_part", "predicted", "jump_rel_error"});
  std::vector<SolveReport> all_reports;
  json per = json::array();
  for (std::size_t gi = 0; gi < cfg.grids.size(); ++gi) {
    const int n = cfg.grids[gi];
    const bool finest = gi + 1 == cfg.grids.size();
    ctx.log << "tv n=" << n << "\n";
    const Grid g = Grid::make(cfg.box, n);
    if (step) {
      const GeometryCache cache = build_geometry_cache(pb.curve, g, cfg.workers);
      GridField f = GridField::zeros(g);
      for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = cache.d[k] < 0.0 ? 1.0 : 0.0;
      const TVReport tv = tv_field(f, cache, cfg.tube_cells);
      const double per_l1 = l1_perimeter(pb.curve);
      const double rel = std::abs(tv.total - per_l1) / per_l1;
      csv.row({static_cast<long long>(n), std::string("indicator"), tv.total, tv.tube, tv.fraction, NAN, per_l1, rel});
      per.push_back({{"n", n}, {"total", tv.total}, {"fraction", tv.fraction}, {"l1_perimeter", per_l1}});
      if (finest) {
        ctx.check("INV-TV-STEP", "TV of the indicator vs l1 perimeter (relative)", rel, "<=", cfg.thr.tv_step_rel);
        ctx.check("INV-TV-CONCENTRATION", "tube share of TV, indicator", tv.fraction, ">=", cfg.thr.tv_fraction);
      }
      continue;
    }
    auto t0 = Clock::now();
    const ProblemRun run = solve_problem(pb, n);
    ctx.time("solve_" + grid_tag(n), t0);
    for (const auto& r : run.solution.reports) all_reports.push_back(r);
    json comps = json::object();
    for (const std::string& comp : cfg.tv_components) {
      const int ax = static_cast<int>(std::count(comp.begin(), comp.end(), 'x'));
      const int ay = static_cast<int>(std::count(comp.begin(), comp.end(), 'y'));
      const GridField f = (ax + ay) ? central_derivative(run.solution.u(), ax, ay) : run.solution.u();
      const Curve& curve = pb.curve;
      const SurfaceDensity& q = pb.q;
      const int m = cfg.m;
      const DensityFn density = [&curve, &q, m, ax, ay](double t) {
        const Vec2 nu = curve.normal(t);
        return predicted_jump(m, q, curve, t) * std::pow(nu.x, ax) * std::pow(nu.y, ay);
      };
      t0 = Clock::now();
      const TVReport tv = tv_profile(f, run.cache, curve, density, cfg.probes, cfg.tube_cells, cfg.workers);
      ctx.time("tv_" + comp + "_" + grid_tag(n), t0);
      const double rel = std::abs(tv.jump_part - tv.predicted) / std::max(std::abs(tv.predicted), 1e-300);
      csv.row({static_cast<long long>(n), comp, tv.total, tv.tube, tv.fraction, tv.jump_part, tv.predicted, rel});
      comps[comp] = {{"total", tv.total},         {"tube", tv.tube},           {"fraction", tv.fraction},
                     {"jump_part", tv.jump_part}, {"predicted", tv.predicted}, {"jump_rel_error", rel}};
      if (finest) {
        ctx.check("INV-TV-CONCENTRATION", "tube share of TV(grad d_" + comp + " u) at n=" + std::to_string(n),
                  tv.fraction, ">=", cfg.thr.tv_fraction);
        ctx.check("INV-TV-JUMP-PART", "jump-part estimate vs predicted density integral, " + comp, rel, "<=",
                  cfg.thr.tv_jump_rel);
      }
      if (finest && comp == cfg.tv_components.front())
        write_heatmap_svg(ctx.file("d" + comp + "_" + grid_tag(n) + ".svg"), f,
                          "d_" + comp + " u, n = " + std::to_string(n));
    }
    per.push_back({{"n", n}, {"components", comps}});
  }
  csv.close();
  if (!step) solver_residual_check(ctx, all_reports);
  ctx.results["grids"] = per;
}

// --------------------------------------------------------------- altcaf

void cmd_altcaf(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  auto t0 = Clock::now();
  const EnergyScan scan = energy_scan(cfg.u0, cfg.rho_min, cfg.rho_max, cfg.rho_step);
  ctx.time("energy_scan", t0);
  {
    CsvWriter csv(ctx.file("energy.csv"), {"rho", "feasible", "bending", "measure", "energy"});
    for (const auto& s : scan.samples)
      csv.row({s.rho, static_cast<long long>(s.feasible), s.bending, s.measure, s.energy});
    csv.close();
  }
  const RadialAltCafSolution& sol = scan.best;
  json verdict = {{"u0", cfg.u0}, {"has_free_boundary", sol.has_free_boundary}, {"energy", sol.energy}};

  const bool expect_any = cfg.thr.expect_free_boundary == "any";
  const bool expect_fb = cfg.thr.expect_free_boundary == "true";
  const double pi = std::numbers::pi;
  if (sol.has_free_boundary) {
    const bool interior = sol.rho > cfg.rho_min && sol.rho < cfg.rho_max;
    ctx.check("INV-AC-MINIMIZER", "interior minimizer energy below pi (E - pi)",
              (interior && (expect_any || expect_fb)) ? sol.energy - pi : NAN, "<", 0.0,
              "rho* = " + format_real(sol.rho));
    const ELReport el = verify_euler_lagrange(sol);
    const AltCafRegularity rg = altcaf_regularity_report(sol);
    ctx.check("INV-AC-EL", "|Q_geom - Q_el| / |Q_el|", el.el_relative, "<=", cfg.thr.ac_el);
    ctx.check("INV-AC-STATIONARY", "|dE/drho| / E at rho*", std::abs(el.dE_drho) / sol.energy, "<=",
              cfg.thr.ac_stationary);
    ctx.check("INV-AC-W3INF", "max continuity gap of u, u', u'' at rho*",
              std::isfinite(rg.sup_u3) ? std::max({rg.c0_gap, rg.c1_gap, rg.c2_gap}) : NAN, "<=",
              cfg.thr.ac_continuity, "sup |u'''| = " + format_real(rg.sup_u3));
    ctx.check("INV-AC-NOT-C3", "|[u''']| at rho*", std::abs(rg.u3_jump), ">", 0.0,
              "[u'''] = " + format_real(rg.u3_jump) + ", Q_el = " + format_real(sol.q_el));
    ctx.check("INV-AC-PROFILE", "sign changes of u on (0, 1]", rg.grad_at_rho > 0.0 ? rg.zero_crossings : NAN, "==",
              1.0, "|u'(rho*)| = " + format_real(rg.grad_at_rho));
    verdict["rho"] = sol.rho;
    verdict["coefficients"] = {{"a", sol.a}, {"b", sol.b}, {"c", sol.c}, {"d", sol.d}, {"e", sol.e}, {"f", sol.f}};
    verdict["bending"] = sol.bending;
    verdict["measure"] = sol.measure;
    verdict["q_geom"] = sol.q_geom;
    verdict["q_el"] = sol.q_el;
    verdict["euler_lagrange"] = {{"el_relative", el.el_relative},
                                 {"dE_drho", el.dE_drho},
                                 {"stationary", el.stationary},
                                 {"weak_residuals", el.weak_residuals},
                                 {"off_rho", el.off_rho},
                                 {"off_el_relative", el.off_el_relative},
                                 {"off_ratio", el.off_ratio}};
    verdict["regularity"] = {{"u3_inner", rg.u3_inner}, {"u3_outer", rg.u3_outer}, {"u3_jump", rg.u3_jump},
                             {"sup_u3", rg.sup_u3},     {"grad_at_rho", rg.grad_at_rho}, {"c0_gap", rg.c0_gap},
                             {"c1_gap", rg.c1_gap},     {"c2_gap", rg.c2_gap},           {"zero_crossings", rg.zero_crossings}};
  } else {
    ctx.check("INV-AC-MINIMIZER", "trivial solution energy equals pi (E - pi)",
              (expect_any || !expect_fb) ? sol.energy - pi : NAN, "==", 0.0, "no candidate beats u = u0");
  }

  {
    CsvWriter csv(ctx.file("profile.csv"), {"r", "u", "u1", "u2", "u3"});
    Panel pu{"u(r)", "r", {}}, p1{"u'(r)", "r", {}}, p2{"u''(r)", "r", {}}, p3{"u'''(r)", "r", {}};
    Series su{"u", {}, {}}, s1{"u'", {}, {}}, s2{"u''", {}, {}}, s3{"u'''", {}, {}};
    const int samples = 2001;
    for (int k = 0; k < samples; ++k) {
      const double r = static_cast<double>(k) / (samples - 1);
      const auto v = sol.profile(r);
      csv.row({r, v[0], v[1], v[2], v[3]});
      su.x.push_back(r), su.y.push_back(v[0]);
      s1.x.push_back(r), s1.y.push_back(v[1]);
      s2.x.push_back(r), s2.y.push_back(v[2]);
      // break the line at the free boundary so the jump shows
      if (sol.has_free_boundary && k > 0 && (k - 1.0) / (samples - 1) < sol.rho && r >= sol.rho) {
        s3.x.push_back(r), s3.y.push_back(NAN);
      }
      s3.x.push_back(r), s3.y.push_back(v[3]);
    }
    csv.close();
    const double mark = sol.has_free_boundary ? sol.rho : NAN;
    pu.series = {su}, p1.series = {s1}, p2.series = {s2}, p3.series = {s3};
    pu.marker_x = p1.marker_x = p2.marker_x = p3.marker_x = mark;
    write_panels_svg(ctx.file("profile.svg"), {pu, p1, p2, p3});
    Panel pe{"E(rho) with pi for reference", "rho", {}};
    Series se{"E", {}, {}}, sp{"pi", {}, {}};
    for (const auto& s : scan.samples) {
      se.x.push_back(s.rho);
      se.y.push_back(s.feasible ? s.energy : NAN);
      sp.x.push_back(s.rho);
      sp.y.push_back(pi);
    }
    pe.series = {se, sp};
    pe.marker_x = mark;
    write_panels_svg(ctx.file("energy.svg"), {pe});
  }
  std::ofstream(ctx.file("verdict.json")) << verdict.dump(2) << "\n";
  ctx.results["verdict"] = verdict;
}

// ------------------------------------------------------ validate-lemma23

double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

void cmd_lemma23(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Curve curve = cfg.curve.build();
  const SurfaceDensity q = cfg.density.build();
  const double eps = tube_radius(curve, cfg.box);
  std::mt19937_64 gen(cfg.seed);
  std::vector<Bump> bumps;
  for (int b = 0; b < cfg.bumps; ++b) {
    const double t = Curve::period * uniform01(gen);
    const double s = (2.0 * uniform01(gen) - 1.0) * 0.1 * cfg.bump_radius;
    bumps.push_back(Bump{curve.point(t) + s * curve.normal(t), cfg.bump_radius, 1.0});
  }
  struct Case {
    int i, j, b;
    std::vector<HessianIdentityTerms> terms;
  };
  std::vector<Case> cases;
  for (const auto& [i, j] : cfg.pairs)
    for (int b = 0; b < cfg.bumps; ++b) cases.push_back({i, j, b, {}});
  const double width = cfg.box.x1 - cfg.box.x0;
  const auto t0 = Clock::now();
  parallel_for(
      cases.size(), cfg.workers,
      [&](std::size_t c0, std::size_t c1) {
        for (std::size_t c = c0; c < c1; ++c)
          for (int n : cfg.grids)
            cases[c].terms.push_back(
                validate_hessian_identity(curve, q, eps, bumps[cases[c].b], cases[c].i, cases[c].j, width / (n - 1)));
      },
      1);
  ctx.time("identity_checks", t0);

  CsvWriter csv(ctx.file("lemma23.csv"), {"i", "j", "bump", "cx", "cy", "radius", "n", "h", "volume_lhs", "surface",
                                          "volume_g", "residual"});
  CsvWriter oc(ctx.file("lemma23_orders.csv"), {"i", "j", "bump", "order"});
  double worst = INFINITY;
  json orders = json::array();
  for (const Case& c : cases) {
    std::vector<double> res, hs;
    const Bump& bp = bumps[c.b];
    for (std::size_t k = 0; k < cfg.grids.size(); ++k) {
      const int n = cfg.grids[k];
      const HessianIdentityTerms& t = c.terms[k];
      csv.row({static_cast<long long>(c.i), static_cast<long long>(c.j), static_cast<long long>(c.b), bp.center.x,
               bp.center.y, bp.radius, static_cast<long long>(n), width / (n - 1), t.volume_lhs, t.surface, t.volume_g,
               t.residual});
      res.push_back(t.residual);
      hs.push_back(width / (n - 1));
    }
    double p = NAN;
    bool roundoff = true;
    for (double r : res) roundoff = roundoff && r < 1e-12;
    if (roundoff) {
      ctx.warn("identity residual at roundoff for pair " + std::to_string(c.i) + std::to_string(c.j) + ", bump " +
               std::to_string(c.b) + "; no order to fit");
      p = INFINITY;
    } else {
      p = fit_or_warn(ctx, res, hs, "identity residual fit");
    }
    oc.row({static_cast<long long>(c.i), static_cast<long long>(c.j), static_cast<long long>(c.b), p});
    orders.push_back({{"i", c.i}, {"j", c.j}, {"bump", c.b}, {"order", std::isfinite(p) ? json(p) : json(nullptr)},
                      {"residuals", res}});
    worst = std::isnan(p) ? NAN : std::min(worst, p);
  }
  csv.close();
  oc.close();
  ctx.check("INV-LEMMA23-ORDER", "smallest fitted order of the identity residual over pairs and bumps", worst, ">=",
            cfg.thr.lemma_order);
  ctx.results["eps"] = eps;
  ctx.results["orders"] = orders;
}

json versions() {
  return {{"polyjump", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION},
          {"fftw", std::string(fftw_version)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"compiler", __VERSION__},
          {"cxx_standard", static_cast<long long>(__cplusplus)}};
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + p.string());
  out << j.dump(2) << "\n";
}

}  // namespace

int run(const RunConfig& cfg, bool strict, std::ostream& log, std::ostream& err) {
  Context ctx(cfg, log);
  std::error_code ec;
  fs::create_directories(ctx.dir, ec);
  if (ec) {
    err << "error: run.out: cannot create '" << cfg.out << "': " << ec.message() << "\n";
    return kExitConfig;
  }
  const auto t0 = Clock::now();
  int code = kExitOk;
  std::string failure;
  log << to_string(cfg.command) << " -> " << cfg.out << "\n";
  try {
    switch (cfg.command) {
      case Command::solve: cmd_solve(ctx); break;
      case Command::convergence: cmd_convergence(ctx); break;
      case Command::jumps: cmd_jumps(ctx); break;
      case Command::tv: cmd_tv(ctx); break;
      case Command::altcaf: cmd_altcaf(ctx); break;
      case Command::validate_lemma23: cmd_lemma23(ctx); break;
    }
  } catch (const Error& e) {
    failure = e.what();
    code = kExitSolver;
  } catch (const std::exception& e) {
    failure = std::string("internal: ") + e.what();
    code = kExitSolver;
  }
  ctx.timings["total"] = since(t0);

  int failed = 0;
  json asserts = json::array();
  for (const auto& a : ctx.assertions) {
    failed += a.pass ? 0 : 1;
    json j = {{"id", a.id}, {"name", a.name}, {"op", a.op}, {"threshold", a.threshold}, {"pass", a.pass}};
    j["value"] = std::isfinite(a.value) ? json(a.value) : json(nullptr);
    if (a.op == "in") j["threshold_hi"] = a.threshold_hi;
    if (!a.detail.empty()) j["detail"] = a.detail;
    asserts.push_back(j);
  }
  if (code == kExitOk && (failed > 0 || (strict && !ctx.warnings.empty()))) code = kExitAssertion;

  json summary = {{"command", to_string(cfg.command)},
                  {"status", code == kExitOk ? "pass" : code == kExitAssertion ? "fail" : "error"},
                  {"exit_code", code},
                  {"strict", strict},
                  {"assertions", asserts},
                  {"warnings", ctx.warnings},
                  {"results", ctx.results}};
  if (!failure.empty()) summary["error"] = failure;
  json manifest = {{"command", to_string(cfg.command)}, {"config", cfg.resolved}, {"versions", versions()},
                   {"timings_seconds", ctx.timings}, {"workers", cfg.workers}};
  try {
    write_json(ctx.dir / "summary.json", summary);
    ctx.files.push_back("summary.json");
    manifest["files"] = ctx.files;
    write_json(ctx.dir / "manifest.json", manifest);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  if (!failure.empty()) err << "error: " << failure << "\n";
  log << "assertions: " << ctx.assertions.size() - failed << " passed, " << failed << " failed; warnings: "
      << ctx.warnings.size() << "; exit " << code << "\n";
  return code;
}

int run_config_file(const std::string& path, const RunOverrides& ov, std::ostream& log, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(path, ov.command);
    if (!ov.out.empty()) {
      cfg.out = ov.out;
      cfg.resolved["run.out"] = ov.out;
    }
    if (ov.workers != 0) {
      if (ov.workers < 1 || ov.workers > 256) throw Error(ErrorCode::config_error, "run.workers: must be in 1..256");
      cfg.workers = ov.workers;
      cfg.resolved["run.workers"] = std::to_string(ov.workers);
    }
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return run(cfg, ov.strict, log, err);
}

}  // namespace polyjump
