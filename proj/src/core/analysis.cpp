#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "error.hpp"
#include "parallel.hpp"

namespace polyjump {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 == 1 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

namespace {

bool is_probe_error(const Error& e) {
  return e.code() == ErrorCode::probe_leaves_domain || e.code() == ErrorCode::probe_crosses_interface;
}

}  // namespace

JumpReport jump_scan_field(const GridField& f, const GeometryCache& cache, const Curve& curve, int n_probes, int order,
                           const DensityFn& predicted, double scale, int workers) {
  if (n_probes < 8) throw Error(ErrorCode::invalid_argument, "jump scan needs at least 8 probes");
  if (order < 1 || order > 3) throw Error(ErrorCode::invalid_argument, "jump order must be in 1..3");
  JumpReport rep;
  rep.order = order;
  rep.scale = scale;
  const auto probes = make_probes(curve, n_probes);
  rep.probes.resize(probes.size());
  parallel_for(
      probes.size(), workers,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
          JumpProbe& jp = rep.probes[k];
          jp.t = probes[k].t;
          jp.p = probes[k].p;
          jp.normal = probes[k].normal;
          jp.predicted = predicted ? predicted(jp.t) : 0.0;
          try {
            const auto in = one_sided_value_and_derivatives(f, cache, jp.p, jp.normal, Side::inner, order);
            const auto out = one_sided_value_and_derivatives(f, cache, jp.p, jp.normal, Side::outer, order);
            jp.inner = in.values;
            jp.outer = out.values;
          } catch (const Error& e) {
            if (!is_probe_error(e)) throw;
            jp.skip_reason = to_string(e.code());
            continue;
          }
          jp.valid = true;
          jp.measured = scale * (jp.outer[order] - jp.inner[order]);
          const double diff = std::abs(jp.measured - jp.predicted);
          jp.error = std::abs(jp.predicted) > 1e-12 ? diff / std::abs(jp.predicted) : diff;
        }
      },
      2);
  std::vector<double> errs;
  for (const auto& jp : rep.probes) {
    if (jp.valid) {
      errs.push_back(jp.error);
      rep.max_error = std::max(rep.max_error, jp.error);
    }
  }
  rep.valid = static_cast<int>(errs.size());
  rep.skipped = static_cast<int>(rep.probes.size()) - rep.valid;
  rep.median_error = median(errs);
  return rep;
}

double predicted_jump(int m, const SurfaceDensity& q, const Curve& curve, double t) {
  return (m % 2 == 0 ? 1.0 : -1.0) * q.value(curve, t);
}

JumpReport jump_scan(const CascadeSolution& sol, const GeometryCache& cache, const Curve& curve,
                     const SurfaceDensity& q, int n_probes, int workers) {
  const int m = sol.m;
  const auto pred = [&](double t) { return predicted_jump(m, q, curve, t); };
  JumpReport rep;
  if (m == 1) {
    rep = jump_scan_field(sol.levels[0], cache, curve, n_probes, 1, pred, 1.0, workers);
    rep.field = "v";
  } else if (m == 2) {
    rep = jump_scan_field(sol.levels[0], cache, curve, n_probes, 3, pred, 1.0, workers);
    rep.field = "u";
  } else {
    rep = jump_scan_field(sol.levels[m - 2], cache, curve, n_probes, 3, pred, m % 2 == 0 ? 1.0 : -1.0, workers);
    rep.field = "v" + std::to_string(m - 2);
  }
  return rep;
}

MixedJumpReport mixed_jump_scan(const GridField& u, const GeometryCache& cache, const Curve& curve,
                                const SurfaceDensity& q, int n_probes, int workers) {
  if (n_probes < 8) throw Error(ErrorCode::invalid_argument, "jump scan needs at least 8 probes");
  const auto probes = make_probes(curve, n_probes);
  MixedJumpReport rep;
  rep.rows.resize(probes.size());
  parallel_for(
      probes.size(), workers,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
          MixedJumpRow& row = rep.rows[k];
          row.t = probes[k].t;
          row.q = q.value(curve, row.t);
          auto jump = [&](int a, int b) {
            return one_sided_mixed_derivative(u, cache, probes[k], Side::outer, a, b) -
                   one_sided_mixed_derivative(u, cache, probes[k], Side::inner, a, b);
          };
          try {
            row.nnt = jump(2, 1);
            row.ntt = jump(1, 2);
            row.ttt = jump(0, 3);
            row.valid = true;
          } catch (const Error& e) {
            if (!is_probe_error(e)) throw;
          }
        }
      },
      2);
  std::vector<double> per_probe;
  for (const auto& row : rep.rows) {
    if (!row.valid) continue;
    const double scale = std::max(std::abs(row.q), 1e-12);
    const double worst = std::max({std::abs(row.nnt), std::abs(row.ntt), std::abs(row.ttt)}) / scale;
    per_probe.push_back(worst);
    rep.max_ratio = std::max(rep.max_ratio, worst);
  }
  rep.valid = static_cast<int>(per_probe.size());
  rep.median_ratio = median(per_probe);
  return rep;
}

namespace {

// Count of outer-side nodes in every axis-aligned box, via 2D prefix sums.
struct SideCounter {
  int n;
  std::vector<int> pre;  // (n+1)^2

  explicit SideCounter(const GeometryCache& cache) : n(cache.grid.n), pre((n + 1) * (n + 1), 0) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        pre[(j + 1) * (n + 1) + (i + 1)] = (cache.outer(cache.grid.index(i, j)) ? 1 : 0) + pre[j * (n + 1) + (i + 1)] +
                                           pre[(j + 1) * (n + 1) + i] - pre[j * (n + 1) + i];
  }
  // Nodes with index in [i0, i1] x [j0, j1].
  int outer_in(int i0, int i1, int j0, int j1) const {
    return pre[(j1 + 1) * (n + 1) + (i1 + 1)] - pre[j0 * (n + 1) + (i1 + 1)] - pre[(j1 + 1) * (n + 1) + i0] +
           pre[j0 * (n + 1) + i0];
  }
};

// max |D^(ax, ay)_h u| over nodes whose stencil box is one-sided (cross =
// false) or straddles the interface (cross = true).
double stencil_sup(const GridField& u, const SideCounter& sc, int ax, int ay, bool cross) {
  const GridField d = central_derivative(u, ax, ay);
  const int hx = central_half_width(ax), hy = central_half_width(ay);
  const int n = u.grid.n;
  const int box = (2 * hx + 1) * (2 * hy + 1);
  double best = 0.0;
  for (int j = hy; j < n - hy; ++j) {
    for (int i = hx; i < n - hx; ++i) {
      const int c = sc.outer_in(i - hx, i + hx, j - hy, j + hy);
      const bool straddles = c != 0 && c != box;
      if (straddles != cross) continue;
      best = std::max(best, std::abs(d(i, j)));
    }
  }
  return best;
}

}  // namespace

RegularityRow regularity_row(const GridField& u, const GeometryCache& cache, int order) {
  if (order < 1) throw Error(ErrorCode::invalid_argument, "regularity order must be positive");
  RegularityRow row;
  row.n = u.grid.n;
  row.h = u.grid.h;
  row.order = order;
  const SideCounter sc(cache);
  for (int ax = 0; ax <= order; ++ax) row.sup_off = std::max(row.sup_off, stencil_sup(u, sc, ax, order - ax, false));
  for (int ax = 0; ax <= order + 1; ++ax)
    row.sup_cross = std::max(row.sup_cross, stencil_sup(u, sc, ax, order + 1 - ax, true));
  return row;
}

RegularitySweep regularity_sweep(const Problem& pb, const std::vector<int>& grids) {
  if (grids.size() < 3) throw Error(ErrorCode::invalid_argument, "regularity sweep needs at least 3 grids");
  for (std::size_t k = 1; k < grids.size(); ++k)
    if (grids[k] - 1 != 2 * (grids[k - 1] - 1))
      throw Error(ErrorCode::invalid_argument, "regularity sweep grids must be dyadic refinements (n - 1 doubling)");
  RegularitySweep sw;
  for (int n : grids) {
    const ProblemRun run = solve_problem(pb, n);
    sw.rows.push_back(regularity_row(run.solution.u(), run.cache, 2 * pb.m - 1));
  }
  for (std::size_t k = 1; k < sw.rows.size(); ++k) {
    sw.off_ratios.push_back(sw.rows[k].sup_off / sw.rows[k - 1].sup_off);
    sw.cross_ratios.push_back(sw.rows[k].sup_cross / sw.rows[k - 1].sup_cross);
  }
  return sw;
}

TVReport tv_field(const GridField& f, const GeometryCache& cache, double tube_cells) {
  const Grid& g = f.grid;
  TVReport rep;
  const double band = tube_cells * g.h;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      double v = 0.0;
      if (i + 1 < g.n) v += std::abs(f(i + 1, j) - f(i, j));
      if (j + 1 < g.n) v += std::abs(f(i, j + 1) - f(i, j));
      v *= g.h;
      rep.total += v;
      if (std::abs(cache.d[g.index(i, j)]) <= band) rep.tube += v;
    }
  }
  rep.fraction = rep.total > 0.0 ? rep.tube / rep.total : 0.0;
  return rep;
}

TVReport tv_profile(const GridField& f, const GeometryCache& cache, const Curve& curve, const DensityFn& density,
                    int n_probes, double tube_cells, int workers) {
  const Grid& g = f.grid;
  const GridField gx = central_derivative(f, 1, 0), gy = central_derivative(f, 0, 1);
  // Second-derivative inputs are only defined one node in from the edge, their
  // gradients one node further; keep a margin of three nodes.
  constexpr int kMargin = 3;
  TVReport rep;
  const double band = tube_cells * g.h;
  for (int j = kMargin; j < g.n - kMargin; ++j) {
    for (int i = kMargin; i < g.n - kMargin; ++i) {
      double v = 0.0;
      for (const GridField* c : {&gx, &gy}) {
        if (i + 1 < g.n - kMargin) v += std::abs((*c)(i + 1, j) - (*c)(i, j));
        if (j + 1 < g.n - kMargin) v += std::abs((*c)(i, j + 1) - (*c)(i, j));
      }
      v *= g.h;
      rep.total += v;
      if (std::abs(cache.d[g.index(i, j)]) <= band) rep.tube += v;
    }
  }
  rep.fraction = rep.total > 0.0 ? rep.tube / rep.total : 0.0;

  const JumpReport jr = jump_scan_field(f, cache, curve, n_probes, 1, density, 1.0, workers);
  const double dt = Curve::period / n_probes;
  for (const auto& jp : jr.probes) {
    if (!jp.valid) continue;
    const double w = std::abs(jp.normal.x) + std::abs(jp.normal.y);
    const double ds = curve.speed(jp.t) * dt;
    rep.jump_part += std::abs(jp.measured) * w * w * ds;
    rep.predicted += std::abs(jp.predicted) * w * w * ds;
  }
  return rep;
}

double convergence_order(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size()) throw Error(ErrorCode::invalid_argument, "errors and spacings differ in length");
  if (errors.size() < 3) throw Error(ErrorCode::degenerate_fit, "need at least 3 points for an order fit");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(errors.size());
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!(errors[k] >= 1e-13)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "error %.3e at point %zu is below 1e-13", errors[k], k);
      throw Error(ErrorCode::degenerate_fit, buf);
    }
    if (!(hs[k] > 0.0)) throw Error(ErrorCode::invalid_argument, "grid spacings must be positive");
    const double x = std::log(hs[k]), y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) throw Error(ErrorCode::degenerate_fit, "grid spacings are all equal");
  return (n * sxy - sx * sy) / den;
}

double max_gradient(const GridField& f) {
  const Grid& g = f.grid;
  double best = 0.0;
  for (int j = 1; j < g.n - 1; ++j)
    for (int i = 1; i < g.n - 1; ++i) {
      const double gx = (f(i + 1, j) - f(i - 1, j)) / (2 * g.h), gy = (f(i, j + 1) - f(i, j - 1)) / (2 * g.h);
      best = std::max(best, std::hypot(gx, gy));
    }
  return best;
}

}  // namespace polyjump
