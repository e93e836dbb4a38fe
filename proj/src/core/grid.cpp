#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Dense>

#include "error.hpp"
#include "parallel.hpp"

namespace polyjump {

Grid Grid::make(const Rect& box, int n) {
  if (n < 17) throw Error(ErrorCode::invalid_argument, "grid needs at least 17 nodes per side");
  const double wx = box.x1 - box.x0, wy = box.y1 - box.y0;
  if (!(wx > 0.0) || !(wy > 0.0))
    throw Error(ErrorCode::invalid_argument, "domain rectangle must have positive extent");
  if (std::abs(wx - wy) > 1e-12 * std::max(wx, wy))
    throw Error(ErrorCode::invalid_argument, "domain must be square so that grid cells are square");
  return Grid{box, n, wx / (n - 1)};
}

GridField GridField::zeros(const Grid& grid) { return GridField{grid, std::vector<double>(grid.size(), 0.0)}; }

GridField GridField::sample(const Grid& grid, const std::function<double(Vec2)>& f) {
  GridField out = zeros(grid);
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i) out(i, j) = f(grid.node(i, j));
  return out;
}

bool GridField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double GeometryCache::interpolate_d(Vec2 x) const {
  const double gx = (x.x - grid.box.x0) / grid.h;
  const double gy = (x.y - grid.box.y0) / grid.h;
  const int i = std::clamp(static_cast<int>(std::floor(gx)), 0, grid.n - 2);
  const int j = std::clamp(static_cast<int>(std::floor(gy)), 0, grid.n - 2);
  const double fx = gx - i, fy = gy - j;
  const auto at = [&](int a, int b) { return d[grid.index(a, b)]; };
  return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) + (1 - fx) * fy * at(i, j + 1) +
         fx * fy * at(i + 1, j + 1);
}

GeometryCache build_geometry_cache(const Curve& curve, const Grid& grid, int workers) {
  GeometryCache cache;
  cache.grid = grid;
  const std::size_t count = grid.size();
  cache.d.resize(count);
  cache.t.resize(count);
  cache.kappa.resize(count);
  cache.foot.resize(count);
  cache.normal.resize(count);
  cache.side.resize(count);

  parallel_for(count, workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const int i = static_cast<int>(idx % grid.n), j = static_cast<int>(idx / grid.n);
      const Projection pr = project_to_curve(curve, grid.node(i, j));
      cache.d[idx] = pr.d;
      cache.t[idx] = pr.t;
      cache.kappa[idx] = pr.kappa;
      cache.foot[idx] = pr.foot;
      cache.normal[idx] = pr.normal;
    }
  });

  for (int j = 0; j < grid.n; ++j) {
    for (int i = 0; i < grid.n; ++i) {
      const std::size_t idx = grid.index(i, j);
      const bool out = cache.outer(idx);
      bool near = false;
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int a = i + di[k], b = j + dj[k];
        if (a < 0 || b < 0 || a >= grid.n || b >= grid.n) continue;
        if (cache.outer(grid.index(a, b)) != out) near = true;
      }
      cache.side[idx] = near ? NodeSide::near_interface : (out ? NodeSide::outer : NodeSide::inner);
    }
  }
  return cache;
}

GridField apply_laplacian(const GridField& f) {
  const Grid& g = f.grid;
  GridField out = f;
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (int j = 1; j < g.n - 1; ++j)
    for (int i = 1; i < g.n - 1; ++i)
      out(i, j) = (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) - 4.0 * f(i, j)) * inv_h2;
  return out;
}

std::vector<ProbePoint> make_probes(const Curve& curve, int count) {
  std::vector<ProbePoint> probes;
  probes.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double t = (k + 0.5) * Curve::period / count;
    probes.push_back({t, curve.point(t), curve.normal(t), curve.tangent(t)});
  }
  return probes;
}

namespace {

std::array<double, 4> lagrange4(double tau) {
  std::array<double, 4> w{};
  for (int k = 0; k < 4; ++k) {
    double v = 1.0;
    for (int m = 0; m < 4; ++m)
      if (m != k) v *= (tau - m) / static_cast<double>(k - m);
    w[k] = v;
  }
  return w;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

double sample_one_sided(const GridField& f, const GeometryCache& cache, Vec2 x, Side side) {
  const Grid& g = f.grid;
  if (!g.box.contains(x)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "sample (%.6g, %.6g) outside the grid", x.x, x.y);
    throw Error(ErrorCode::probe_leaves_domain, buf);
  }
  const double gx = (x.x - g.box.x0) / g.h, gy = (x.y - g.box.y0) / g.h;
  const int i0 = static_cast<int>(std::floor(gx)), j0 = static_cast<int>(std::floor(gy));

  int best_i = -1, best_j = -1;
  double best_score = std::numeric_limits<double>::infinity();
  for (int bj = j0 - 3; bj <= j0 + 1; ++bj) {
    if (bj < 0 || bj + 3 > g.n - 1) continue;
    for (int bi = i0 - 3; bi <= i0 + 1; ++bi) {
      if (bi < 0 || bi + 3 > g.n - 1) continue;
      const double score = std::pow(gx - (bi + 1.5), 2) + std::pow(gy - (bj + 1.5), 2);
      if (score >= best_score) continue;
      bool ok = true;
      for (int b = 0; b < 4 && ok; ++b)
        for (int a = 0; a < 4 && ok; ++a) ok = cache.on_side(g.index(bi + a, bj + b), side);
      if (ok) {
        best_score = score;
        best_i = bi;
        best_j = bj;
      }
    }
  }
  if (best_i < 0) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "no one-sided interpolation stencil at (%.6g, %.6g)", x.x, x.y);
    throw Error(ErrorCode::probe_crosses_interface, buf);
  }
  const auto wx = lagrange4(gx - best_i), wy = lagrange4(gy - best_j);
  double v = 0.0;
  for (int b = 0; b < 4; ++b) {
    double row = 0.0;
    for (int a = 0; a < 4; ++a) row += wx[a] * f(best_i + a, best_j + b);
    v += wy[b] * row;
  }
  return v;
}

OneSidedDerivatives one_sided_value_and_derivatives(const GridField& f, const GeometryCache& cache, Vec2 p,
                                                    Vec2 normal, Side side, int max_order) {
  if (max_order < 0 || max_order > 3)
    throw Error(ErrorCode::invalid_argument, "one-sided derivative order must be in 0..3");
  const double h = f.grid.h;
  const int npts = 2 * (max_order + 2);
  const int degree = max_order + 1;
  const double span = 2.0 * (max_order + 3) * h;
  const double sgn = side == Side::outer ? 1.0 : -1.0;

  Eigen::MatrixXd A(npts, degree + 1);
  Eigen::VectorXd b(npts);
  for (int k = 0; k < npts; ++k) {
    const double s = h + (span - h) * k / (npts - 1);
    const Vec2 x = p + (sgn * s) * normal;
    if (!f.grid.box.contains(x)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "probe segment leaves the domain at (%.6g, %.6g)", x.x, x.y);
      throw Error(ErrorCode::probe_leaves_domain, buf);
    }
    const double dx = cache.interpolate_d(x);
    if ((dx >= 0.0) != (side == Side::outer)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "probe sample (%.6g, %.6g) lies across the interface", x.x, x.y);
      throw Error(ErrorCode::probe_crosses_interface, buf);
    }
    b(k) = sample_one_sided(f, cache, x, side);
    const double z = sgn * s / span;
    double zp = 1.0;
    for (int c = 0; c <= degree; ++c) {
      A(k, c) = zp;
      zp *= z;
    }
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
  OneSidedDerivatives out;
  out.max_order = max_order;
  for (int k = 0; k <= max_order; ++k) out.values[k] = factorial(k) * coef(k) / std::pow(span, k);
  return out;
}

double one_sided_mixed_derivative(const GridField& f, const GeometryCache& cache, const ProbePoint& probe, Side side,
                                  int normal_order, int tangent_order) {
  constexpr int kDegree = 4;
  if (normal_order < 0 || tangent_order < 0 || normal_order + tangent_order > kDegree)
    throw Error(ErrorCode::invalid_argument, "mixed derivative order exceeds the fit degree");
  const double h = f.grid.h;
  const double span = 12.0 * h;
  const double sgn = side == Side::outer ? 1.0 : -1.0;

  std::vector<std::array<double, 3>> rows;  // z_s, z_t, value
  for (int a = 0; a < 10; ++a) {
    const double s = h + (span - h) * a / 9.0;
    for (int b = -4; b <= 4; ++b) {
      const double t = b * h;
      const Vec2 x = probe.p + (sgn * s) * probe.normal + t * probe.tangent;
      if (!f.grid.box.contains(x)) continue;
      if ((cache.interpolate_d(x) >= 0.0) != (side == Side::outer)) continue;
      double v;
      try {
        v = sample_one_sided(f, cache, x, side);
      } catch (const Error&) {
        continue;
      }
      rows.push_back({sgn * s / span, t / span, v});
    }
  }
  std::vector<std::array<int, 2>> monomials;
  for (int tot = 0; tot <= kDegree; ++tot)
    for (int q = 0; q <= tot; ++q) monomials.push_back({tot - q, q});
  if (rows.size() < 2 * monomials.size())
    throw Error(ErrorCode::probe_crosses_interface, "too few one-sided samples for a local fit");

  Eigen::MatrixXd A(rows.size(), monomials.size());
  Eigen::VectorXd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < monomials.size(); ++c)
      A(r, c) = std::pow(rows[r][0], monomials[c][0]) * std::pow(rows[r][1], monomials[c][1]);
    b(r) = rows[r][2];
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
  for (std::size_t c = 0; c < monomials.size(); ++c) {
    if (monomials[c][0] == normal_order && monomials[c][1] == tangent_order)
      return factorial(normal_order) * factorial(tangent_order) * coef(c) /
             std::pow(span, normal_order + tangent_order);
  }
  return 0.0;
}

int central_half_width(int order) { return order % 2 == 0 ? order / 2 : (order + 1) / 2; }

namespace {

// Centered 1D stencil for the order-p derivative (unscaled by h^p).
std::vector<double> central_stencil(int order) {
  std::vector<double> st{1.0};
  const auto convolve = [](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  for (int k = 0; k < order / 2; ++k) st = convolve(st, {1.0, -2.0, 1.0});
  if (order % 2 == 1) st = convolve(st, {-0.5, 0.0, 0.5});
  return st;
}

}  // namespace

GridField central_derivative(const GridField& f, int ax, int ay) {
  const Grid& g = f.grid;
  const auto sx = central_stencil(ax), sy = central_stencil(ay);
  const int hx = static_cast<int>(sx.size() / 2), hy = static_cast<int>(sy.size() / 2);
  const double scale = 1.0 / (std::pow(g.h, ax) * std::pow(g.h, ay));
  GridField out = GridField::zeros(g);
  for (int j = hy; j < g.n - hy; ++j) {
    for (int i = hx; i < g.n - hx; ++i) {
      double v = 0.0;
      for (int b = 0; b < static_cast<int>(sy.size()); ++b) {
        if (sy[b] == 0.0) continue;
        double row = 0.0;
        for (int a = 0; a < static_cast<int>(sx.size()); ++a) row += sx[a] * f(i - hx + a, j - hy + b);
        v += sy[b] * row;
      }
      out(i, j) = v * scale;
    }
  }
  return out;
}

}  // namespace polyjump
