#include "assembly.hpp"

#include <cmath>
#include <cstdio>

#include "error.hpp"
#include "parallel.hpp"

namespace polyjump {

SurfaceDensity SurfaceDensity::constant(double q) {
  SurfaceDensity s;
  s.kind_ = Kind::constant;
  s.mean_ = q;
  return s;
}

SurfaceDensity SurfaceDensity::cosine_mode(double mean, double amplitude, int k) {
  SurfaceDensity s;
  s.kind_ = amplitude == 0.0 ? Kind::constant : Kind::cosine;
  s.mean_ = mean;
  s.amplitude_ = amplitude;
  s.k_ = k;
  return s;
}

SurfaceDensity SurfaceDensity::parametric(std::function<double(double)> q, std::string label) {
  if (!q) throw Error(ErrorCode::invalid_argument, "empty parametric density");
  SurfaceDensity s;
  s.kind_ = Kind::parametric;
  s.param_ = std::move(q);
  s.label_ = std::move(label);
  return s;
}

SurfaceDensity SurfaceDensity::ambient(std::function<double(Vec2)> q, std::string label) {
  if (!q) throw Error(ErrorCode::invalid_argument, "empty ambient density");
  SurfaceDensity s;
  s.kind_ = Kind::ambient;
  s.ambient_ = std::move(q);
  s.label_ = std::move(label);
  return s;
}

double SurfaceDensity::value(const Curve& curve, double t) const {
  switch (kind_) {
    case Kind::constant:
      return mean_;
    case Kind::cosine:
      return mean_ + amplitude_ * std::cos(k_ * t);
    case Kind::parametric:
      return param_(t);
    case Kind::ambient:
      return ambient_(curve.point(t));
  }
  return 0.0;
}

double SurfaceDensity::d_dt(const Curve& curve, double t) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::cosine:
      return -amplitude_ * k_ * std::sin(k_ * t);
    default: {
      const double dt = kParamStep;
      return (value(curve, t + dt) - value(curve, t - dt)) / (2.0 * dt);
    }
  }
}

double SurfaceDensity::d2_dt2(const Curve& curve, double t) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::cosine:
      return -amplitude_ * k_ * k_ * std::cos(k_ * t);
    default: {
      const double dt = kParamStep;
      return (value(curve, t + dt) - 2.0 * value(curve, t) + value(curve, t - dt)) / (dt * dt);
    }
  }
}

double SurfaceDensity::d_ds(const Curve& curve, double t) const {
  if (kind_ == Kind::constant) return 0.0;
  return d_dt(curve, t) / curve.speed(t);
}

double SurfaceDensity::d2_ds2(const Curve& curve, double t) const {
  if (kind_ == Kind::constant) return 0.0;
  const Vec2 g1 = curve.d1(t), g2 = curve.d2(t);
  const double sp = g1.norm();
  const double sp_t = g1.dot(g2) / sp;
  return d2_dt2(curve, t) / (sp * sp) - d_dt(curve, t) * sp_t / (sp * sp * sp);
}

std::string SurfaceDensity::describe() const {
  char buf[128];
  switch (kind_) {
    case Kind::constant:
      std::snprintf(buf, sizeof buf, "constant %.17g", mean_);
      return buf;
    case Kind::cosine:
      std::snprintf(buf, sizeof buf, "%.17g + %.17g cos(%d t)", mean_, amplitude_, k_);
      return buf;
    default:
      return label_;
  }
}

double surface_integral(const Curve& curve, const SurfaceDensity& q, int samples) {
  const double dt = Curve::period / samples;
  double s = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = k * dt;
    s += q.value(curve, t) * curve.speed(t);
  }
  return s * dt;
}

MeasureLoad surface_load_collocation(const GeometryCache& cache, const Curve& curve, const SurfaceDensity& q,
                                     int samples_per_cell) {
  const Grid& g = cache.grid;
  const long cells = static_cast<long>(std::ceil(curve.length() / g.h));
  const long nsamp = static_cast<long>(samples_per_cell) * cells;
  if (samples_per_cell < 1 || nsamp < 64) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%ld quadrature samples along the interface (need >= 64)", nsamp);
    throw Error(ErrorCode::quadrature_underresolved, buf);
  }
  MeasureLoad out{GridField::zeros(g), 0.0};
  const double dt = Curve::period / static_cast<double>(nsamp);
  for (long k = 0; k < nsamp; ++k) {
    const double t = k * dt;
    const double weight = q.value(curve, t) * curve.speed(t) * dt;
    if (weight == 0.0) continue;
    const Vec2 x = curve.point(t);
    const double gx = (x.x - g.box.x0) / g.h, gy = (x.y - g.box.y0) / g.h;
    const int i = std::clamp(static_cast<int>(std::floor(gx)), 0, g.n - 2);
    const int j = std::clamp(static_cast<int>(std::floor(gy)), 0, g.n - 2);
    const double fx = gx - i, fy = gy - j;
    out.load(i, j) += weight * (1 - fx) * (1 - fy);
    out.load(i + 1, j) += weight * fx * (1 - fy);
    out.load(i, j + 1) += weight * (1 - fx) * fy;
    out.load(i + 1, j + 1) += weight * fx * fy;
  }
  for (double v : out.load.values) out.total_mass += v;
  return out;
}

MeasureLoad surface_load_regularized(const GeometryCache& cache, const Curve& curve, const SurfaceDensity& q,
                                     double width_cells, double eps) {
  const Grid& g = cache.grid;
  const double w = width_cells * g.h;
  if (!(width_cells > 0.0)) throw Error(ErrorCode::invalid_argument, "regularization width must be positive");
  if (w > 0.5 * eps) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "kernel width %.6g exceeds half the tube radius %.6g", w, eps);
    throw Error(ErrorCode::tube_too_narrow, buf);
  }
  MeasureLoad out{GridField::zeros(g), 0.0};
  const double pi = std::numbers::pi;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const double s = cache.d[idx];
    if (std::abs(s) >= w) continue;
    const double delta = (1.0 + std::cos(pi * s / w)) / (2.0 * w);
    out.load.values[idx] = g.h * g.h * q.value(curve, cache.t[idx]) * delta;
  }
  for (double v : out.load.values) out.total_mass += v;
  return out;
}

namespace {

// Quintic smoothstep S(t) = 6t^5 - 15t^4 + 10t^3 and derivatives on [0, 1].
double smoothstep(double t, int order) {
  t = std::clamp(t, 0.0, 1.0);
  switch (order) {
    case 0:
      return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
    case 1:
      return 30.0 * t * t * (t - 1.0) * (t - 1.0);
    default:
      return 60.0 * t * (t - 1.0) * (2.0 * t - 1.0);
  }
}

}  // namespace

double CutoffProfile::value(double a) const {
  if (a <= 0.5 * eps) return 1.0;
  if (a >= eps) return 0.0;
  return 1.0 - smoothstep((a - 0.5 * eps) / (0.5 * eps), 0);
}

double CutoffProfile::d1(double a) const {
  if (a <= 0.5 * eps || a >= eps) return 0.0;
  return -smoothstep((a - 0.5 * eps) / (0.5 * eps), 1) * (2.0 / eps);
}

double CutoffProfile::d2(double a) const {
  if (a <= 0.5 * eps || a >= eps) return 0.0;
  return -smoothstep((a - 0.5 * eps) / (0.5 * eps), 2) * (4.0 / (eps * eps));
}

CorrectorPoint corrector_at(const Curve& curve, const SurfaceDensity& q, double eps, const Projection& pr) {
  CorrectorPoint out;
  const double s = pr.d;
  const double a = std::abs(s);
  if (a >= eps) return out;
  const double kappa = pr.kappa;
  const double jac = 1.0 + s * kappa;
  if (jac <= 0.1) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "1 + d kappa = %.4g at distance %.6g from the interface", jac, s);
    throw Error(ErrorCode::tube_degenerate, buf);
  }
  const CutoffProfile psi{eps};
  const double p0 = psi.value(a), p1 = psi.d1(a), p2 = psi.d2(a);
  const double qv = q.value(curve, pr.t);
  double lap_q = 0.0;
  if (!q.is_constant()) {
    const double qs = q.d_ds(curve, pr.t), qss = q.d2_ds2(curve, pr.t);
    const double kappa_s = curve.curvature_ds(pr.t);
    lap_q = qss / (jac * jac) - s * kappa_s * qs / (jac * jac * jac);
  }
  const double f = 0.5 * p0 * a;
  const double f2 = 0.5 * p2 * a + p1;
  auto side_residual = [&](double sg) {
    const double f1 = sg * 0.5 * (p1 * a + p0);
    return qv * (f2 + f1 * kappa / jac) + f * lap_q;
  };
  out.w = -p0 * qv * a / 2.0;
  out.residual = a < 1e-12 ? 0.5 * (side_residual(1.0) + side_residual(-1.0)) : side_residual(s > 0 ? 1.0 : -1.0);
  out.qtilde = qv;
  out.psi = p0;
  return out;
}

CorrectorBundle build_corrector(const GeometryCache& cache, const Curve& curve, const SurfaceDensity& q, double eps,
                                int workers) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "tube radius must be positive");
  const Grid& g = cache.grid;
  CorrectorBundle b{GridField::zeros(g), GridField::zeros(g), GridField::zeros(g), GridField::zeros(g),
                    GridField::zeros(g), CutoffProfile{eps}, 0};
  const double cut = g.h / std::sqrt(2.0);
  constexpr int kSub = 8;

  std::vector<char> is_cut(g.size(), 0);
  parallel_for(
      g.size(), workers,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t idx = lo; idx < hi; ++idx) {
          const Projection pr{cache.t[idx], cache.d[idx], cache.foot[idx], cache.normal[idx], cache.kappa[idx]};
          const CorrectorPoint c = corrector_at(curve, q, eps, pr);
          b.w.values[idx] = c.w;
          b.residual_rhs.values[idx] = c.residual;
          b.qtilde.values[idx] = std::abs(pr.d) < eps ? c.qtilde : 0.0;
          b.psi.values[idx] = c.psi;

          const int i = static_cast<int>(idx % g.n), j = static_cast<int>(idx / g.n);
          if (std::abs(pr.d) >= cut || g.is_boundary(i, j)) {
            b.residual_load.values[idx] = c.residual;
            continue;
          }
          // Dual cell cut by the interface: average r over sub-cell midpoints.
          is_cut[idx] = 1;
          const Vec2 x = g.node(i, j);
          double sum = 0.0;
          for (int sb = 0; sb < kSub; ++sb) {
            for (int sa = 0; sa < kSub; ++sa) {
              const Vec2 y{x.x + g.h * ((sa + 0.5) / kSub - 0.5), x.y + g.h * ((sb + 0.5) / kSub - 0.5)};
              sum += corrector_at(curve, q, eps, project_to_curve(curve, y)).residual;
            }
          }
          b.residual_load.values[idx] = sum / (kSub * kSub);
        }
      },
      64);
  for (char c : is_cut) b.cut_cells += c;
  return b;
}

double Bump::value(Vec2 x) const {
  const Vec2 r = x - center;
  const double q = r.dot(r) / (radius * radius);
  if (q >= 1.0) return 0.0;
  return amplitude * std::exp(1.0 - 1.0 / (1.0 - q));
}

double Bump::hessian(Vec2 x, int i, int j) const {
  const Vec2 r = x - center;
  const double a2 = radius * radius;
  const double q = r.dot(r) / a2;
  if (q >= 1.0) return 0.0;
  const double phi = amplitude * std::exp(1.0 - 1.0 / (1.0 - q));
  const double om = 1.0 - q;
  const double phi_q = -phi / (om * om);
  const double phi_qq = phi * (1.0 / (om * om * om * om) - 2.0 / (om * om * om));
  const double ri = i == 1 ? r.x : r.y, rj = j == 1 ? r.x : r.y;
  const double qi = 2.0 * ri / a2, qj = 2.0 * rj / a2;
  return phi_qq * qi * qj + (i == j ? phi_q * 2.0 / a2 : 0.0);
}

namespace {

double comp(Vec2 v, int i) { return i == 1 ? v.x : v.y; }

}  // namespace

double hessian_g(const Curve& curve, const SurfaceDensity& q, double t, double s, int i, int j) {
  const Vec2 tau = curve.tangent(t), nu = curve.normal(t);
  const double kappa = curve.curvature(t);
  const double jac = 1.0 + s * kappa;
  const double qv = q.value(curve, t);
  double qs = 0.0, qss = 0.0, kappa_s = 0.0;
  if (!q.is_constant()) {
    qs = q.d_ds(curve, t);
    qss = q.d2_ds2(curve, t);
    kappa_s = curve.curvature_ds(t);
  }
  const double ti = comp(tau, i), tj = comp(tau, j), ni = comp(nu, i), nj = comp(nu, j);
  const double tt = ti * tj, nt_sym = ni * tj + ti * nj;
  const double hess_q =
      qss * tt / (jac * jac) + qs * (-kappa * nt_sym / (jac * jac) - s * kappa_s * tt / (jac * jac * jac));
  const double grad_q_i = qs * ti / jac, grad_q_j = qs * tj / jac;
  const double hess_d = kappa / jac * tt;
  const double sg = s > 0.0 ? 1.0 : -1.0;
  return sg * (0.5 * s * hess_q + 0.5 * (grad_q_i * nj + ni * grad_q_j) + 0.5 * qv * hess_d);
}

HessianIdentityTerms validate_hessian_identity(const Curve& curve, const SurfaceDensity& q, double eps,
                                               const Bump& phi, int i, int j, double h) {
  if (i < 1 || i > 2 || j < 1 || j > 2) throw Error(ErrorCode::invalid_argument, "(i, j) must be in {1, 2}");
  if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "quadrature spacing must be positive");
  const Projection pc = project_to_curve(curve, phi.center);
  if (std::abs(pc.d) + phi.radius >= eps) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "test function support (|d| %.4g + radius %.4g) leaves the tube of radius %.4g",
                  std::abs(pc.d), phi.radius, eps);
    throw Error(ErrorCode::support_violation, buf);
  }
  HessianIdentityTerms out;
  if (phi.amplitude == 0.0) return out;

  const int nt = static_cast<int>(std::ceil(curve.length() / h));
  const int ns = static_cast<int>(std::ceil(eps / h));
  const double dt = Curve::period / nt, ds = eps / ns;
  for (int k = 0; k < nt; ++k) {
    const double t = (k + 0.5) * dt;
    const Vec2 p = curve.point(t), nu = curve.normal(t);
    const double sp = curve.speed(t), kappa = curve.curvature(t);
    const double qv = q.value(curve, t);
    out.surface += qv * comp(nu, i) * comp(nu, j) * phi.value(p) * sp * dt;
    for (int side = -1; side <= 1; side += 2) {
      for (int l = 0; l < ns; ++l) {
        const double s = side * (l + 0.5) * ds;
        const Vec2 x = p + s * nu;
        const double val = phi.value(x);
        const double hij = phi.hessian(x, i, j);
        if (val == 0.0 && hij == 0.0) continue;
        const double area = sp * (1.0 + s * kappa) * dt * ds;
        out.volume_lhs += 0.5 * qv * std::abs(s) * hij * area;
        out.volume_g += hessian_g(curve, q, t, s, i, j) * val * area;
      }
    }
  }
  out.residual = std::abs(out.volume_lhs - out.surface - out.volume_g);
  return out;
}

}  // namespace polyjump
