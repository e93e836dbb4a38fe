#include "geometry.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>

#include "error.hpp"

namespace polyjump {

namespace {

constexpr double kTwoPi = Curve::period;

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

// Golden-section minimization of f on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi, double tol = 1e-13) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Global minimum of a smooth periodic function: dense samples, then golden
// refinement around the best sample.
template <class F>
double periodic_min(F&& f, int samples) {
  int best = 0;
  double fbest = std::numeric_limits<double>::infinity();
  const double dt = kTwoPi / samples;
  for (int k = 0; k < samples; ++k) {
    const double v = f(k * dt);
    if (v < fbest) {
      fbest = v;
      best = k;
    }
  }
  const double t = golden_min(f, (best - 1) * dt, (best + 1) * dt);
  return std::min(fbest, f(t));
}

}  // namespace

Curve::Curve(CurveKind kind, Vec2 center, double a, double b, std::vector<CosineMode> modes)
    : kind_(kind), center_(center), a_(a), b_(b), modes_(std::move(modes)) {
  constexpr int kSamples = 4096;
  double len = 0.0;
  for (int k = 0; k < kSamples; ++k) len += speed(k * kTwoPi / kSamples);
  length_ = len * kTwoPi / kSamples;

  switch (kind_) {
    case CurveKind::circle:
      max_abs_kappa_ = 1.0 / a_;
      break;
    case CurveKind::ellipse:
      max_abs_kappa_ = std::max(a_ / (b_ * b_), b_ / (a_ * a_));
      break;
    case CurveKind::fourier_star:
      max_abs_kappa_ = -periodic_min([this](double t) { return -std::abs(curvature(t)); }, 8192);
      break;
  }
}

Curve Curve::circle(Vec2 center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error(ErrorCode::invalid_argument, "circle radius must be positive");
  return Curve(CurveKind::circle, center, radius, radius, {});
}

Curve Curve::ellipse(Vec2 center, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorCode::invalid_argument, "ellipse semi-axes must be positive");
  return Curve(CurveKind::ellipse, center, a, b, {});
}

Curve Curve::fourier_star(Vec2 center, double r0, std::vector<CosineMode> modes) {
  if (!(r0 > 0.0) || !std::isfinite(r0))
    throw Error(ErrorCode::invalid_argument, "fourier-star base radius must be positive");
  for (const auto& m : modes) {
    if (m.k < 1 || !std::isfinite(m.amplitude))
      throw Error(ErrorCode::invalid_argument, "fourier-star modes need k >= 1 and finite amplitude");
  }
  Curve c(CurveKind::fourier_star, center, r0, r0, std::move(modes));
  const double rmin = periodic_min([&c](double t) { return c.star_r(t, 0); }, 8192);
  if (!(rmin > 0.0))
    throw Error(ErrorCode::invalid_argument, "fourier-star radius r(t) must stay positive");
  return c;
}

double Curve::star_r(double t, int order) const {
  double r = order == 0 ? a_ : 0.0;
  for (const auto& m : modes_) {
    const double k = m.k;
    const double c = std::cos(k * t), s = std::sin(k * t);
    switch (order) {
      case 0: r += m.amplitude * c; break;
      case 1: r -= m.amplitude * k * s; break;
      case 2: r -= m.amplitude * k * k * c; break;
      default: r += m.amplitude * k * k * k * s; break;
    }
  }
  return r;
}

Vec2 Curve::point(double t) const {
  const double c = std::cos(t), s = std::sin(t);
  switch (kind_) {
    case CurveKind::circle: return center_ + Vec2{a_ * c, a_ * s};
    case CurveKind::ellipse: return center_ + Vec2{a_ * c, b_ * s};
    case CurveKind::fourier_star: return center_ + star_r(t, 0) * Vec2{c, s};
  }
  return center_;
}

Vec2 Curve::d1(double t) const {
  const double c = std::cos(t), s = std::sin(t);
  switch (kind_) {
    case CurveKind::circle: return {-a_ * s, a_ * c};
    case CurveKind::ellipse: return {-a_ * s, b_ * c};
    case CurveKind::fourier_star: {
      const Vec2 u{c, s};
      return star_r(t, 1) * u + star_r(t, 0) * u.perp();
    }
  }
  return {};
}

Vec2 Curve::d2(double t) const {
  const double c = std::cos(t), s = std::sin(t);
  switch (kind_) {
    case CurveKind::circle: return {-a_ * c, -a_ * s};
    case CurveKind::ellipse: return {-a_ * c, -b_ * s};
    case CurveKind::fourier_star: {
      const Vec2 u{c, s};
      return (star_r(t, 2) - star_r(t, 0)) * u + 2.0 * star_r(t, 1) * u.perp();
    }
  }
  return {};
}

Vec2 Curve::d3(double t) const {
  const double c = std::cos(t), s = std::sin(t);
  switch (kind_) {
    case CurveKind::circle: return {a_ * s, -a_ * c};
    case CurveKind::ellipse: return {a_ * s, -b_ * c};
    case CurveKind::fourier_star: {
      const Vec2 u{c, s};
      return (star_r(t, 3) - 3.0 * star_r(t, 1)) * u +
             (3.0 * star_r(t, 2) - star_r(t, 0)) * u.perp();
    }
  }
  return {};
}

Vec2 Curve::tangent(double t) const {
  const Vec2 v = d1(t);
  return v * (1.0 / v.norm());
}

Vec2 Curve::normal(double t) const {
  const Vec2 tau = tangent(t);
  return {tau.y, -tau.x};
}

double Curve::curvature(double t) const {
  if (kind_ == CurveKind::circle) return 1.0 / a_;
  const Vec2 p = d1(t), q = d2(t);
  const double s = p.norm();
  return (p.x * q.y - p.y * q.x) / (s * s * s);
}

double Curve::curvature_ds(double t) const {
  if (kind_ == CurveKind::circle) return 0.0;
  const Vec2 p = d1(t), q = d2(t), r = d3(t);
  const double s = p.norm();
  const double cross = p.x * q.y - p.y * q.x;
  const double dk_dt = (p.x * r.y - p.y * r.x) / (s * s * s) - 3.0 * cross * p.dot(q) / std::pow(s, 5);
  return dk_dt / s;
}

std::string Curve::describe() const {
  char buf[256];
  switch (kind_) {
    case CurveKind::circle:
      std::snprintf(buf, sizeof buf, "circle(center=(%g,%g), r=%g)", center_.x, center_.y, a_);
      return buf;
    case CurveKind::ellipse:
      std::snprintf(buf, sizeof buf, "ellipse(center=(%g,%g), a=%g, b=%g)", center_.x, center_.y, a_, b_);
      return buf;
    case CurveKind::fourier_star: {
      std::string out;
      std::snprintf(buf, sizeof buf, "fourier-star(center=(%g,%g), r0=%g", center_.x, center_.y, a_);
      out = buf;
      for (const auto& m : modes_) {
        std::snprintf(buf, sizeof buf, ", a%d=%g", m.k, m.amplitude);
        out += buf;
      }
      return out + ")";
    }
  }
  return "curve";
}

namespace {

double dist_derivative(const Curve& c, Vec2 x, double t) { return (c.point(t) - x).dot(c.d1(t)); }

double dist_second_derivative(const Curve& c, Vec2 x, double t) {
  const Vec2 v = c.d1(t);
  return v.dot(v) + (c.point(t) - x).dot(c.d2(t));
}

// Safeguarded Newton on g(t) = (gamma(t) - x) . gamma'(t) inside [lo, hi].
bool polish(const Curve& c, Vec2 x, double t0, double lo, double hi, double& t_out) {
  double glo = dist_derivative(c, x, lo);
  double ghi = dist_derivative(c, x, hi);
  const bool bracket = glo <= 0.0 && ghi >= 0.0;
  const double width = hi - lo;
  double t = t0;
  for (int it = 0; it < 80; ++it) {
    const double g = dist_derivative(c, x, t);
    if (g == 0.0) break;
    const double gp = dist_second_derivative(c, x, t);
    double tn = t - g / gp;
    if (bracket) {
      if (g < 0.0) lo = t; else hi = t;
      if (!(gp > 0.0) || !(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    } else {
      if (!(gp > 0.0)) return false;
      const double step = std::clamp(tn - t, -width, width);
      tn = t + step;
    }
    if (std::abs(tn - t) <= 1e-15 * (1.0 + std::abs(t))) {
      t = tn;
      break;
    }
    t = tn;
  }
  // Orthogonality residual relative to the size of x; a residual relative to
  // the distance itself cannot be met for points within roundoff of the curve.
  const Vec2 diff = x - c.point(t);
  const double scale = 1.0 + std::abs(x.x) + std::abs(x.y);
  const double resid = std::abs(diff.dot(c.d1(t))) / (scale * c.speed(t));
  if (!(resid <= 1e-12)) return false;
  t_out = t;
  return true;
}

bool multistart(const Curve& c, Vec2 x, int samples, int starts, double& t_best) {
  const double dt = kTwoPi / samples;
  std::vector<double> dist2(samples);
  for (int k = 0; k < samples; ++k) {
    const Vec2 v = c.point(k * dt) - x;
    dist2[k] = v.dot(v);
  }
  std::vector<int> minima;
  for (int k = 0; k < samples; ++k) {
    const double prev = dist2[(k + samples - 1) % samples];
    const double next = dist2[(k + 1) % samples];
    if (dist2[k] <= prev && dist2[k] <= next) minima.push_back(k);
  }
  std::sort(minima.begin(), minima.end(), [&](int a, int b) {
    return dist2[a] < dist2[b] || (dist2[a] == dist2[b] && a < b);
  });
  if (static_cast<int>(minima.size()) > starts) minima.resize(starts);

  bool found = false;
  double best = std::numeric_limits<double>::infinity();
  for (int k : minima) {
    double t;
    if (!polish(c, x, k * dt, (k - 1) * dt, (k + 1) * dt, t)) continue;
    const double d = (c.point(t) - x).norm();
    if (d < best) {
      best = d;
      t_best = t;
      found = true;
    }
  }
  return found;
}

}  // namespace

Projection project_to_curve(const Curve& curve, Vec2 x) {
  Projection pr;
  if (curve.kind() == CurveKind::circle) {
    const Vec2 rel = x - curve.center();
    const double r = rel.norm();
    pr.t = r > 0.0 ? wrap_angle(std::atan2(rel.y, rel.x)) : 0.0;
    pr.normal = {std::cos(pr.t), std::sin(pr.t)};
    pr.foot = curve.center() + curve.radius() * pr.normal;
    pr.d = r - curve.radius();
    pr.kappa = 1.0 / curve.radius();
    return pr;
  }

  int max_k = 1;
  for (const auto& m : curve.modes()) max_k = std::max(max_k, m.k);
  double t = 0.0;
  if (!multistart(curve, x, std::max(64, 16 * max_k), 3, t) && !multistart(curve, x, 2048, 1, t)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "projection of (%.6g, %.6g) did not converge", x.x, x.y);
    throw Error(ErrorCode::no_convergence, buf);
  }
  pr.t = wrap_angle(t);
  pr.foot = curve.point(t);
  pr.normal = curve.normal(t);
  pr.kappa = curve.curvature(t);
  const Vec2 diff = x - pr.foot;
  const double dist = diff.norm();
  pr.d = diff.dot(pr.normal) >= 0.0 ? dist : -dist;
  return pr;
}

double distance_to_rect_boundary(const Curve& curve, const Rect& box) {
  if (curve.kind() == CurveKind::circle) {
    const Vec2 c = curve.center();
    const double r = curve.radius();
    return std::min(std::min(c.x - r - box.x0, box.x1 - c.x - r), std::min(c.y - r - box.y0, box.y1 - c.y - r));
  }
  return periodic_min([&](double t) { return box.distance_to_boundary(curve.point(t)); }, 8192);
}

double tube_radius(const Curve& curve, const Rect& box) {
  const double dist = distance_to_rect_boundary(curve, box);
  if (!(dist > 0.0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s reaches the domain boundary (distance %.6g)", curve.describe().c_str(), dist);
    throw Error(ErrorCode::interface_touches_boundary, buf);
  }
  return std::min(0.5 / curve.max_abs_curvature(), 0.5 * dist);
}

}  // namespace polyjump
