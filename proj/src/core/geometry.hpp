#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace polyjump {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  // Counter-clockwise rotation by 90 degrees.
  Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

struct Rect {
  double x0 = -1.0;
  double x1 = 1.0;
  double y0 = -1.0;
  double y1 = 1.0;

  bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  double distance_to_boundary(Vec2 p) const {
    return std::min(std::min(p.x - x0, x1 - p.x), std::min(p.y - y0, y1 - p.y));
  }
};

enum class CurveKind { circle, ellipse, fourier_star };

struct CosineMode {
  int k = 0;
  double amplitude = 0.0;
};

/// Closed, counter-clockwise parametrized C^infinity curve. The parameter t runs
/// over [0, 2*pi); for the circle and the Fourier star it is the polar angle
/// about the center.
class Curve {
 public:
  static constexpr double period = 2.0 * std::numbers::pi;

  static Curve circle(Vec2 center, double radius);
  static Curve ellipse(Vec2 center, double a, double b);
  /// r(t) = r0 + sum_k a_k cos(k t); requires r(t) > 0 for all t.
  static Curve fourier_star(Vec2 center, double r0, std::vector<CosineMode> modes);

  CurveKind kind() const { return kind_; }
  Vec2 center() const { return center_; }
  double radius() const { return a_; }  // circle radius, ellipse a, star r0
  double semi_axis_b() const { return b_; }
  const std::vector<CosineMode>& modes() const { return modes_; }

  Vec2 point(double t) const;
  Vec2 d1(double t) const;
  Vec2 d2(double t) const;
  Vec2 d3(double t) const;

  double speed(double t) const { return d1(t).norm(); }
  Vec2 tangent(double t) const;
  /// Outward unit normal of the enclosed region.
  Vec2 normal(double t) const;
  /// Signed curvature, positive for convex counter-clockwise arcs.
  double curvature(double t) const;
  /// Derivative of curvature with respect to arc length.
  double curvature_ds(double t) const;

  double length() const { return length_; }
  double max_abs_curvature() const { return max_abs_kappa_; }

  std::string describe() const;

 private:
  Curve(CurveKind kind, Vec2 center, double a, double b, std::vector<CosineMode> modes);

  // Star radius function and derivatives.
  double star_r(double t, int order) const;

  CurveKind kind_;
  Vec2 center_;
  double a_;
  double b_;
  std::vector<CosineMode> modes_;
  double length_ = 0.0;
  double max_abs_kappa_ = 0.0;
};

struct Projection {
  double t = 0.0;
  double d = 0.0;  // signed distance, negative inside
  Vec2 foot;
  Vec2 normal;
  double kappa = 0.0;
};

/// Nearest-point projection onto the curve. Signed distance is negative inside
/// the enclosed region.
Projection project_to_curve(const Curve& curve, Vec2 x);

/// Minimum over the curve of the distance to the rectangle boundary; negative
/// if the curve leaves the rectangle.
double distance_to_rect_boundary(const Curve& curve, const Rect& box);

/// Tube radius eps = min(1 / (2 max|kappa|), dist(curve, boundary) / 2).
double tube_radius(const Curve& curve, const Rect& box);

}  // namespace polyjump
