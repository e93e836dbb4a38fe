#pragma once

#include <functional>
#include <string>

#include "geometry.hpp"
#include "grid.hpp"

namespace polyjump {

/// Density Q on the interface. Values are queried by curve parameter; the
/// ambient form restricts a function on the plane to the curve.
class SurfaceDensity {
 public:
  static SurfaceDensity constant(double q);
  /// Q(t) = mean + amplitude cos(k t), t the curve parameter.
  static SurfaceDensity cosine_mode(double mean, double amplitude, int k);
  static SurfaceDensity parametric(std::function<double(double)> q, std::string label = "parametric");
  static SurfaceDensity ambient(std::function<double(Vec2)> q, std::string label = "ambient");

  double value(const Curve& curve, double t) const;
  /// First and second derivatives with respect to arc length.
  double d_ds(const Curve& curve, double t) const;
  double d2_ds2(const Curve& curve, double t) const;

  bool is_constant() const { return kind_ == Kind::constant; }
  bool is_zero() const { return kind_ == Kind::constant && mean_ == 0.0; }
  std::string describe() const;

  /// Parameter step for finite-difference derivatives of non-analytic forms.
  static constexpr double kParamStep = 1e-4 * Curve::period;

 private:
  enum class Kind { constant, cosine, parametric, ambient };
  SurfaceDensity() = default;

  // dQ/dt and d2Q/dt2 in the curve parameter.
  double d_dt(const Curve& curve, double t) const;
  double d2_dt2(const Curve& curve, double t) const;

  Kind kind_ = Kind::constant;
  double mean_ = 0.0;
  double amplitude_ = 0.0;
  int k_ = 0;
  std::function<double(double)> param_;
  std::function<double(Vec2)> ambient_;
  std::string label_;
};

/// Arc-length integral of Q over the curve (periodic trapezoid rule).
double surface_integral(const Curve& curve, const SurfaceDensity& q, int samples = 4096);

struct MeasureLoad {
  GridField load;  // per-node weights; divide by h^2 for a finite-difference rhs
  double total_mass = 0.0;
};

/// L_i = int_Gamma Q phi_i ds with bilinear hats phi_i, periodic trapezoid rule
/// with `samples_per_cell` samples per cell length of curve.
MeasureLoad surface_load_collocation(const GeometryCache& cache, const Curve& curve, const SurfaceDensity& q,
                                     int samples_per_cell = 8);

/// L_i = h^2 Q~(x_i) delta_w(d(x_i)) with the cosine kernel of width
/// w = width_cells h. Throws TubeTooNarrow if w > eps / 2.
MeasureLoad surface_load_regularized(const GeometryCache& cache, const Curve& curve, const SurfaceDensity& q,
                                     double width_cells, double eps);

/// Quintic smoothstep cutoff: 1 for a <= eps/2, 0 for a >= eps.
struct CutoffProfile {
  double eps = 0.0;

  double value(double a) const;
  double d1(double a) const;
  double d2(double a) const;
};

/// Pointwise corrector data at one point with known projection.
struct CorrectorPoint {
  double w = 0.0;
  double residual = 0.0;  // r = -Laplace(w) off the interface
  double qtilde = 0.0;
  double psi = 0.0;
};

/// w = -psi Q~ |d| / 2 and r = -Laplace(w) evaluated from tube calculus. At
/// |d| < 1e-12 r is the mean of the two one-sided limits. Throws TubeDegenerate
/// if 1 + d kappa <= 0.1 inside the tube.
CorrectorPoint corrector_at(const Curve& curve, const SurfaceDensity& q, double eps, const Projection& pr);

struct CorrectorBundle {
  GridField w;
  GridField residual_rhs;   // pointwise r at nodes
  GridField residual_load;  // r averaged over cut cells, used by the remainder solve
  GridField qtilde;
  GridField psi;
  CutoffProfile cutoff;
  int cut_cells = 0;
};

CorrectorBundle build_corrector(const GeometryCache& cache, const Curve& curve, const SurfaceDensity& q, double eps,
                                int workers = 1);

/// Smooth bump phi(x) = A exp(1 - 1/(1 - |x - c|^2 / a^2)), supported in the
/// disk of radius a about c.
struct Bump {
  Vec2 center;
  double radius = 0.1;
  double amplitude = 1.0;

  double value(Vec2 x) const;
  /// Second partial derivative d^2 phi / dx_i dx_j, i, j in {1, 2}.
  double hessian(Vec2 x, int i, int j) const;
};

struct HessianIdentityTerms {
  double volume_lhs = 0.0;  // int (Q~ |d| / 2) d_ij phi
  double surface = 0.0;     // int_Gamma Q nu_i nu_j phi ds
  double volume_g = 0.0;    // int g_ij phi
  double residual = 0.0;    // |lhs - surface - volume_g|
};

/// Quadrature check of the identity d_ij (Q~ |d| / 2) = Q nu_i nu_j dH1 + g_ij
/// tested against phi. Area integrals use the midpoint rule on a tube
/// coordinate grid of spacing h split at the interface. Throws SupportViolation
/// if the bump is not contained in the tube.
HessianIdentityTerms validate_hessian_identity(const Curve& curve, const SurfaceDensity& q, double eps,
                                               const Bump& phi, int i, int j, double h);

/// The smooth part g_ij at a point with tube coordinates (t, s), s != 0.
double hessian_g(const Curve& curve, const SurfaceDensity& q, double t, double s, int i, int j);

}  // namespace polyjump
