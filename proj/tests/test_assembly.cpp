#include <cmath>
#include <numbers>

#include "assembly.hpp"
#include "doctest.h"
#include "error.hpp"
#include "geometry.hpp"
#include "grid.hpp"

using namespace polyjump;
using doctest::Approx;

namespace {

const Curve kCircle = Curve::circle({0.0, 0.0}, 0.5);

}  // namespace

TEST_CASE("collocation load mass is the line integral of Q") {
  const Grid g = Grid::make(Rect{}, 129);
  const GeometryCache cache = build_geometry_cache(kCircle, g);
  const MeasureLoad one = surface_load_collocation(cache, kCircle, SurfaceDensity::constant(1.0));
  CHECK(one.total_mass == Approx(std::numbers::pi).epsilon(1e-8));
  double sum = 0.0;
  for (double v : one.load.values) sum += v;
  CHECK(sum == Approx(std::numbers::pi).epsilon(1e-8));

  const MeasureLoad zero = surface_load_collocation(cache, kCircle, SurfaceDensity::constant(0.0));
  for (double v : zero.load.values) CHECK(v == 0.0);

  const MeasureLoad cosq = surface_load_collocation(cache, kCircle, SurfaceDensity::cosine_mode(0.0, 1.0, 1));
  CHECK(std::abs(cosq.total_mass) < 1e-8);
}

TEST_CASE("collocation mass on the ellipse and the star") {
  const Grid g = Grid::make(Rect{}, 129);
  for (const Curve& c : {Curve::ellipse({0.0, 0.0}, 0.6, 0.4), Curve::fourier_star({0.0, 0.0}, 0.5, {{3, 0.06}})}) {
    const GeometryCache cache = build_geometry_cache(c, g);
    const SurfaceDensity q = SurfaceDensity::cosine_mode(1.0, 0.5, 1);
    const MeasureLoad l = surface_load_collocation(cache, c, q);
    CHECK(l.total_mass == Approx(surface_integral(c, q, 1 << 14)).epsilon(1e-8));
  }
}

TEST_CASE("too few quadrature samples") {
  const Grid g = Grid::make(Rect{}, 17);
  const Curve tiny = Curve::circle({0.0, 0.0}, 0.2);
  const GeometryCache cache = build_geometry_cache(tiny, g);
  CHECK_THROWS_AS(surface_load_collocation(cache, tiny, SurfaceDensity::constant(1.0), 1), Error);
}

TEST_CASE("regularized load mass") {
  const Grid g = Grid::make(Rect{}, 257);
  const GeometryCache cache = build_geometry_cache(kCircle, g);
  const double eps = tube_radius(kCircle, Rect{});
  const MeasureLoad l = surface_load_regularized(cache, kCircle, SurfaceDensity::constant(1.0), 2.0, eps);
  CHECK(std::abs(l.total_mass - std::numbers::pi) / std::numbers::pi <= 0.01);
  const MeasureLoad z = surface_load_regularized(cache, kCircle, SurfaceDensity::constant(0.0), 2.0, eps);
  for (double v : z.load.values) CHECK(v == 0.0);
  CHECK_THROWS_AS(surface_load_regularized(cache, kCircle, SurfaceDensity::constant(1.0), 40.0, eps), Error);
}

TEST_CASE("regularized mass over several curvatures") {
  // the kernel is even, so the first-order coarea term d kappa integrates to zero
  const Grid g = Grid::make(Rect{}, 257);
  for (double r : {0.3, 0.5, 0.8}) {
    const Curve c = Curve::circle({0.0, 0.0}, r);
    const GeometryCache cache = build_geometry_cache(c, g);
    const MeasureLoad l =
        surface_load_regularized(cache, c, SurfaceDensity::constant(1.0), 3.0, tube_radius(c, Rect{}));
    CHECK(std::abs(l.total_mass - 2.0 * std::numbers::pi * r) / (2.0 * std::numbers::pi * r) <= 1e-3);
  }
}

TEST_CASE("corrector values at points with psi = 1") {
  const SurfaceDensity one = SurfaceDensity::constant(1.0);
  const double eps = 0.6;
  const CorrectorPoint out = corrector_at(kCircle, one, eps, project_to_curve(kCircle, {0.75, 0.0}));
  CHECK(out.psi == 1.0);
  CHECK(out.w == Approx(-0.125).epsilon(1e-14));
  CHECK(out.residual == Approx(2.0 / 3.0).epsilon(1e-12));
  const CorrectorPoint in = corrector_at(kCircle, one, eps, project_to_curve(kCircle, {0.25, 0.0}));
  CHECK(in.w == Approx(-0.125).epsilon(1e-14));
  CHECK(in.residual == Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("corrector residual equals minus the Laplacian of w off the interface") {
  const Curve e = Curve::ellipse({0.0, 0.0}, 0.6, 0.4);
  const SurfaceDensity q = SurfaceDensity::cosine_mode(1.0, 0.5, 2);
  const double eps = tube_radius(e, Rect{});
  const auto w = [&](Vec2 x) { return corrector_at(e, q, eps, project_to_curve(e, x)).w; };
  const double hs = 2.5e-4;
  for (double t : {0.3, 1.7, 3.9}) {
    for (double s : {-0.4, 0.3, 0.7}) {
      const Vec2 x = e.point(t) + e.normal(t) * (s * eps);
      const double lap = (w(x + Vec2{hs, 0}) + w(x - Vec2{hs, 0}) + w(x + Vec2{0, hs}) + w(x - Vec2{0, hs}) - 4 * w(x)) /
                         (hs * hs);
      const double r = corrector_at(e, q, eps, project_to_curve(e, x)).residual;
      CHECK(r == Approx(-lap).epsilon(1e-4).scale(1.0));
    }
  }
}

TEST_CASE("extended density is constant along normals") {
  const Curve s = Curve::fourier_star({0.0, 0.0}, 0.5, {{3, 0.06}});
  const SurfaceDensity q = SurfaceDensity::cosine_mode(1.0, 0.5, 1);
  const double eps = tube_radius(s, Rect{});
  for (double t : {0.1, 2.0, 4.5}) {
    const double q0 = q.value(s, t);
    for (double f : {-0.9, -0.3, 0.2, 0.8}) {
      const Projection pr = project_to_curve(s, s.point(t) + s.normal(t) * (f * eps));
      CHECK(std::abs(corrector_at(s, q, eps, pr).qtilde - q0) < 1e-12);
    }
  }
}

TEST_CASE("corrector fields do not depend on the grid") {
  const SurfaceDensity q = SurfaceDensity::constant(1.0);
  const double eps = tube_radius(kCircle, Rect{});
  const Grid c = Grid::make(Rect{}, 33), f = Grid::make(Rect{}, 65);
  const CorrectorBundle bc = build_corrector(build_geometry_cache(kCircle, c), kCircle, q, eps);
  const CorrectorBundle bf = build_corrector(build_geometry_cache(kCircle, f), kCircle, q, eps);
  for (int j = 0; j < 33; ++j)
    for (int i = 0; i < 33; ++i) {
      CHECK(bc.w(i, j) == bf.w(2 * i, 2 * j));
      CHECK(bc.residual_rhs(i, j) == bf.residual_rhs(2 * i, 2 * j));
    }
}

TEST_CASE("cutoff profile") {
  const CutoffProfile p{0.2};
  CHECK(p.value(0.05) == 1.0);
  CHECK(p.value(0.1) == 1.0);
  CHECK(p.value(0.2) == 0.0);
  CHECK(p.value(0.15) == Approx(0.5));
  CHECK(p.d1(0.1) == Approx(0.0));
  CHECK(p.d2(0.2) == Approx(0.0));
}

TEST_CASE("Hessian identity: zero test function and convergence") {
  const SurfaceDensity one = SurfaceDensity::constant(1.0);
  const double eps = tube_radius(kCircle, Rect{});
  const HessianIdentityTerms z = validate_hessian_identity(kCircle, one, eps, Bump{{0.5, 0.0}, 0.2, 0.0}, 1, 1, 1.0 / 64);
  CHECK(z.residual == 0.0);

  std::vector<double> res;
  for (int n : {65, 129, 257}) {
    const double h = 2.0 / (n - 1);
    res.push_back(validate_hessian_identity(kCircle, one, eps, Bump{{0.5, 0.0}, 0.9 * eps, 1.0}, 1, 1, h).residual);
  }
  const double order = std::log2(res[0] / res[2]) / 2.0;
  CHECK(order >= 1.5);

  // at t = 0 nu = (1, 0), so the surface term of the mixed pair vanishes there
  const HessianIdentityTerms mixed =
      validate_hessian_identity(kCircle, one, eps, Bump{{0.5, 0.0}, 0.9 * eps, 1.0}, 1, 2, 2.0 / 256);
  CHECK(std::abs(mixed.surface) < 1e-12);
  CHECK(mixed.residual < 1e-3);
}

TEST_CASE("Hessian identity rejects test functions leaving the tube") {
  const double eps = tube_radius(kCircle, Rect{});
  CHECK_THROWS_AS(validate_hessian_identity(kCircle, SurfaceDensity::constant(1.0), eps, Bump{{0.5, 0.0}, 0.5, 1.0},
                                            1, 1, 1.0 / 64),
                  Error);
}
