#include <cmath>

#include "doctest.h"
#include "error.hpp"
#include "geometry.hpp"
#include "grid.hpp"

using namespace polyjump;
using doctest::Approx;

namespace {

double max_interior(const GridField& f, const std::function<double(Vec2)>& want) {
  double worst = 0.0;
  const Grid& g = f.grid;
  for (int j = 1; j < g.n - 1; ++j)
    for (int i = 1; i < g.n - 1; ++i) worst = std::max(worst, std::abs(f(i, j) - want(g.node(i, j))));
  return worst;
}

}  // namespace

TEST_CASE("discrete Laplacian is exact on low-degree polynomials") {
  const Grid g = Grid::make(Rect{}, 33);
  const GridField q = GridField::sample(g, [](Vec2 p) { return p.x * p.x + p.y * p.y; });
  CHECK(max_interior(apply_laplacian(q), [](Vec2) { return 4.0; }) < 1e-11);
  const GridField c = GridField::sample(g, [](Vec2) { return 3.25; });
  CHECK(max_interior(apply_laplacian(c), [](Vec2) { return 0.0; }) == 0.0);
  const GridField cub = GridField::sample(g, [](Vec2 p) { return p.x * p.x * p.x; });
  CHECK(max_interior(apply_laplacian(cub), [](Vec2 p) { return 6.0 * p.x; }) < 1e-10);
}

TEST_CASE("discrete Laplacian is linear and ignores constants") {
  const Grid g = Grid::make(Rect{}, 17);
  const GridField a = GridField::sample(g, [](Vec2 p) { return std::sin(p.x) * std::exp(p.y); });
  const GridField b = GridField::sample(g, [](Vec2 p) { return p.x * p.y * p.y; });
  GridField s = GridField::zeros(g), shifted = a;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    s.values[k] = 2.0 * a.values[k] - 3.0 * b.values[k];
    shifted.values[k] += 7.0;
  }
  const GridField la = apply_laplacian(a), lb = apply_laplacian(b), ls = apply_laplacian(s),
                  lsh = apply_laplacian(shifted);
  for (int j = 1; j < g.n - 1; ++j)
    for (int i = 1; i < g.n - 1; ++i) {
      CHECK(ls(i, j) == Approx(2.0 * la(i, j) - 3.0 * lb(i, j)).epsilon(1e-10));
      CHECK(lsh(i, j) == Approx(la(i, j)).epsilon(1e-9));
    }
}

TEST_CASE("one-sided derivatives of |d| across the circle") {
  const Curve c = Curve::circle({0.0, 0.0}, 0.5);
  const Grid g = Grid::make(Rect{}, 257);  // h = 1/128
  const GeometryCache cache = build_geometry_cache(c, g);
  GridField f = GridField::zeros(g);
  for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = std::abs(cache.d[k]);
  const OneSidedDerivatives out = one_sided_value_and_derivatives(f, cache, {0.5, 0.0}, {1.0, 0.0}, Side::outer, 1);
  const OneSidedDerivatives in = one_sided_value_and_derivatives(f, cache, {0.5, 0.0}, {1.0, 0.0}, Side::inner, 1);
  CHECK(std::abs(out.values[0]) < 1e-3);
  CHECK(std::abs(in.values[0]) < 1e-3);
  CHECK(out.values[1] == Approx(1.0).epsilon(1e-3));
  CHECK(in.values[1] == Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("one-sided derivatives of a linear field") {
  const Curve c = Curve::circle({0.0, 0.0}, 0.5);
  const Grid g = Grid::make(Rect{}, 129);
  const GeometryCache cache = build_geometry_cache(c, g);
  const GridField f = GridField::sample(g, [](Vec2 p) { return p.x; });
  for (Side s : {Side::inner, Side::outer}) {
    const OneSidedDerivatives r = one_sided_value_and_derivatives(f, cache, {0.5, 0.0}, {1.0, 0.0}, s, 3);
    CHECK(r.values[0] == Approx(0.5).epsilon(1e-8));
    CHECK(r.values[1] == Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(r.values[2]) < 1e-8);
    CHECK(std::abs(r.values[3]) < 1e-6);
  }
}

TEST_CASE("one-sided estimator is exact on cubics") {
  const Curve c = Curve::ellipse({0.0, 0.0}, 0.6, 0.4);
  const Grid g = Grid::make(Rect{}, 129);
  const GeometryCache cache = build_geometry_cache(c, g);
  // f = x^3 - 2 x y^2 + y; along the normal line x = p + s nu the derivatives are polynomial in s
  const auto f = [](Vec2 p) { return p.x * p.x * p.x - 2.0 * p.x * p.y * p.y + p.y; };
  const GridField field = GridField::sample(g, f);
  for (double t : {0.2, 1.3, 2.9, 4.4}) {
    const Vec2 p = c.point(t), nu = c.normal(t);
    const double e = 1e-3;
    const double d1 = (f(p + nu * e) - f(p - nu * e)) / (2 * e);
    const double d2 = (f(p + nu * e) - 2 * f(p) + f(p - nu * e)) / (e * e);
    // third derivative along nu: 6 nx^3 - 4 * 3 nx ny^2 ... computed exactly
    const double d3 = 6.0 * nu.x * nu.x * nu.x - 12.0 * nu.x * nu.y * nu.y;
    for (Side s : {Side::inner, Side::outer}) {
      const OneSidedDerivatives r = one_sided_value_and_derivatives(field, cache, p, nu, s, 3);
      CHECK(r.values[0] == Approx(f(p)).epsilon(1e-7));
      CHECK(std::abs(r.values[1] - d1) < 1e-5);
      CHECK(std::abs(r.values[2] - d2) < 1e-4);
      CHECK(std::abs(r.values[3] - d3) < 1e-5);
    }
  }
}

TEST_CASE("inner and outer estimates of a smooth field agree") {
  const Curve c = Curve::circle({0.0, 0.0}, 0.5);
  const auto f = [](Vec2 p) { return std::sin(2.0 * p.x) * std::cos(p.y) + p.y * p.y * p.y * p.y; };
  double gap[2];
  int idx = 0;
  for (int n : {129, 257}) {
    const Grid g = Grid::make(Rect{}, n);
    const GeometryCache cache = build_geometry_cache(c, g);
    const GridField field = GridField::sample(g, f);
    const Vec2 p = c.point(0.7), nu = c.normal(0.7);
    const auto in = one_sided_value_and_derivatives(field, cache, p, nu, Side::inner, 1);
    const auto out = one_sided_value_and_derivatives(field, cache, p, nu, Side::outer, 1);
    gap[idx++] = std::abs(in.values[1] - out.values[1]);
  }
  CHECK(gap[1] < 1e-3);
  CHECK(gap[1] < 0.5 * gap[0] + 1e-10);
}

TEST_CASE("probes and sampling errors") {
  const Curve c = Curve::circle({0.0, 0.0}, 0.5);
  const auto probes = make_probes(c, 8);
  REQUIRE(probes.size() == 8);
  CHECK(probes[0].t == Approx(Curve::period / 16.0));
  const Grid g = Grid::make(Rect{}, 65);
  const GeometryCache cache = build_geometry_cache(c, g);
  const GridField f = GridField::sample(g, [](Vec2 p) { return p.x; });
  CHECK_THROWS_AS(sample_one_sided(f, cache, {1.5, 0.0}, Side::outer), Error);
  CHECK(sample_one_sided(f, cache, {0.3, 0.1}, Side::inner) == Approx(0.3).epsilon(1e-12));
}

TEST_CASE("central derivative of a polynomial") {
  const Grid g = Grid::make(Rect{}, 65);
  const GridField f = GridField::sample(g, [](Vec2 p) { return p.x * p.x * p.y + p.y * p.y * p.y; });
  const GridField dxy = central_derivative(f, 1, 1);  // 2x
  const GridField dyy = central_derivative(f, 0, 2);  // 6y
  for (int j = 5; j < 60; j += 7)
    for (int i = 5; i < 60; i += 9) {
      CHECK(dxy(i, j) == Approx(2.0 * g.node(i, j).x).epsilon(1e-9));
      CHECK(dyy(i, j) == Approx(6.0 * g.node(i, j).y).epsilon(1e-9));
    }
}
