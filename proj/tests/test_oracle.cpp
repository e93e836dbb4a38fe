#include <cmath>
#include <random>

#include "doctest.h"
#include "grid.hpp"
#include "oracle.hpp"

using namespace polyjump;
using doctest::Approx;

TEST_CASE("radial Poisson closed form") {
  const RadialSolution s = radial_poisson_exact(1.0, 0.5, 0.0);
  CHECK(s.value(0, 0.25) == Approx(0.5 * std::log(2.0)).epsilon(1e-14));
  CHECK(s.value(0, 0.8) == Approx(-0.5 * std::log(0.8)).epsilon(1e-14));
  CHECK(s.jump(0, 1) == Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(s.jump(0, 0)) < 1e-15);
  const RadialSolution z = radial_poisson_exact(0.0, 0.5, 1.25);
  for (double r : {0.1, 0.5, 0.9}) CHECK(z.value(0, r) == 1.25);
}

TEST_CASE("order 1 cascade reduces to the Poisson closed form") {
  const RadialSolution a = radial_poisson_exact(2.0, 0.3, 0.4);
  const RadialSolution b = radial_polyharmonic_exact(1, 2.0, 0.3, {0.4});
  for (double r : {0.1, 0.29, 0.31, 0.7, 1.0}) CHECK(b.value(0, r) == Approx(a.value(0, r)).epsilon(1e-14));
}

TEST_CASE("jump of the top odd derivative is (-1)^m q") {
  for (int m = 1; m <= 4; ++m)
    for (double q : {0.5, 1.0, 2.0})
      for (double rho : {0.3, 0.5, 0.7}) {
        const RadialSolution s = radial_polyharmonic_exact(m, q, rho, std::vector<double>(m, 0.0));
        const double want = (m % 2 ? -1.0 : 1.0) * q;
        CHECK(s.jump(0, 2 * m - 1) == Approx(want).epsilon(1e-9));
        for (int k = 0; k <= 2 * m - 2; ++k) CHECK(std::abs(s.jump(0, k)) <= 1e-10 * (1.0 + std::abs(s.value(0, rho, k))));
      }
}

TEST_CASE("worked jump values for m = 2 and m = 3") {
  CHECK(radial_polyharmonic_exact(2, 1.0, 0.5, {0.0, 0.0}).jump(0, 3) == Approx(1.0).epsilon(1e-10));
  CHECK(radial_polyharmonic_exact(3, 1.0, 0.5, {0.0, 0.0, 0.0}).jump(0, 5) == Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("boundary values and levels") {
  const RadialSolution s = radial_polyharmonic_exact(3, 1.5, 0.4, {0.2, -0.1, 0.3});
  CHECK(s.value(0, 1.0) == Approx(0.2).epsilon(1e-13));
  CHECK(s.value(1, 1.0) == Approx(-0.1).epsilon(1e-13));
  CHECK(s.value(2, 1.0) == Approx(0.3).epsilon(1e-13));
  // -v_j'' - v_j'/r = v_{j+1} off the interface
  for (int j = 0; j < 2; ++j)
    for (double r : {0.2, 0.7}) {
      const double lap = s.value(j, r, 2) + s.value(j, r, 1) / r;
      CHECK(-lap == Approx(s.value(j + 1, r)).epsilon(1e-11));
    }
}

TEST_CASE("closed form agrees with nested quadrature") {
  for (int m = 1; m <= 3; ++m) {
    const RadialSolution s = radial_polyharmonic_exact(m, 1.0, 0.5, std::vector<double>(m, 0.1));
    for (double r : {0.0, 0.2, 0.5, 0.75, 1.0})
      CHECK(radial_quadrature_value(s, 0, r) == Approx(s.value(0, r)).epsilon(1e-9));
  }
}

TEST_CASE("weak-form residual of the radial solution") {
  const RadialSolution s1 = radial_poisson_exact(1.0, 0.5, 0.0);
  CHECK(weakform_residual(s1, RadialBump{0.5, 0.2, 1.0}) <= 1e-8);
  const RadialSolution z = radial_poisson_exact(0.0, 0.5, 0.0);
  CHECK(weakform_residual(z, RadialBump{0.5, 0.2, 1.0}) == Approx(0.0).epsilon(1e-14));
  const RadialSolution s2 = radial_polyharmonic_exact(2, 1.0, 0.5, {0.0, 0.0});
  CHECK(weakform_residual(s2, RadialBump{0.5, 0.2, 1.0}) <= 1e-7);
  // a wrong jump constant must show up
  RadialSolution bad = s1;
  bad.q = 2.0;
  CHECK(weakform_residual(bad, RadialBump{0.5, 0.2, 1.0}) > 1e-2);
}

TEST_CASE("weak-form residual for random bumps") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int m = 1; m <= 4; ++m)
    for (double rho : {0.3, 0.5, 0.7}) {
      const RadialSolution s = radial_polyharmonic_exact(m, 1.0, rho, std::vector<double>(m, 0.0));
      for (int b = 0; b < 5; ++b) {
        const double width = 0.05 + 0.2 * u(gen);
        const double lo = width + 1e-3, hi = 1.0 - width - 1e-3;
        const RadialBump phi{lo + (hi - lo) * u(gen), width, 1.0};
        CHECK(weakform_residual(s, phi) <= 1e-7);
      }
    }
}

TEST_CASE("plane evaluation uses the centre") {
  RadialSolution s = radial_poisson_exact(1.0, 0.5, 0.0);
  s.center = {0.1, 0.2};
  CHECK(s.at(0, {0.1 + 0.8, 0.2}) == Approx(s.value(0, 0.8)).epsilon(1e-14));
}
