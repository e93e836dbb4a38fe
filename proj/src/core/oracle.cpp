#include "oracle.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "error.hpp"

namespace polyjump {

namespace {

RadialPiece simplify(const RadialPiece& in) {
  std::map<std::pair<int, int>, double> acc;
  for (const auto& t : in) acc[{t.p, t.l}] += t.c;
  RadialPiece out;
  for (const auto& [key, c] : acc)
    if (c != 0.0) out.push_back({c, key.first, key.second});
  return out;
}

// Particular solution P of -Laplace P = piece (radial), for terms r^(2k) (ln r)^l
// with l in {0, 1}.
RadialPiece inverse_neg_laplacian(const RadialPiece& piece) {
  RadialPiece out;
  for (const auto& t : piece) {
    if (t.p < 0 || t.p % 2 != 0 || t.l > 1)
      throw Error(ErrorCode::invalid_argument, "radial term outside the supported basis");
    const double a = t.p + 2.0;
    if (t.l == 0) {
      out.push_back({-t.c / (a * a), t.p + 2, 0});
    } else {
      out.push_back({-t.c / (a * a), t.p + 2, 1});
      out.push_back({2.0 * t.c / (a * a * a), t.p + 2, 0});
    }
  }
  return simplify(out);
}

double gk_integrate(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  double err = 0.0, l1 = 0.0;
  constexpr double kTol = 1e-11;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, kTol, &err, &l1);
  if (err > kTol * std::max(1.0, l1)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "error estimate %.3e on [%.6g, %.6g] above %.0e", err, a, b, kTol);
    throw Error(ErrorCode::quadrature_tol_not_met, buf);
  }
  return v;
}

// Integral over [a, b] split at the given interior points.
double gk_split(const std::function<double(double)>& f, double a, double b, std::vector<double> cuts) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = std::clamp(cuts[k], a, b), hi = std::clamp(cuts[k + 1], a, b);
    if (hi > 0.0 && lo < 0.01 * hi) {
      // t = u^2 tames the t ln t behaviour near the origin
      s += gk_integrate([&f](double u) { return 2.0 * u * f(u * u); }, std::sqrt(lo), std::sqrt(hi));
    } else {
      s += gk_integrate(f, lo, hi);
    }
  }
  return s;
}

}  // namespace

double eval_piece(const RadialPiece& piece, double r) {
  double s = 0.0;
  const double lr = piece.empty() ? 0.0 : std::log(r);
  for (const auto& t : piece) {
    double v = t.c * std::pow(r, t.p);
    for (int k = 0; k < t.l; ++k) v *= lr;
    s += v;
  }
  return s;
}

RadialPiece differentiate(const RadialPiece& piece) {
  RadialPiece out;
  for (const auto& t : piece) {
    if (t.p != 0) out.push_back({t.c * t.p, t.p - 1, t.l});
    if (t.l > 0) out.push_back({t.c * t.l, t.p - 1, t.l - 1});
  }
  return simplify(out);
}

double RadialSolution::value(int level, double r, int order) const {
  RadialPiece p = r < rho ? inner.at(level) : outer.at(level);
  for (int k = 0; k < order; ++k) p = differentiate(p);
  return eval_piece(p, r);
}

double RadialSolution::one_sided(int level, int order, Side side) const {
  RadialPiece p = side == Side::outer ? outer.at(level) : inner.at(level);
  for (int k = 0; k < order; ++k) p = differentiate(p);
  return eval_piece(p, rho);
}

double RadialSolution::jump(int level, int order) const {
  return one_sided(level, order, Side::outer) - one_sided(level, order, Side::inner);
}

double RadialSolution::at(int level, Vec2 x) const { return value(level, (x - center).norm()); }

BoundaryFn RadialSolution::boundary(int level) const {
  const RadialSolution self = *this;
  return [self, level](Vec2 x) { return self.at(level, x); };
}

std::vector<BoundaryFn> RadialSolution::boundary_list() const {
  std::vector<BoundaryFn> out;
  for (int j = 0; j < m; ++j) out.push_back(boundary(j));
  return out;
}

RadialSolution radial_poisson_exact(double q, double rho, double c0) {
  return radial_polyharmonic_exact(1, q, rho, {c0});
}

RadialSolution radial_polyharmonic_exact(int m, double q, double rho, const std::vector<double>& bc) {
  if (m < 1 || m > 4) throw Error(ErrorCode::order_unsupported, "radial oracle supports m = 1..4");
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorCode::invalid_argument, "interface radius must lie in (0, 1)");
  if (static_cast<int>(bc.size()) != m) throw Error(ErrorCode::invalid_argument, "need one boundary value per level");
  RadialSolution s;
  s.m = m;
  s.q = q;
  s.rho = rho;
  s.bc = bc;
  s.inner.resize(m);
  s.outer.resize(m);

  // Top level: harmonic on both sides, d/dr jumps by -q at rho.
  {
    const double c = -q * rho;
    const double b = bc[m - 1];
    s.outer[m - 1] = simplify({{b, 0, 0}, {c, 0, 1}});
    s.inner[m - 1] = simplify({{b + c * std::log(rho), 0, 0}});
  }
  for (int j = m - 2; j >= 0; --j) {
    RadialPiece pin = inverse_neg_laplacian(s.inner[j + 1]);
    RadialPiece pout = inverse_neg_laplacian(s.outer[j + 1]);
    const double b = bc[j] - eval_piece(pout, 1.0);
    const double c = rho * (eval_piece(differentiate(pin), rho) - eval_piece(differentiate(pout), rho));
    const double a = eval_piece(pout, rho) + b + c * std::log(rho) - eval_piece(pin, rho);
    pin.push_back({a, 0, 0});
    pout.push_back({b, 0, 0});
    pout.push_back({c, 0, 1});
    s.inner[j] = simplify(pin);
    s.outer[j] = simplify(pout);
  }
  return s;
}

double radial_quadrature_value(const RadialSolution& sol, int level, double r) {
  if (level < 0 || level >= sol.m) throw Error(ErrorCode::invalid_argument, "level out of range");
  if (level == sol.m - 1) return sol.bc[level] - sol.q * sol.rho * std::log(std::max(r, sol.rho));
  const auto f = [&](double t) {
    return t * radial_quadrature_value(sol, level + 1, t) * std::log(std::max(r, t));
  };
  return sol.bc[level] - gk_split(f, 0.0, 1.0, {r, sol.rho});
}

double RadialBump::value(double r) const {
  const double z = (r - center) / width;
  const double q = z * z;
  if (q >= 1.0) return 0.0;
  return amplitude * std::exp(1.0 - 1.0 / (1.0 - q));
}

double RadialBump::d1(double r) const {
  const double z = (r - center) / width;
  const double q = z * z;
  if (q >= 1.0) return 0.0;
  const double om = 1.0 - q;
  const double phi_q = -value(r) / (om * om);
  return phi_q * 2.0 * z / width;
}

double RadialBump::d2(double r) const {
  const double z = (r - center) / width;
  const double q = z * z;
  if (q >= 1.0) return 0.0;
  const double om = 1.0 - q;
  const double phi = value(r);
  const double phi_q = -phi / (om * om);
  const double phi_qq = phi * (1.0 / (om * om * om * om) - 2.0 / (om * om * om));
  const double qr = 2.0 * z / width;
  return phi_qq * qr * qr + phi_q * 2.0 / (width * width);
}

double RadialBump::laplacian(double r) const { return r > 0.0 ? d2(r) + d1(r) / r : 2.0 * d2(r); }

double weakform_residual(const RadialSolution& sol, const RadialBump& phi) {
  if (!(phi.width > 0.0) || phi.center < 0.0 || phi.center + phi.width >= 1.0 ||
      (phi.center != 0.0 && phi.center - phi.width <= 0.0))
    throw Error(ErrorCode::invalid_argument, "radial bump must be smooth with support inside the unit disk");
  const double two_pi = 2.0 * std::numbers::pi;
  const double lo = std::max(0.0, phi.center - phi.width), hi = phi.center + phi.width;
  double worst = 0.0;
  for (int j = sol.m - 1; j >= 0; --j) {
    const double lhs = gk_split([&](double r) { return -sol.value(j, r) * phi.laplacian(r) * two_pi * r; }, lo, hi,
                                {sol.rho});
    double rhs;
    if (j == sol.m - 1)
      rhs = two_pi * sol.rho * sol.q * phi.value(sol.rho);
    else
      rhs = gk_split([&](double r) { return sol.value(j + 1, r) * phi.value(r) * two_pi * r; }, lo, hi, {sol.rho});
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace polyjump
