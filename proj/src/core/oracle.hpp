#pragma once

#include <vector>

#include "geometry.hpp"
#include "grid.hpp"
#include "solve.hpp"

namespace polyjump {

/// c r^p (ln r)^l
struct RadialTerm {
  double c = 0.0;
  int p = 0;
  int l = 0;
};

using RadialPiece = std::vector<RadialTerm>;

double eval_piece(const RadialPiece& piece, double r);
RadialPiece differentiate(const RadialPiece& piece);

/// Exact radial solution of the Navier cascade on the unit disk with a circle
/// of radius rho carrying the constant density q. Level j holds
/// v_j = (-Laplace)^j u; level 0 is u. Each level is a closed form over the
/// basis r^p (ln r)^l, one piece inside and one outside rho.
class RadialSolution {
 public:
  int m = 1;
  double q = 0.0;
  double rho = 0.5;
  Vec2 center;
  std::vector<double> bc;  // v_j(1)
  std::vector<RadialPiece> inner, outer;

  /// order-th radial derivative of v_level at r; r < rho uses the inner piece.
  double value(int level, double r, int order = 0) const;
  double one_sided(int level, int order, Side side) const;
  /// [d^order v_level / dr^order](rho), outer minus inner.
  double jump(int level, int order) const;
  /// v_level at a point of the plane.
  double at(int level, Vec2 x) const;
  BoundaryFn boundary(int level) const;
  std::vector<BoundaryFn> boundary_list() const;
};

/// m = 1: v = -q rho ln(max(r, rho)) + c0.
RadialSolution radial_poisson_exact(double q, double rho, double c0);

/// Cascade of order m (1..4) with v_j(1) = bc[j].
RadialSolution radial_polyharmonic_exact(int m, double q, double rho, const std::vector<double>& bc);

/// Independent route: v_j(r) = bc_j - int_0^1 t v_{j+1}(t) ln(max(r, t)) dt by
/// adaptive Gauss-Kronrod (tolerance 1e-11), starting from the flux-jump form
/// of the top level. Throws QuadratureTolNotMet.
double radial_quadrature_value(const RadialSolution& sol, int level, double r);

/// Radial test function A exp(1 - 1/(1 - ((r - c)/a)^2)) on |r - c| < a.
/// Requires c == 0 or c - a > 0, and c + a < 1.
struct RadialBump {
  double center = 0.5;
  double width = 0.2;
  double amplitude = 1.0;

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  double laplacian(double r) const;
};

/// Weak-form residual on the unit disk: the top level is tested with
/// |int v_{m-1} (-Laplace phi) dx - 2 pi rho q phi(rho)|, and every lower level
/// with |int v_j (-Laplace phi) dx - int v_{j+1} phi dx|; the maximum is
/// returned.
double weakform_residual(const RadialSolution& sol, const RadialBump& phi);

}  // namespace polyjump
