#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "geometry.hpp"

namespace polyjump {

/// Uniform square-cell grid of n x n nodes over a rectangle. Node (i, j) sits at
/// (x0 + i h, y0 + j h); storage is row-major in j.
struct Grid {
  Rect box;
  int n = 0;
  double h = 0.0;

  static Grid make(const Rect& box, int n);

  Vec2 node(int i, int j) const { return {box.x0 + i * h, box.y0 + j * h}; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n + i; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  bool is_boundary(int i, int j) const { return i == 0 || j == 0 || i == n - 1 || j == n - 1; }
};

struct GridField {
  Grid grid;
  std::vector<double> values;

  static GridField zeros(const Grid& grid);
  static GridField sample(const Grid& grid, const std::function<double(Vec2)>& f);

  double& operator()(int i, int j) { return values[grid.index(i, j)]; }
  double operator()(int i, int j) const { return values[grid.index(i, j)]; }
  bool all_finite() const;
};

enum class NodeSide : std::uint8_t { inner, outer, near_interface };
enum class Side { inner, outer };

/// Per-node projection data. sign(d) gives the side even for near-interface
/// nodes; d == 0 counts as outer.
struct GeometryCache {
  Grid grid;
  std::vector<double> d;
  std::vector<double> t;
  std::vector<double> kappa;
  std::vector<Vec2> foot;
  std::vector<Vec2> normal;
  std::vector<NodeSide> side;

  bool outer(std::size_t idx) const { return d[idx] >= 0.0; }
  bool on_side(std::size_t idx, Side s) const { return outer(idx) == (s == Side::outer); }
  /// Bilinear interpolation of the cached signed distance.
  double interpolate_d(Vec2 x) const;
};

GeometryCache build_geometry_cache(const Curve& curve, const Grid& grid, int workers = 1);

/// Discrete Laplacian (f_E + f_W + f_N + f_S - 4 f_C) / h^2 on interior nodes;
/// boundary nodes are copied through unchanged.
GridField apply_laplacian(const GridField& f);

struct ProbePoint {
  double t = 0.0;
  Vec2 p;
  Vec2 normal;
  Vec2 tangent;
};

/// n probes equally spaced in the curve parameter, offset by half a step.
std::vector<ProbePoint> make_probes(const Curve& curve, int count);

/// Bicubic (tensor Lagrange) interpolation whose 4x4 stencil uses only nodes on
/// `side`. Throws ProbeCrossesInterface if no such stencil exists nearby and
/// ProbeLeavesDomain if x is outside the grid.
double sample_one_sided(const GridField& f, const GeometryCache& cache, Vec2 x, Side side);

struct OneSidedDerivatives {
  int max_order = 0;
  // values[k] = k-th derivative along +normal, extrapolated to the probe.
  std::array<double, 4> values{};
};

/// One-sided value and normal derivatives at p in [0, max_order] from a
/// least-squares polynomial of degree max_order + 1 through 2 (max_order + 2)
/// samples at distances s in [h, 2 (max_order + 3) h] on the requested side.
OneSidedDerivatives one_sided_value_and_derivatives(const GridField& f, const GeometryCache& cache, Vec2 p,
                                                    Vec2 normal, Side side, int max_order);

/// Two-variable one-sided fit in local (normal, tangent) coordinates; returns
/// the derivative d^a/ds^a d^b/dt^b at p. Degree 4, samples s in [h, 12h],
/// t in [-4h, 4h].
double one_sided_mixed_derivative(const GridField& f, const GeometryCache& cache, const ProbePoint& probe, Side side,
                                  int normal_order, int tangent_order);

/// Discrete partial derivative d^ax/dx^ax d^ay/dy^ay by centered differences;
/// nodes where the stencil does not fit are set to zero.
GridField central_derivative(const GridField& f, int ax, int ay);

/// Stencil half-width of central_derivative along one axis for order p.
int central_half_width(int order);

}  // namespace polyjump
