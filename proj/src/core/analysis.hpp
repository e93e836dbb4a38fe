#pragma once

#include <functional>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "solve.hpp"

namespace polyjump {

struct JumpProbe {
  double t = 0.0;
  Vec2 p;
  Vec2 normal;
  bool valid = false;
  std::string skip_reason;
  std::array<double, 4> inner{};  // f, d_nu f, d2_nu f, d3_nu f
  std::array<double, 4> outer{};
  double measured = 0.0;   // scaled outer - inner of the selected order
  double predicted = 0.0;
  double error = 0.0;      // relative, or absolute when the prediction vanishes
};

struct JumpReport {
  std::string field;
  int order = 1;
  double scale = 1.0;  // measured = scale * [d^order_nu field]
  std::vector<JumpProbe> probes;
  int valid = 0;
  int skipped = 0;
  double median_error = 0.0;
  double max_error = 0.0;
};

using DensityFn = std::function<double(double)>;

/// Jump of the order-th normal derivative of f (outer minus inner) at equally
/// spaced probes, multiplied by `scale` and compared with predicted(t).
/// Probes whose segments leave the domain or cross the interface are skipped.
JumpReport jump_scan_field(const GridField& f, const GeometryCache& cache, const Curve& curve, int n_probes, int order,
                           const DensityFn& predicted, double scale = 1.0, int workers = 1);

/// Jump law of a cascade solution: [d^(2m-1)_nu u] against (-1)^m Q. For m = 1
/// the field is v, for m = 2 it is u (third derivative); for m >= 3 the jump
/// is measured as (-1)^m [d^3_nu v_{m-2}].
JumpReport jump_scan(const CascadeSolution& sol, const GeometryCache& cache, const Curve& curve,
                     const SurfaceDensity& q, int n_probes, int workers = 1);

/// Predicted jump density (-1)^m Q(t).
double predicted_jump(int m, const SurfaceDensity& q, const Curve& curve, double t);

struct MixedJumpRow {
  double t = 0.0;
  bool valid = false;
  double nnt = 0.0;  // [d2_nu d_tau u]
  double ntt = 0.0;  // [d_nu d2_tau u]
  double ttt = 0.0;  // [d3_tau u]
  double q = 0.0;
};

struct MixedJumpReport {
  std::vector<MixedJumpRow> rows;
  int valid = 0;
  double max_ratio = 0.0;     // max over probes and combinations of |jump| / |Q|
  double median_ratio = 0.0;  // median over probes of the largest combination
};

/// Third-order jumps with at least one tangential direction; expected zero.
MixedJumpReport mixed_jump_scan(const GridField& u, const GeometryCache& cache, const Curve& curve,
                                const SurfaceDensity& q, int n_probes, int workers = 1);

struct RegularityRow {
  int n = 0;
  double h = 0.0;
  int order = 0;
  double sup_off = 0.0;    // max |D^order_h u| over stencils on one side of the interface
  double sup_cross = 0.0;  // max |D^(order+1)_h u| over stencils crossing the interface
};

struct RegularitySweep {
  std::vector<RegularityRow> rows;
  std::vector<double> off_ratios;    // sup_off[k+1] / sup_off[k]
  std::vector<double> cross_ratios;  // sup_cross[k+1] / sup_cross[k]
};

RegularityRow regularity_row(const GridField& u, const GeometryCache& cache, int order);

/// Solves pb on each grid (at least 3, strictly increasing, dyadic) and
/// tabulates regularity_row with order 2m - 1.
RegularitySweep regularity_sweep(const Problem& pb, const std::vector<int>& grids);

struct TVReport {
  double total = 0.0;
  double tube = 0.0;  // part of total from nodes with |d| <= tube_cells h
  double fraction = 0.0;
  double jump_part = 0.0;  // from measured normal-derivative jumps along the interface
  double predicted = 0.0;  // from the given jump density
};

/// Anisotropic discrete TV of f: sum h (|f_E - f_C| + |f_N - f_C|), split by
/// tube membership of the centre node.
TVReport tv_field(const GridField& f, const GeometryCache& cache, double tube_cells = 3.0);

/// TV of the gradient of f (sum over both components, nodes at least one cell
/// from the boundary). The jump part integrates |[d_nu f]| (|nu_x| + |nu_y|)^2
/// along the interface from one-sided fits; `density(t)` is the predicted
/// [d_nu f] (pass an empty function to skip the prediction).
TVReport tv_profile(const GridField& f, const GeometryCache& cache, const Curve& curve, const DensityFn& density,
                    int n_probes, double tube_cells = 3.0, int workers = 1);

/// Least-squares slope of log(error) against log(h). Throws DegenerateFit with
/// fewer than 3 points or errors below 1e-13.
double convergence_order(const std::vector<double>& errors, const std::vector<double>& hs);

/// max |grad_h f| by central differences over interior nodes.
double max_gradient(const GridField& f);

double median(std::vector<double> v);

}  // namespace polyjump
