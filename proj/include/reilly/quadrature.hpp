#pragma once

// Gauss-Legendre rules and tensor-product quadrature over chart boxes.

#include <vector>

#include "reilly/geometry.hpp"

namespace reilly {

/// Panels used along a periodic axis (each panel gets the full q-point rule).
inline constexpr int kPeriodicPanels = 8;

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// q-point rule, q >= 1.  Exact for polynomials of degree <= 2q - 1.
GaussLegendre gauss_legendre(int q);

/// 1-D nodes/weights for one chart axis (composite on periodic axes).
GaussLegendre axis_rule(const Interval& iv, bool periodic, int q);

/// Nodes in chart coordinates with coordinate-measure weights (no sqrt(det g)).
struct ChartQuadrature {
  std::vector<ChartPoint> points;
  std::vector<double> weights;
};

/// Tensor-product rule over the primary chart box.
ChartQuadrature interior_quadrature(const ChartManifold& m, int q);

/// Rule over the boundary face of the primary chart: points lie on the face, weights
/// are the coordinate measure of the remaining axes.  Empty for closed manifolds.
ChartQuadrature boundary_quadrature(const ChartManifold& m, int q);

/// sum_k w_k sqrt(det g)(x_k) f(x_k) with ordered pairwise summation.
double integrate(const ChartManifold& m, int q, const std::function<double(const LocalGeometry&)>& f,
                 int threads = 0);

/// Riemannian volume of the primary chart box.
double chart_volume(const ChartManifold& m, int q = 24);

}  // namespace reilly
