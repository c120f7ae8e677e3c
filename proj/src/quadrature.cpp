#include "reilly/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "reilly/errors.hpp"
#include "reilly/parallel.hpp"

namespace reilly {

GaussLegendre gauss_legendre(int q) {
  if (q < 1) throw ContractViolation("Gauss-Legendre order must be >= 1");
  GaussLegendre r;
  r.nodes.assign(q, 0.0);
  r.weights.assign(q, 0.0);
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= q; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = q * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[q - 1 - i] = x;
    r.weights[i] = r.weights[q - 1 - i] = w;
  }
  if (q % 2 == 1) r.nodes[q / 2] = 0.0;
  return r;
}

GaussLegendre axis_rule(const Interval& iv, bool periodic, int q) {
  const GaussLegendre base = gauss_legendre(q);
  const int panels = periodic ? kPeriodicPanels : 1;
  const double h = iv.width() / panels;
  GaussLegendre r;
  for (int p = 0; p < panels; ++p) {
    const double lo = iv.lo + p * h;
    for (int k = 0; k < q; ++k) {
      r.nodes.push_back(lo + 0.5 * h * (base.nodes[k] + 1.0));
      r.weights.push_back(0.5 * h * base.weights[k]);
    }
  }
  return r;
}

namespace {

ChartQuadrature tensor_rule(const std::vector<GaussLegendre>& axes) {
  ChartQuadrature out;
  const int n = static_cast<int>(axes.size());
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.nodes.size();
  out.points.reserve(total);
  out.weights.reserve(total);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t k = 0; k < total; ++k) {
    ChartPoint p;
    p.coords = Vec(n);
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      p.coords(a) = axes[a].nodes[idx[a]];
      w *= axes[a].weights[idx[a]];
    }
    out.points.push_back(p);
    out.weights.push_back(w);
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < axes[a].nodes.size()) break;
      idx[a] = 0;
    }
  }
  return out;
}

}  // namespace

ChartQuadrature interior_quadrature(const ChartManifold& m, int q) {
  const Chart& c = m.primary();
  std::vector<GaussLegendre> axes;
  for (int a = 0; a < c.dim(); ++a) axes.push_back(axis_rule(c.box[a], c.periodic[a], q));
  return tensor_rule(axes);
}

ChartQuadrature boundary_quadrature(const ChartManifold& m, int q) {
  if (!m.has_boundary()) return {};
  const Chart& c = m.primary();
  const BoundarySide side = *c.boundary;
  std::vector<GaussLegendre> axes;
  for (int a = 0; a < c.dim(); ++a) {
    if (a == side.axis) {
      GaussLegendre fixed;
      fixed.nodes = {side.upper ? c.box[a].hi : c.box[a].lo};
      fixed.weights = {1.0};
      axes.push_back(fixed);
    } else {
      axes.push_back(axis_rule(c.box[a], c.periodic[a], q));
    }
  }
  return tensor_rule(axes);
}

double integrate(const ChartManifold& m, int q, const std::function<double(const LocalGeometry&)>& f, int threads) {
  const ChartQuadrature rule = interior_quadrature(m, q);
  const std::vector<double> vals = parallel_map<double>(
      rule.points.size(),
      [&](std::size_t k) {
        const LocalGeometry geo(m, rule.points[k]);
        return rule.weights[k] * geo.sqrt_det().value() * f(geo);
      },
      threads);
  return pairwise_sum(vals);
}

double chart_volume(const ChartManifold& m, int q) {
  return integrate(m, q, [](const LocalGeometry&) { return 1.0; }, 1);
}

}  // namespace reilly
