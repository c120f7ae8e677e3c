#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "reilly/errors.hpp"
#include "reilly/spectral.hpp"

namespace reilly {

namespace {

struct Graph {
  std::vector<std::vector<std::pair<int, double>>> adj;
};

std::vector<double> dijkstra(const Graph& g, int src) {
  std::vector<double> d(g.adj.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[static_cast<std::size_t>(src)] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (du > d[static_cast<std::size_t>(u)]) continue;
    for (const auto& [v, w] : g.adj[static_cast<std::size_t>(u)]) {
      const double nd = du + w;
      if (nd < d[static_cast<std::size_t>(v)]) {
        d[static_cast<std::size_t>(v)] = nd;
        pq.emplace(nd, v);
      }
    }
  }
  return d;
}

}  // namespace

double mesh_diameter(const TriMesh& mesh, const ChartManifold& m, int steiner) {
  if (steiner < 0) throw ContractViolation("steiner count must be >= 0");
  if (mesh.triangles.empty()) throw ContractViolation("empty mesh");
  const std::vector<Element> el = mesh_elements(mesh, m);

  // Node ids: vertices first, then `steiner` interior points per edge ordered from the
  // smaller to the larger vertex id.
  std::map<std::pair<int, int>, int> edge_base;
  int next = mesh.vertex_count();
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const auto e = std::minmax(t[k], t[(k + 1) % 3]);
      if (edge_base.emplace(e, next).second) next += steiner;
    }
  Graph g;
  g.adj.resize(static_cast<std::size_t>(next));
  for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const auto& t = mesh.triangles[ti];
    std::vector<std::pair<int, Eigen::Vector2d>> nodes;
    for (int k = 0; k < 3; ++k) nodes.emplace_back(t[k], el[ti].local.col(k));
    for (int k = 0; k < 3; ++k) {
      const int a = k, b = (k + 1) % 3;
      const bool forward = t[a] < t[b];
      const int lo = forward ? a : b, hi = forward ? b : a;
      const int base = edge_base.at(std::minmax(t[a], t[b]));
      for (int s = 0; s < steiner; ++s) {
        const double f = static_cast<double>(s + 1) / (steiner + 1);
        nodes.emplace_back(base + s, (1.0 - f) * el[ti].local.col(lo) + f * el[ti].local.col(hi));
      }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        const double w = (nodes[i].second - nodes[j].second).norm();
        g.adj[static_cast<std::size_t>(nodes[i].first)].emplace_back(nodes[j].first, w);
        g.adj[static_cast<std::size_t>(nodes[j].first)].emplace_back(nodes[i].first, w);
      }
  }

  double best = 0.0;
  int seed = 0;
  for (int run = 0; run < 8; ++run) {
    const std::vector<double> d = dijkstra(g, seed);
    int far = seed;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!std::isfinite(d[i])) throw ContractViolation("mesh is disconnected");
      if (d[i] > d[static_cast<std::size_t>(far)]) far = static_cast<int>(i);
    }
    best = std::max(best, d[static_cast<std::size_t>(far)]);
    seed = far;
  }
  return best;
}

}  // namespace reilly
