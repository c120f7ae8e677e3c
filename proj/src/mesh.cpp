#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "reilly/errors.hpp"
#include "reilly/spectral.hpp"

namespace reilly {

namespace {

constexpr double kPi = std::numbers::pi;

using Vec3 = Eigen::Vector3d;

TriMesh icosphere(double r, int L) {
  TriMesh m;
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < L; ++level) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const int a = midpoint(tri[0], tri[1]), b = midpoint(tri[1], tri[2]), c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  for (auto& p : v) m.positions.push_back(r * p);
  m.triangles = std::move(f);
  m.boundary.assign(m.positions.size(), false);
  return m;
}

/// Concentric rings around a centre vertex; `place(s, phi)` maps the radial parameter
/// s in [0, 1] and the angle to 3-space, `ring_length(s)` is the ring circumference
/// divided by the radial step.
TriMesh ring_mesh(int rings, const std::function<Vec3(double, double)>& place,
                  const std::function<double(double)>& ring_length) {
  TriMesh m;
  m.positions.push_back(place(0.0, 0.0));
  std::vector<int> prev = {0};
  for (int k = 1; k <= rings; ++k) {
    const double s = static_cast<double>(k) / rings;
    const int count = std::max(6, static_cast<int>(std::lround(ring_length(s))));
    std::vector<int> cur;
    for (int i = 0; i < count; ++i) {
      cur.push_back(static_cast<int>(m.positions.size()));
      m.positions.push_back(place(s, 2 * kPi * i / count));
    }
    const int na = static_cast<int>(prev.size()), nb = count;
    if (na == 1) {
      for (int j = 0; j < nb; ++j) m.triangles.push_back({prev[0], cur[j], cur[(j + 1) % nb]});
    } else {
      int i = 0, j = 0;
      while (i < na || j < nb) {
        const double next_a = static_cast<double>(i + 1) / na, next_b = static_cast<double>(j + 1) / nb;
        if (j == nb || (i < na && next_a < next_b)) {
          m.triangles.push_back({prev[i % na], cur[j % nb], prev[(i + 1) % na]});
          ++i;
        } else {
          m.triangles.push_back({prev[i % na], cur[j % nb], cur[(j + 1) % nb]});
          ++j;
        }
      }
    }
    prev = std::move(cur);
  }
  m.boundary.assign(m.positions.size(), false);
  for (int id : prev) m.boundary[id] = true;
  return m;
}

TriMesh square_grid(int n, double lo, double hi, bool periodic) {
  TriMesh m;
  const int nv = periodic ? n : n + 1;
  const double h = (hi - lo) / n;
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j) m.positions.push_back({lo + i * h, lo + j * h, 0.0});
  auto id = [&](int i, int j) { return (i % nv) * nv + (j % nv); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  m.boundary.assign(m.positions.size(), false);
  if (!periodic)
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j)
        if (i == 0 || j == 0 || i == n || j == n) m.boundary[id(i, j)] = true;
  return m;
}

}  // namespace

bool TriMesh::has_boundary() const { return std::find(boundary.begin(), boundary.end(), true) != boundary.end(); }

TriMesh build_mesh(const CatalogEntry& entry, int L) {
  if (L < 0) throw ContractViolation("refine level must be >= 0");
  TriMesh m;
  const std::string& id = entry.id;
  if (id == "sphere_unit" || id == "sphere_r2") {
    m = icosphere(*entry.manifold.known_diameter / kPi, L);
  } else if (id == "torus_2pi") {
    m = square_grid(1 << (L + 3), 0.0, 2 * kPi, true);
    m.embedded = false;
    m.period = {2 * kPi, 2 * kPi};
  } else if (id == "disk_unit") {
    const int R = 1 << (L + 1);
    m = ring_mesh(
        R, [](double s, double phi) { return Vec3(s * std::cos(phi), s * std::sin(phi), 0.0); },
        [R](double s) { return 2 * kPi * s * R; });
  } else if (id == "hemisphere_unit") {
    const int R = 1 << (L + 1);
    m = ring_mesh(
        R,
        [](double s, double phi) {
          const double th = 0.5 * kPi * s;
          return Vec3(std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi), std::cos(th));
        },
        [R](double s) { return 2 * kPi * std::sin(0.5 * kPi * s) / (0.5 * kPi / R); });
  } else if (id == "plane_patch") {
    m = square_grid(1 << (L + 3), -1.0, 1.0, false);
  } else {
    throw UnknownName("no mesh generator for '" + id + "'");
  }
  m.manifold = id;
  m.refine = L;
  return m;
}

int euler_characteristic(const TriMesh& mesh) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(mesh.triangles.size() * 3);
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) edges.push_back(std::minmax(t[k], t[(k + 1) % 3]));
  std::sort(edges.begin(), edges.end());
  const auto ne = std::unique(edges.begin(), edges.end()) - edges.begin();
  return mesh.vertex_count() - static_cast<int>(ne) + mesh.triangle_count();
}

std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) ++count[std::minmax(t[k], t[(k + 1) % 3])];
  std::map<int, std::vector<int>> adj;
  for (const auto& [e, c] : count)
    if (c == 1) {
      adj[e.first].push_back(e.second);
      adj[e.second].push_back(e.first);
    }
  for (const auto& [v, nb] : adj)
    if (nb.size() != 2) throw ContractViolation("boundary edges do not form simple closed loops");
  std::vector<std::vector<int>> loops;
  std::map<int, bool> seen;
  for (const auto& [start, nb] : adj) {
    if (seen[start]) continue;
    std::vector<int> loop = {start};
    seen[start] = true;
    int prev = start, cur = nb[0];
    while (cur != start) {
      loop.push_back(cur);
      seen[cur] = true;
      const auto& n2 = adj[cur];
      const int next = n2[0] == prev ? n2[1] : n2[0];
      prev = cur;
      cur = next;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace reilly
