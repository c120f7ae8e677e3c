#include <cmath>

#include "reilly/errors.hpp"
#include "reilly/parallel.hpp"
#include "reilly/spectral.hpp"

namespace reilly {

namespace {

Mat metric_at(const Chart& c, const Vec& p) {
  const int n = c.dim();
  const std::vector<double> pv(p.data(), p.data() + n);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = value_at(c.metric[static_cast<std::size_t>(i * n + j)], pv);
  return 0.5 * (g + g.transpose());
}

double wrap_delta(double d, double period) {
  if (period <= 0.0) return d;
  return d - period * std::round(d / period);
}

Element embedded_element(const TriMesh& mesh, const Chart& c, const std::array<int, 3>& tri) {
  const Eigen::Vector3d p0 = mesh.positions[tri[0]], p1 = mesh.positions[tri[1]], p2 = mesh.positions[tri[2]];
  const Eigen::Vector3d e1 = (p1 - p0).normalized();
  const Eigen::Vector3d w = p2 - p0;
  const Eigen::Vector3d e2u = w - w.dot(e1) * e1;
  if (e2u.norm() < 1e-14) throw ContractViolation("degenerate triangle");
  const Eigen::Vector3d e2 = e2u.normalized();
  Eigen::Matrix<double, 3, 2> T;
  T << e1, e2;

  Element el;
  el.local.col(0).setZero();
  el.local.col(1) = T.transpose() * (p1 - p0);
  el.local.col(2) = T.transpose() * (p2 - p0);
  el.area = 0.5 * (p1 - p0).cross(p2 - p0).norm();
  if (!(el.area > 1e-12)) throw ContractViolation("degenerate triangle (area <= 1e-12)");

  const Vec centre = (p0 + p1 + p2) / 3.0;
  el.centroid = {0, locate(c, centre)};
  const Mat g = metric_at(c, el.centroid.coords);
  el.ginv = g.inverse();
  const Mat J = embedding_jacobian(c, el.centroid.coords);
  // Orthonormal basis of the tangent plane at the surface centroid, rotated onto the
  // triangle plane by the orthogonal polar factor of T^T Q.
  const Eigen::HouseholderQR<Mat> qr(J);
  const Mat Q = qr.householderQ() * Mat::Identity(3, 2);
  const Eigen::Matrix2d R0 = T.transpose() * Q;
  const Eigen::JacobiSVD<Eigen::Matrix2d> svd(R0, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix2d R = svd.matrixU() * svd.matrixV().transpose();
  el.psi = R * Q.transpose() * J;
  return el;
}

Element chart_element(const TriMesh& mesh, const Chart& c, const std::array<int, 3>& tri) {
  Eigen::Vector2d x[3];
  x[0] = mesh.positions[tri[0]].head<2>();
  for (int k = 1; k < 3; ++k) {
    const Eigen::Vector2d d = mesh.positions[tri[k]].head<2>() - x[0];
    x[k] = x[0] + Eigen::Vector2d(wrap_delta(d(0), mesh.period[0]), wrap_delta(d(1), mesh.period[1]));
  }
  Element el;
  Vec centre = (x[0] + x[1] + x[2]) / 3.0;
  for (int i = 0; i < 2; ++i) {
    const Interval iv = c.box[static_cast<std::size_t>(i)];
    if (c.periodic[static_cast<std::size_t>(i)])
      centre(i) = iv.lo + std::fmod(std::fmod(centre(i) - iv.lo, iv.width()) + iv.width(), iv.width());
  }
  el.centroid = {0, centre};
  const Mat g = metric_at(c, centre);
  el.ginv = g.inverse();
  const Eigen::Matrix2d L = Eigen::LLT<Mat>(g).matrixL().toDenseMatrix();
  el.psi = L.transpose();
  for (int k = 0; k < 3; ++k) el.local.col(k) = el.psi * (x[k] - x[0]);
  const Eigen::Vector2d a = el.local.col(1), b = el.local.col(2);
  el.area = 0.5 * std::abs(a(0) * b(1) - a(1) * b(0));
  if (!(el.area > 1e-12)) throw ContractViolation("degenerate triangle (area <= 1e-12)");
  return el;
}

}  // namespace

std::vector<Element> mesh_elements(const TriMesh& mesh, const ChartManifold& m) {
  if (m.dim != 2) throw ContractViolation("meshes are two-dimensional");
  const Chart& c = m.primary();
  if (mesh.embedded && !c.embedded()) throw ContractViolation("embedded mesh on a chart without embedding");
  std::vector<Element> out;
  out.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles)
    out.push_back(mesh.embedded ? embedded_element(mesh, c, t) : chart_element(mesh, c, t));
  return out;
}

std::vector<Eigen::Matrix2d> element_fields(const std::vector<Element>& elements, const EndomorphismField& A) {
  std::vector<Eigen::Matrix2d> out;
  out.reserve(elements.size());
  for (const Element& el : elements) {
    const std::vector<double> pv(el.centroid.coords.data(), el.centroid.coords.data() + 2);
    Eigen::Matrix2d a;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) a(i, j) = value_at(A.entries[static_cast<std::size_t>(2 * i + j)], pv);
    const Eigen::Matrix2d loc = el.psi * a * el.ginv * el.psi.transpose();
    if (std::abs(loc(0, 1) - loc(1, 0)) > 1e-10 * std::max(1.0, loc.norm()))
      throw ContractViolation("field " + A.name + " is not symmetric on the mesh (beyond 1e-10)");
    out.push_back(0.5 * (loc + loc.transpose()));
  }
  return out;
}

Eigen::Matrix3d element_stiffness(const Eigen::Matrix<double, 2, 3>& local, const Eigen::Matrix2d& A) {
  Eigen::Matrix2d D;
  D << local.col(1) - local.col(0), local.col(2) - local.col(0);
  const double det = D.determinant();
  if (std::abs(det) < 2e-12) throw ContractViolation("degenerate triangle");
  const Eigen::Matrix2d Dit = D.inverse().transpose();
  Eigen::Matrix<double, 2, 3> G;
  G << -Dit.col(0) - Dit.col(1), Dit.col(0), Dit.col(1);
  return 0.5 * std::abs(det) * G.transpose() * A * G;
}

Eigen::Matrix3d element_mass(double area) {
  Eigen::Matrix3d m;
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  return area / 12.0 * m;
}

FemSystem assemble(const TriMesh& mesh, const std::vector<Element>& elements,
                   const std::vector<Eigen::Matrix2d>& element_A, int threads) {
  if (elements.size() != mesh.triangles.size() || element_A.size() != elements.size())
    throw ContractViolation("element data does not match the mesh");
  using Pair = std::pair<Eigen::Matrix3d, Eigen::Matrix3d>;
  const std::vector<Pair> local = parallel_map<Pair>(
      elements.size(),
      [&](std::size_t t) { return Pair{element_stiffness(elements[t].local, element_A[t]), element_mass(elements[t].area)}; },
      threads);
  std::vector<Eigen::Triplet<double>> tk, tm;
  tk.reserve(elements.size() * 9);
  tm.reserve(elements.size() * 9);
  for (std::size_t t = 0; t < elements.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        tk.emplace_back(tri[a], tri[b], local[t].first(a, b));
        tm.emplace_back(tri[a], tri[b], local[t].second(a, b));
      }
  }
  FemSystem s;
  const int n = mesh.vertex_count();
  s.K.resize(n, n);
  s.M.resize(n, n);
  s.K.setFromTriplets(tk.begin(), tk.end());
  s.M.setFromTriplets(tm.begin(), tm.end());
  return s;
}

FemSystem assemble(const TriMesh& mesh, const ChartManifold& m, const EndomorphismField& A, int threads) {
  const std::vector<Element> el = mesh_elements(mesh, m);
  return assemble(mesh, el, element_fields(el, A), threads);
}

}  // namespace reilly
