#pragma once

// Triangle meshes of catalog manifolds, P1 assembly of the pencil
// (K_ij = int <A grad phi_i, grad phi_j>, M_ij = int phi_i phi_j), the generalized
// eigensolver for -L_A u = lambda u, and graph diameter estimates.

#include <Eigen/Sparse>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "reilly/geometry.hpp"
#include "reilly/zoo.hpp"

namespace reilly {

using SpMat = Eigen::SparseMatrix<double>;

struct TriMesh {
  std::string manifold;
  int refine = 0;
  /// Embedded meshes store ambient positions; chart meshes store chart coordinates in
  /// (x, y) with z = 0, identified modulo `period` on periodic axes.
  bool embedded = true;
  std::vector<Eigen::Vector3d> positions;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> boundary;
  std::array<double, 2> period{0.0, 0.0};

  int vertex_count() const { return static_cast<int>(positions.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  bool has_boundary() const;
};

/// sphere: icosphere with 20 * 4^L faces; torus: periodic 2^(L+3) square grid; disk and
/// hemisphere: concentric rings (2^(L+1) of them) around the centre / pole; plane patch:
/// 2^(L+3) square grid.
TriMesh build_mesh(const CatalogEntry& entry, int refine);

int euler_characteristic(const TriMesh& mesh);
/// Boundary edges chained into closed vertex loops; throws ContractViolation if they
/// do not close up.
std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh);

/// Per-triangle data in a local orthonormal frame of the triangle.
struct Element {
  Eigen::Matrix<double, 2, 3> local;  // vertex coordinates in the frame
  Eigen::Matrix2d psi;                // chart tangent vector -> frame coordinates
  Eigen::Matrix2d ginv;               // inverse metric at the centroid
  ChartPoint centroid;
  double area = 0.0;
};

std::vector<Element> mesh_elements(const TriMesh& mesh, const ChartManifold& m);

/// A at the centroid in the triangle frame: psi (A g^-1) psi^T.  Throws ContractViolation
/// if that matrix is not symmetric to 1e-10.
std::vector<Eigen::Matrix2d> element_fields(const std::vector<Element>& elements, const EndomorphismField& A);

struct FemSystem {
  SpMat K;
  SpMat M;
};

FemSystem assemble(const TriMesh& mesh, const std::vector<Element>& elements,
                   const std::vector<Eigen::Matrix2d>& element_A, int threads = 0);
FemSystem assemble(const TriMesh& mesh, const ChartManifold& m, const EndomorphismField& A, int threads = 0);

/// 3x3 element stiffness for local vertex coordinates and a symmetric coefficient.
Eigen::Matrix3d element_stiffness(const Eigen::Matrix<double, 2, 3>& local, const Eigen::Matrix2d& A);
Eigen::Matrix3d element_mass(double area);

struct EigenOptions {
  std::uint64_t seed = 0x1a2b3c;
  /// Dense solve when the reduced system has at most this many unknowns.
  int dense_threshold = 600;
  bool force_dense = false;
  double tolerance = 1e-10;  // relative residual target of the iteration
  int max_restarts = 60;
};

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending
  Mat eigenvectors;                 // full vertex length, zero on eliminated Dirichlet nodes
  BoundaryCondition bc = BoundaryCondition::closed;
  std::vector<double> residuals;    // |K x - lambda M x| / |M x|
  int unknowns = 0;
  bool dense = false;
  double zero_threshold = 0.0;      // 1e-8 |K|

  /// Index of lambda_1: first eigenvalue above the zero threshold (closed, neumann) or 0.
  int lambda1_index() const;
  double lambda1() const { return eigenvalues.at(static_cast<std::size_t>(lambda1_index())); }
  /// Number of eigenvalues within rel_tol of lambda_1.
  int lambda1_multiplicity(double rel_tol = 0.01) const;
};

/// k smallest eigenpairs of K x = lambda M x.  Dirichlet eliminates the vertices marked in
/// `boundary_marks`.
EigenResult lowest_eigenpairs(const SpMat& K, const SpMat& M, int k, BoundaryCondition bc,
                              const std::vector<bool>& boundary_marks, const EigenOptions& opt = {});

/// Max over 8 farthest-point seeds of Dijkstra distances on the edge graph refined by
/// `steiner` extra points per edge (straight segments inside each triangle).
double mesh_diameter(const TriMesh& mesh, const ChartManifold& m, int steiner = 2);

}  // namespace reilly
