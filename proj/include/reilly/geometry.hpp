#pragma once

// Chart-based Riemannian calculus on top of Jet3.
//
// Index conventions, used by every module:
//   (nabla A)^a_{b c}     = nabla_c A^a_b          derivative slot last, (nabla A)(X, Y) = (nabla_Y A) X
//   (nabla^2 A)^a_{b c d} = nabla_d nabla_c A^a_b   so nabla^2 A(X, Y, Z) = (nabla_Z nabla_Y A) X - (nabla_{nabla_Z Y} A) X
//   R^a_{b c d}           = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
//                           R(X, Y) Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z = R^a_{bcd} Z^b X^c Y^d
//   T^A(X, Y)             = (nabla_X A) Y - (nabla_Y A) X
// With this curvature sign the round sphere has Ric = (n - 1) g and Ric_A = c (Trace(A) g - A)
// on a space form of curvature c.
//
// Endomorphism fields are stored by their mixed components A^a_b in the chart basis.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "reilly/jet.hpp"

namespace reilly {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// Coordinate face x_axis = lo (upper = false) or x_axis = hi (upper = true) is the boundary.
struct BoundarySide {
  int axis = 0;
  bool upper = true;
};

struct Chart {
  std::string name;
  std::vector<Interval> box;
  std::vector<bool> periodic;
  std::vector<ChartFunction> metric;              // g_ij, row-major n*n
  std::vector<ChartFunction> embedding;           // optional map into R^3
  std::vector<ChartFunction> embedding_jacobian;  // optional d(embedding)/dx, row-major 3*n, written out explicitly
  std::vector<ChartFunction> locate;              // optional inverse: n functions of the 3 ambient coordinates
  std::optional<BoundarySide> boundary;

  int dim() const { return static_cast<int>(box.size()); }
  bool embedded() const { return !embedding.empty(); }
};

struct ChartManifold {
  std::string name;
  int dim = 2;
  std::vector<Chart> charts;
  std::optional<double> known_diameter;
  std::optional<double> curvature_constant;

  bool has_boundary() const { return !charts.empty() && charts.front().boundary.has_value(); }
  const Chart& primary() const { return charts.front(); }
};

struct ChartPoint {
  int chart = 0;
  Vec coords;
};

struct StructureFlags {
  bool self_adjoint = false;
  bool positive_semidefinite = false;
  bool parallel = false;
  bool codazzi = false;
  bool divergence_free = false;
  bool trace_constant = false;

  friend bool operator==(const StructureFlags&, const StructureFlags&) = default;
};

std::string format_flags(const StructureFlags& f);

struct EndomorphismField {
  std::string name;
  std::vector<ChartFunction> entries;  // A^i_j on the primary chart, row-major
  StructureFlags declared;
};

struct ScalarField {
  std::string name;
  ChartFunction u;
  std::string role = "test function";
};

/// Tensor whose components are jets.  `variance` lists each index as 'u' (up) or
/// 'd' (down); components are stored row-major over the index tuple.
class JetTensor {
 public:
  JetTensor() = default;
  JetTensor(int dim, std::string variance);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::string& variance() const { return variance_; }
  std::size_t size() const { return comp_.size(); }

  Jet3& operator[](std::size_t flat) { return comp_[flat]; }
  const Jet3& operator[](std::size_t flat) const { return comp_[flat]; }
  Jet3& at(std::initializer_list<int> idx) { return comp_[flat_index(idx)]; }
  const Jet3& at(std::initializer_list<int> idx) const { return comp_[flat_index(idx)]; }
  std::size_t flat_index(std::initializer_list<int> idx) const;
  std::vector<int> multi_index(std::size_t flat) const;

  /// Point values of a rank-1 or rank-2 tensor.
  Vec vector_value() const;
  Mat matrix_value() const;

 private:
  int dim_ = 0;
  std::string variance_;
  std::vector<Jet3> comp_;
};

JetTensor make_vector(const std::vector<Jet3>& v);
JetTensor make_endomorphism(int dim, const std::vector<Jet3>& row_major);

/// Pointwise cached geometry of one chart at one point: jets of g, g^-1, sqrt(det g),
/// Christoffel symbols and the Riemann tensor, plus an orthonormal frame.
/// Immutable after construction.
class LocalGeometry {
 public:
  LocalGeometry(const ChartManifold& m, const ChartPoint& p);

  int dim() const { return dim_; }
  const ChartPoint& point() const { return point_; }
  const Chart& chart() const { return *chart_; }
  std::span<const Jet3> coordinate_jets() const { return {x_.data(), static_cast<std::size_t>(dim_)}; }

  Jet3 eval(const ChartFunction& f) const;

  const JetTensor& g() const { return g_; }          // "dd"
  const JetTensor& ginv() const { return ginv_; }    // "uu"
  const Jet3& sqrt_det() const { return sqrtg_; }
  const JetTensor& gamma() const { return gamma_; }  // G^k_ij, "udd"
  const JetTensor& riemann() const { return riem_; } // R^a_bcd, "uddd"

  Mat metric() const { return g_.matrix_value(); }
  Mat metric_inverse() const { return ginv_.matrix_value(); }
  /// Columns are chart components of an orthonormal frame e_0..e_{n-1} (Gram-Schmidt of d_0, d_1, ...).
  const Mat& frame() const { return frame_; }

  double inner(const Vec& X, const Vec& Y) const;
  double norm(const Vec& X) const;
  Vec riemann_apply(const Vec& X, const Vec& Y, const Vec& Z) const;  // R(X,Y)Z
  double ricci(const Vec& X, const Vec& Y) const;
  /// Ric_A(X, Y) = sum_i <R(X, A e_i) e_i, Y> over the columns of `frame` (default: own frame).
  double ric_A(const Mat& A, const Vec& X, const Vec& Y, const Mat* frame = nullptr) const;
  /// Matrix of a bilinear form b(X,Y) in the chart basis.
  Mat ric_A_matrix(const Mat& A, const Mat* frame = nullptr) const;

  JetTensor covariant_derivative(const JetTensor& t) const;
  JetTensor gradient(const Jet3& u) const;
  Jet3 divergence(const JetTensor& vector_field) const;
  /// Contraction of the last two indices of a mixed tensor with g^{-1} (trace over derivative slots).
  JetTensor metric_trace_last_two(const JetTensor& t) const;
  Jet3 inner_jet(const JetTensor& X, const JetTensor& Y) const;

  /// A matrix (mixed components) expressed in the orthonormal frame.
  Mat to_frame(const Mat& mixed) const;

 private:
  const Chart* chart_;
  int dim_;
  ChartPoint point_;
  std::array<Jet3, kMaxJetDim> x_;
  JetTensor g_, ginv_, gamma_, riem_;
  Jet3 sqrtg_;
  Mat frame_;
};

/// Jet bundle of a (1,1) field at a point.
struct EndomorphismJets {
  JetTensor A;       // "ud"
  JetTensor dA;      // "udd"   nabla_c A^a_b
  JetTensor d2A;     // "uddd"  nabla_d nabla_c A^a_b
  JetTensor T;       // "udd"   T^a_{bc} = T(d_b, d_c)^a
  JetTensor dT;      // "uddd"  (nabla_d T)^a_{bc}
  JetTensor divA;    // "u"     g^{cb} nabla_c A^a_b
  JetTensor lapA;    // "ud"    g^{cd} nabla_d nabla_c A
  Jet3 trace;

  Mat value() const { return A.matrix_value(); }
  /// (nabla_X A) as a matrix.
  Mat nabla(const Vec& X) const;
  Vec T_apply(const Vec& X, const Vec& Y) const;
  Vec d2A_apply(const Vec& X, const Vec& Y, const Vec& Z) const;
  Vec dT_apply(const Vec& X, const Vec& Y, const Vec& Z) const;  // (nabla_Z T)(X, Y)
};

EndomorphismJets endomorphism_jets(const LocalGeometry& geo, const EndomorphismField& A);
EndomorphismJets endomorphism_jets(const LocalGeometry& geo, const JetTensor& A);

/// Jet bundle of a scalar at a point.
struct ScalarJets {
  Jet3 u;
  JetTensor grad;       // "u"  V = grad u
  JetTensor hess;       // "ud" mixed Hessian nabla_c V^a
  Jet3 laplacian;

  Vec gradient_value() const { return grad.vector_value(); }
  Mat hessian_value() const { return hess.matrix_value(); }
};

ScalarJets scalar_jets(const LocalGeometry& geo, const ScalarField& u);
ScalarJets scalar_jets(const LocalGeometry& geo, const Jet3& u);

// ---- Spec-level point operations (thin wrappers that build a LocalGeometry) ----

/// G[k](i, j) = Gamma^k_ij.
std::vector<Mat> christoffel(const ChartManifold& m, const ChartPoint& p);
/// Returns R^a_{bcd} flattened row-major (a, b, c, d).
std::vector<double> riemann(const ChartManifold& m, const ChartPoint& p);
double sectional_curvature(const ChartManifold& m, const ChartPoint& p, const Vec& X, const Vec& Y);
/// Ric_A in the chart basis.
Mat ric_A(const ChartManifold& m, const EndomorphismField& A, const ChartPoint& p, const Mat* frame = nullptr);

struct HessianResult {
  Vec gradient;     // chart components of grad u
  Mat hessian;      // covariant Hess(u)(d_i, d_j)
  double laplacian;
};
HessianResult hessian(const ChartManifold& m, const ScalarField& u, const ChartPoint& p);

double op_L_A(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u, const ChartPoint& p);
double op_Delta_A(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u, const ChartPoint& p);
double op_L_A(const LocalGeometry& geo, const EndomorphismJets& A, const ScalarJets& u);
double op_Delta_A(const EndomorphismJets& A, const ScalarJets& u);

struct TensorDerivatives {
  std::vector<Mat> nabla_A;  // nabla_A[c] = nabla_{d_c} A
  std::vector<std::vector<Mat>> nabla2_A;  // nabla2_A[d][c] = (nabla^2 A)(., d_c, d_d)
  Mat laplacian_A;
  Vec div_A;
  std::vector<std::vector<Vec>> T;  // T[b][c] = T^A(d_b, d_c)
};
TensorDerivatives tensor_derivatives(const ChartManifold& m, const EndomorphismField& A, const ChartPoint& p);

/// Minimum eigenvalue of g at p; throws SingularMetric below 1e-10.
double metric_min_eigenvalue(const ChartManifold& m, const ChartPoint& p);
/// Worst relative disagreement of g between chart 0 at p and the pulled-back metric of
/// chart `other`.  Returns nullopt when the image of p is not interior to `other`.
std::optional<double> overlap_metric_defect(const ChartManifold& m, const ChartPoint& p, int other);

/// Embedding position and Jacobian (3 x n) at p; throws ContractViolation if the chart is not embedded.
Vec embed(const Chart& c, const Vec& p);
Mat embedding_jacobian(const Chart& c, const Vec& p);
Vec locate(const Chart& c, const Vec& ambient);

}  // namespace reilly
