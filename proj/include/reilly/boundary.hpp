#pragma once

// Boundary geometry of a chart face and quadrature evaluation of both sides of the
// Reilly-type integral formulas.
//
// With u_n = <grad u, n>, W = grad u - u_n n (the boundary gradient) and
// shape(X) = sigma * nabla_X n, the boundary integrand is
//   <nabla_W W, A n> - 2 u_n <shape W, A n> + u_n^2 H_A - u_n <A n, grad^bd u_n>
//   + W(u_n) <n, A n> - u_n L^bd_A u
// and for Codazzi, divergence-free A additionally
//   1/2 <W, (nabla_n A) W> + 1/2 u_n^2 <n, (nabla_n A) n> + u_n <W, (nabla_n A) n>.
// The interior integrand is Trace(A hess^2 u) - Op(u) Lap(u) + Ric_A(grad u, grad u)
// [+ 1/2 <grad u, (Lap A) grad u>], Op = L_A (parallel) or Delta_A (Codazzi).

#include <string>
#include <vector>

#include "reilly/geometry.hpp"

namespace reilly {

/// Shape-operator sign fixed by the classical Reilly check on the flat disk.
inline constexpr int kShapeSign = -1;

/// L^bd_A u as Sum_i <P nabla_{t_i} W, A t_i> (trace) or div^bd(P A W) (divergence).
enum class BoundaryOperatorForm { trace, divergence };
std::string to_string(BoundaryOperatorForm f);
BoundaryOperatorForm parse_boundary_form(const std::string& s);

struct BoundaryGeometry {
  ChartPoint point;
  Vec normal;         // outward unit normal
  Mat tangent_frame;  // n x (n-1), orthonormal columns
  Mat shape;          // sigma * nabla n; meaningful on tangent vectors
  Mat metric;         // g at the point
  double measure = 0.0;  // boundary volume density w.r.t. the face coordinates
  int sigma = kShapeSign;

  /// Trace(A o shape) over the boundary tangent space.
  double mean_curvature_A(const Mat& A) const;
};

/// Point of the boundary face from the coordinates of the remaining axes.
ChartPoint boundary_point(const ChartManifold& m, const Vec& face_coords);

BoundaryGeometry boundary_geometry(const ChartManifold& m, const ChartPoint& p, int sigma = kShapeSign);

struct ReillyTerm {
  std::string name;
  double value = 0.0;
};

struct ReillyEvaluation {
  std::string formula;  // "parallel" or "codazzi"
  double B = 0.0;
  double C = 0.0;
  std::vector<ReillyTerm> boundary_terms;
  std::vector<ReillyTerm> interior_terms;
  int order = 0;
  int sigma = kShapeSign;
  BoundaryOperatorForm form = BoundaryOperatorForm::trace;
  double B_other_form = 0.0;  // B with the other boundary-operator variant

  double defect() const;
  double form_disagreement() const;
};

struct ReillyOptions {
  int sigma = kShapeSign;
  BoundaryOperatorForm form = BoundaryOperatorForm::trace;
  int threads = 0;
  bool check_hypotheses = true;
};

/// Requires A parallel (HypothesisViolation otherwise).  B = 0 on closed manifolds.
ReillyEvaluation reilly_parallel(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u, int q,
                                 const ReillyOptions& opt = {});
/// Requires A Codazzi and divergence free.
ReillyEvaluation reilly_codazzi(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u, int q,
                                const ReillyOptions& opt = {});

struct ShapeSignResult {
  int sigma = 0;
  double defect_plus = 0.0;
  double defect_minus = 0.0;
};

/// Evaluates the parallel formula for both signs; the unique sign with defect below
/// `tol` wins.  Throws ContractViolation when neither or both qualify.
ShapeSignResult determine_shape_sign(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u,
                                     int q = 16, double tol = 1e-6);

}  // namespace reilly
