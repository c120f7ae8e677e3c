#pragma once

// Pointwise residuals of the Bochner-type identities and the structure predicates
// used as theorem hypotheses.

#include <string>
#include <vector>

#include "reilly/geometry.hpp"

namespace reilly {

/// Thresholds shared by structure_check and the hypothesis guards.
inline constexpr double kStructureTolerance = 1e-8;

struct ResidualSample {
  ChartPoint point;
  double residual = 0.0;
  double scale = 0.0;  // magnitude of the largest constituent term
  double relative() const { return residual / std::max(scale, 1.0); }
};

struct BochnerTerms {
  double lhs = 0.0;         // 1/2 L_A |grad u|^2
  double div_term = 0.0;    // 1/2 <grad |grad u|^2, div A>
  double hess_term = 0.0;   // Trace(A o hess^2 u)
  double grad_term = 0.0;   // <grad u, grad Delta_A u>
  double nabla_term = 0.0;  // Delta_{(nabla_{grad u} A)} u   (enters with a minus sign)
  double ric_term = 0.0;    // Ric_A(grad u, grad u)
  double rhs() const { return div_term + hess_term + grad_term - nabla_term + ric_term; }
};

BochnerTerms bochner_terms(const LocalGeometry& geo, const EndomorphismJets& A, const ScalarJets& u);

ResidualSample bochner_residual(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u,
                                const ChartPoint& p);
/// Parallel-case identity; throws HypothesisViolation when |nabla A| > kStructureTolerance at p.
ResidualSample bochner_parallel_residual(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u,
                                         const ChartPoint& p);

/// nabla^2 A(X,Y,Z) - nabla^2 A(X,Z,Y) - [R(Z,Y)(AX) - A(R(Z,Y)X)].
ResidualSample ricci_commutation_residual(const ChartManifold& m, const EndomorphismField& A, const ChartPoint& p,
                                          const Vec& X, const Vec& Y, const Vec& Z);
/// nabla^2 A(X,Y,Z) - nabla^2 A(Y,X,Z) + (nabla_Z T^A)(X,Y).
ResidualSample torsion_swap_residual(const ChartManifold& m, const EndomorphismField& A, const ChartPoint& p,
                                     const Vec& X, const Vec& Y, const Vec& Z);

/// <(Delta A) X, X> - [Hess(Trace A)(X,X) - Ric_A(X,X) + Ric(X, AX)].
/// Throws HypothesisViolation when |T^A| > kStructureTolerance at p.
ResidualSample deltaA_identity_residual(const ChartManifold& m, const EndomorphismField& A, const ChartPoint& p,
                                        const Vec& X);

struct NablaNablaTerms {
  double lhs = 0.0;            // Delta_C u, C = nabla_{grad u} B
  double iterated = 0.0;       // grad u (grad u (Trace B))
  double laplacian_B = 0.0;    // <grad u, (Delta B) grad u>  (enters with a minus sign)
  double torsion_C = 0.0;      // sum_i <T^C(e_i, grad u), e_i>
  double torsion_B_div = 0.0;  // div Z, <Z, Y> = <grad u, T^B(Y, grad u)>
  double rhs() const { return iterated - laplacian_B + torsion_C + torsion_B_div; }
};

NablaNablaTerms nabla_nabla_u_terms(const LocalGeometry& geo, const EndomorphismJets& B, const ScalarJets& u);
/// Residual of the Delta_{(nabla_{grad u} B)} u expansion.  The expansion is an
/// identity for Codazzi B only; callers decide applicability.
ResidualSample nabla_nabla_u_residual(const ChartManifold& m, const EndomorphismField& B, const ScalarField& u,
                                      const ChartPoint& p);

/// Trace(A F^2) - Trace(A F)^2 / Trace(A) for symmetric PSD A and symmetric F.
double trace_inequality_slack(const Mat& A, const Mat& F);

struct StructureReport {
  StructureFlags flags;
  double self_adjoint_violation = 0.0;  // max |A - A^T| in an orthonormal frame
  double min_eigenvalue = 0.0;          // of the symmetrized frame matrix
  double parallel_violation = 0.0;      // max |nabla A|
  double codazzi_violation = 0.0;       // max |T^A|
  double divergence_violation = 0.0;    // max |div A|
  double trace_spread = 0.0;            // max Trace A - min Trace A
  int samples = 0;
};

StructureReport structure_check(const ChartManifold& m, const EndomorphismField& A,
                                const std::vector<ChartPoint>& samples);

/// Frame-independent pointwise norms used by structure_check.
double nabla_norm(const LocalGeometry& geo, const EndomorphismJets& A);
double torsion_norm(const LocalGeometry& geo, const EndomorphismJets& A);

}  // namespace reilly
