#include "reilly/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reilly/errors.hpp"

namespace reilly {

namespace {

double max_abs(std::initializer_list<double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Jet3 directional(const JetTensor& V, const Jet3& f) {
  Jet3 s = Jet3::constant(f.dim(), 0.0);
  for (int c = 0; c < f.dim(); ++c) s += V.at({c}) * f.derivative(c);
  return s;
}

}  // namespace

BochnerTerms bochner_terms(const LocalGeometry& geo, const EndomorphismJets& A, const ScalarJets& u) {
  const int n = geo.dim();
  const Jet3 f = geo.inner_jet(u.grad, u.grad);
  const ScalarJets fj = scalar_jets(geo, f);
  const Vec V = u.gradient_value();
  const Mat H = u.hessian_value();
  const Mat Av = A.value();

  BochnerTerms t;
  t.lhs = 0.5 * op_L_A(geo, A, fj);
  t.div_term = 0.5 * geo.inner(fj.gradient_value(), A.divA.vector_value());
  t.hess_term = (Av * H * H).trace();

  Jet3 delta_A = Jet3::constant(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) delta_A += u.hess.at({a, c}) * A.A.at({c, a});
  Vec ddelta(n);
  for (int c = 0; c < n; ++c) ddelta(c) = delta_A.d(c);
  t.grad_term = V.dot(ddelta);  // <V, grad f> = V^c d_c f

  t.nabla_term = (H * A.nabla(V)).trace();
  t.ric_term = geo.ric_A(Av, V, V);
  return t;
}

ResidualSample bochner_residual(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u,
                                const ChartPoint& p) {
  const LocalGeometry geo(m, p);
  const BochnerTerms t = bochner_terms(geo, endomorphism_jets(geo, A), scalar_jets(geo, u));
  return {p, std::abs(t.lhs - t.rhs()),
          max_abs({t.lhs, t.div_term, t.hess_term, t.grad_term, t.nabla_term, t.ric_term})};
}

ResidualSample bochner_parallel_residual(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u,
                                         const ChartPoint& p) {
  const LocalGeometry geo(m, p);
  const EndomorphismJets e = endomorphism_jets(geo, A);
  const double viol = nabla_norm(geo, e);
  if (viol > kStructureTolerance)
    throw HypothesisViolation("field " + A.name + " is not parallel (|nabla A| = " + std::to_string(viol) + ")");
  const BochnerTerms t = bochner_terms(geo, e, scalar_jets(geo, u));
  const double rhs = t.hess_term + t.grad_term + t.ric_term;
  return {p, std::abs(t.lhs - rhs), max_abs({t.lhs, t.hess_term, t.grad_term, t.ric_term})};
}

ResidualSample ricci_commutation_residual(const ChartManifold& m, const EndomorphismField& A, const ChartPoint& p,
                                          const Vec& X, const Vec& Y, const Vec& Z) {
  const LocalGeometry geo(m, p);
  const EndomorphismJets e = endomorphism_jets(geo, A);
  const Mat Av = e.value();
  const Vec t1 = e.d2A_apply(X, Y, Z);
  const Vec t2 = e.d2A_apply(X, Z, Y);
  const Vec r1 = geo.riemann_apply(Z, Y, Av * X);
  const Vec r2 = Av * geo.riemann_apply(Z, Y, X);
  const Vec res = t1 - t2 - (r1 - r2);
  return {p, geo.norm(res), max_abs({geo.norm(t1), geo.norm(t2), geo.norm(r1), geo.norm(r2)})};
}

ResidualSample torsion_swap_residual(const ChartManifold& m, const EndomorphismField& A, const ChartPoint& p,
                                     const Vec& X, const Vec& Y, const Vec& Z) {
  const LocalGeometry geo(m, p);
  const EndomorphismJets e = endomorphism_jets(geo, A);
  const Vec t1 = e.d2A_apply(X, Y, Z);
  const Vec t2 = e.d2A_apply(Y, X, Z);
  const Vec t3 = e.dT_apply(X, Y, Z);
  return {p, geo.norm(t1 - t2 + t3), max_abs({geo.norm(t1), geo.norm(t2), geo.norm(t3)})};
}

ResidualSample deltaA_identity_residual(const ChartManifold& m, const EndomorphismField& A, const ChartPoint& p,
                                        const Vec& X) {
  const LocalGeometry geo(m, p);
  const EndomorphismJets e = endomorphism_jets(geo, A);
  const double viol = torsion_norm(geo, e);
  if (viol > kStructureTolerance)
    throw HypothesisViolation("field " + A.name + " is not Codazzi (|T^A| = " + std::to_string(viol) + ")");
  const Mat Av = e.value();
  const double lhs = geo.inner(e.lapA.matrix_value() * X, X);
  const ScalarJets tr = scalar_jets(geo, e.trace);
  const double hess_tr = geo.inner(tr.hessian_value() * X, X);
  const double ricA = geo.ric_A(Av, X, X);
  const double ric = geo.ricci(X, Av * X);
  return {p, std::abs(lhs - (hess_tr - ricA + ric)), max_abs({lhs, hess_tr, ricA, ric})};
}

NablaNablaTerms nabla_nabla_u_terms(const LocalGeometry& geo, const EndomorphismJets& B, const ScalarJets& u) {
  const int n = geo.dim();
  const JetTensor& V = u.grad;
  const Vec Vv = u.gradient_value();

  // C = nabla_V B as a jet field.
  JetTensor C(n, "ud");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet3 s = Jet3::constant(n, 0.0);
      for (int c = 0; c < n; ++c) s += B.dA.at({a, b, c}) * V.at({c});
      C.at({a, b}) = s;
    }
  const JetTensor dC = geo.covariant_derivative(C);

  NablaNablaTerms t;
  t.lhs = (u.hessian_value() * C.matrix_value()).trace();
  t.iterated = directional(V, directional(V, B.trace)).value();
  t.laplacian_B = geo.inner(Vv, B.lapA.matrix_value() * Vv);
  // T^C(d_b, V)^a = (nabla_b C)^a_c V^c - (nabla_V C)^a_b ; trace over a = b.
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      t.torsion_C += (dC.at({b, c, b}).value() - dC.at({b, b, c}).value()) * Vv(c);

  // Z^d = g^{db} <V, T^B(d_b, V)>.
  JetTensor Z(n, "u");
  for (int d = 0; d < n; ++d) {
    Jet3 s = Jet3::constant(n, 0.0);
    for (int b = 0; b < n; ++b) {
      Jet3 w = Jet3::constant(n, 0.0);
      for (int a = 0; a < n; ++a)
        for (int e = 0; e < n; ++e)
          for (int c = 0; c < n; ++c) w += geo.g().at({a, e}) * V.at({e}) * B.T.at({a, b, c}) * V.at({c});
      s += geo.ginv().at({d, b}) * w;
    }
    Z.at({d}) = s;
  }
  t.torsion_B_div = geo.divergence(Z).value();
  return t;
}

ResidualSample nabla_nabla_u_residual(const ChartManifold& m, const EndomorphismField& B, const ScalarField& u,
                                      const ChartPoint& p) {
  const LocalGeometry geo(m, p);
  const NablaNablaTerms t = nabla_nabla_u_terms(geo, endomorphism_jets(geo, B), scalar_jets(geo, u));
  return {p, std::abs(t.lhs - t.rhs()), max_abs({t.lhs, t.iterated, t.laplacian_B, t.torsion_C, t.torsion_B_div})};
}

double trace_inequality_slack(const Mat& A, const Mat& F) {
  if (A.rows() != A.cols() || F.rows() != F.cols() || A.rows() != F.rows())
    throw ContractViolation("trace inequality needs square matrices of equal size");
  const double trA = A.trace();
  if (!(trA > 0.0)) throw ContractViolation("trace inequality needs Trace(A) > 0");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, A.norm()))
    throw ContractViolation("trace inequality needs a positive semidefinite A");
  const double tAF = (A * F).trace();
  return (A * F * F).trace() - tAF * tAF / trA;
}

double nabla_norm(const LocalGeometry& geo, const EndomorphismJets& A) {
  const Mat& E = geo.frame();
  const Mat Einv = E.inverse();
  double s = 0.0;
  for (int k = 0; k < geo.dim(); ++k) s += (Einv * A.nabla(E.col(k)) * E).squaredNorm();
  return std::sqrt(s);
}

double torsion_norm(const LocalGeometry& geo, const EndomorphismJets& A) {
  const Mat& E = geo.frame();
  double s = 0.0;
  for (int j = 0; j < geo.dim(); ++j)
    for (int k = 0; k < geo.dim(); ++k) s += std::pow(geo.norm(A.T_apply(E.col(j), E.col(k))), 2);
  return std::sqrt(s);
}

StructureReport structure_check(const ChartManifold& m, const EndomorphismField& A,
                                const std::vector<ChartPoint>& samples) {
  if (samples.empty()) throw ContractViolation("structure_check needs at least one sample point");
  StructureReport r;
  r.samples = static_cast<int>(samples.size());
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
  for (const auto& p : samples) {
    const LocalGeometry geo(m, p);
    const EndomorphismJets e = endomorphism_jets(geo, A);
    const Mat Af = geo.to_frame(e.value());
    r.self_adjoint_violation = std::max(r.self_adjoint_violation, (Af - Af.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Af + Af.transpose()), Eigen::EigenvaluesOnly);
    r.min_eigenvalue = std::min(r.min_eigenvalue, es.eigenvalues().minCoeff());
    r.parallel_violation = std::max(r.parallel_violation, nabla_norm(geo, e));
    r.codazzi_violation = std::max(r.codazzi_violation, torsion_norm(geo, e));
    r.divergence_violation = std::max(r.divergence_violation, geo.norm(e.divA.vector_value()));
    tmin = std::min(tmin, e.trace.value());
    tmax = std::max(tmax, e.trace.value());
  }
  r.trace_spread = tmax - tmin;
  r.flags.self_adjoint = r.self_adjoint_violation <= kStructureTolerance;
  r.flags.positive_semidefinite = r.min_eigenvalue >= -kStructureTolerance;
  r.flags.parallel = r.parallel_violation <= kStructureTolerance;
  r.flags.codazzi = r.codazzi_violation <= kStructureTolerance;
  r.flags.divergence_free = r.divergence_violation <= kStructureTolerance;
  r.flags.trace_constant = r.trace_spread <= kStructureTolerance;
  return r;
}

}  // namespace reilly
