#include "reilly/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "reilly/errors.hpp"
#include "reilly/identities.hpp"
#include "reilly/parallel.hpp"
#include "reilly/quadrature.hpp"
#include "reilly/sampling.hpp"

namespace reilly {

std::string to_string(BoundaryOperatorForm f) { return f == BoundaryOperatorForm::trace ? "trace" : "divergence"; }

BoundaryOperatorForm parse_boundary_form(const std::string& s) {
  if (s == "trace") return BoundaryOperatorForm::trace;
  if (s == "divergence") return BoundaryOperatorForm::divergence;
  throw UnknownName("unknown boundary operator form '" + s + "'");
}

double BoundaryGeometry::mean_curvature_A(const Mat& A) const {
  double h = 0.0;
  for (int i = 0; i < tangent_frame.cols(); ++i) {
    const Vec t = tangent_frame.col(i);
    h += t.dot(metric * (A * (shape * t)));
  }
  return h;
}

namespace {

const Chart& boundary_chart(const ChartManifold& m) {
  if (!m.has_boundary()) throw ContractViolation(m.name + " has no boundary");
  return m.primary();
}

double face_value(const Chart& c) {
  const BoundarySide s = *c.boundary;
  return s.upper ? c.box[s.axis].hi : c.box[s.axis].lo;
}

void require_on_boundary(const ChartManifold& m, const ChartPoint& p) {
  const Chart& c = boundary_chart(m);
  const BoundarySide s = *c.boundary;
  if (p.coords.size() != c.dim() || std::abs(p.coords(s.axis) - face_value(c)) > 1e-12)
    throw ContractViolation("point is not on the boundary face of " + m.name);
}

/// Outward unit normal as a jet field: +- g^{a,axis} / sqrt(g^{axis,axis}).
JetTensor normal_field(const LocalGeometry& geo, const BoundarySide& s) {
  const int n = geo.dim();
  const Jet3 len = sqrt(geo.ginv().at({s.axis, s.axis}));
  JetTensor N(n, "u");
  for (int a = 0; a < n; ++a) N.at({a}) = (s.upper ? 1.0 : -1.0) * geo.ginv().at({a, s.axis}) / len;
  return N;
}

Mat tangent_frame(const LocalGeometry& geo, const BoundarySide& s, const Vec& nv) {
  const int n = geo.dim();
  Mat T(n, n - 1);
  int k = 0;
  for (int b = 0; b < n; ++b) {
    if (b == s.axis) continue;
    Vec t = Vec::Unit(n, b);
    t -= geo.inner(t, nv) * nv;
    for (int j = 0; j < k; ++j) t -= geo.inner(t, T.col(j)) * T.col(j);
    T.col(k++) = t / geo.norm(t);
  }
  return T;
}

double face_measure(const LocalGeometry& geo, const BoundarySide& s) {
  const int n = geo.dim();
  const Mat g = geo.metric();
  std::vector<int> keep;
  for (int b = 0; b < n; ++b)
    if (b != s.axis) keep.push_back(b);
  Mat h(n - 1, n - 1);
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) h(i, j) = g(keep[i], keep[j]);
  return std::sqrt(h.determinant());
}

Vec gradient_of(const LocalGeometry& geo, const Jet3& f) {
  Vec d(geo.dim());
  for (int c = 0; c < geo.dim(); ++c) d(c) = f.d(c);
  return geo.metric_inverse() * d;
}

enum BoundaryTermIndex { kNablaWW, kShape, kMean, kGradUn, kWUn, kOperator, kDnAWW, kDnAnn, kDnAWn, kOperatorOther,
                         kBoundaryTermCount };
const char* const kBoundaryTermNames[] = {"nabla_W_W", "shape", "mean_curvature", "grad_u_n", "W_u_n",
                                          "boundary_operator", "dnA_WW", "dnA_nn", "dnA_Wn"};

std::vector<double> boundary_integrand(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u,
                                       const ChartPoint& p, const ReillyOptions& opt, bool codazzi) {
  const BoundarySide side = *m.primary().boundary;
  const LocalGeometry geo(m, p);
  const int n = geo.dim();
  const EndomorphismJets Aj = endomorphism_jets(geo, A);
  const ScalarJets uj = scalar_jets(geo, u);

  const JetTensor N = normal_field(geo, side);
  const Jet3 un = geo.inner_jet(uj.grad, N);
  JetTensor W(n, "u");
  for (int a = 0; a < n; ++a) W.at({a}) = uj.grad.at({a}) - un * N.at({a});
  const Mat dW = geo.covariant_derivative(W).matrix_value();
  const Mat dN = geo.covariant_derivative(N).matrix_value();

  const Vec nv = N.vector_value(), wv = W.vector_value();
  const double unv = un.value();
  const Mat Av = Aj.value();
  const Vec An = Av * nv;
  const Mat T = tangent_frame(geo, side, nv);
  const Mat S = opt.sigma * dN;
  auto P = [&](const Vec& X) -> Vec { return X - geo.inner(X, nv) * nv; };

  double H_A = 0.0, trace_op = 0.0;
  for (int i = 0; i < T.cols(); ++i) {
    const Vec t = T.col(i);
    H_A += geo.inner(Av * (S * t), t);
    trace_op += geo.inner(P(dW * t), Av * t);
  }
  JetTensor Y(n, "u");
  {
    std::vector<Jet3> AW(n, Jet3::constant(n, 0.0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) AW[a] += Aj.A.at({a, b}) * W.at({b});
    Jet3 AWn = Jet3::constant(n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) AWn += geo.g().at({a, b}) * AW[a] * N.at({b});
    for (int a = 0; a < n; ++a) Y.at({a}) = AW[a] - AWn * N.at({a});
  }
  const Mat dY = geo.covariant_derivative(Y).matrix_value();
  double div_op = 0.0;
  for (int i = 0; i < T.cols(); ++i) div_op += geo.inner(dY * T.col(i), T.col(i));

  const Vec grad_un = gradient_of(geo, un);
  double w_un = 0.0;
  for (int c = 0; c < n; ++c) w_un += wv(c) * un.d(c);

  std::vector<double> v(kBoundaryTermCount, 0.0);
  v[kNablaWW] = geo.inner(dW * wv, An);
  v[kShape] = -2.0 * unv * geo.inner(S * wv, An);
  v[kMean] = unv * unv * H_A;
  v[kGradUn] = -unv * geo.inner(An, P(grad_un));
  v[kWUn] = w_un * geo.inner(nv, An);
  const bool trace_form = opt.form == BoundaryOperatorForm::trace;
  v[kOperator] = -unv * (trace_form ? trace_op : div_op);
  v[kOperatorOther] = -unv * (trace_form ? div_op : trace_op);
  if (codazzi) {
    const Mat dnA = Aj.nabla(nv);
    v[kDnAWW] = 0.5 * geo.inner(wv, dnA * wv);
    v[kDnAnn] = 0.5 * unv * unv * geo.inner(nv, dnA * nv);
    v[kDnAWn] = unv * geo.inner(wv, dnA * nv);
  }
  const double dens = face_measure(geo, side);
  for (double& x : v) x *= dens;
  return v;
}

enum InteriorTermIndex { kTraceAH2, kOpLap, kRicA, kLapA, kInteriorTermCount };

std::vector<double> interior_integrand(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u,
                                       const ChartPoint& p, bool codazzi) {
  const LocalGeometry geo(m, p);
  const EndomorphismJets Aj = endomorphism_jets(geo, A);
  const ScalarJets uj = scalar_jets(geo, u);
  const Mat Av = Aj.value();
  const Mat H = uj.hessian_value();
  const Vec V = uj.gradient_value();
  std::vector<double> v(kInteriorTermCount, 0.0);
  v[kTraceAH2] = (Av * H * H).trace();
  const double op = codazzi ? op_Delta_A(Aj, uj) : op_L_A(geo, Aj, uj);
  v[kOpLap] = -op * uj.laplacian.value();
  v[kRicA] = geo.ric_A(Av, V, V);
  if (codazzi) v[kLapA] = 0.5 * geo.inner(V, Aj.lapA.matrix_value() * V);
  const double dens = geo.sqrt_det().value();
  for (double& x : v) x *= dens;
  return v;
}

std::vector<double> integrate_terms(const ChartQuadrature& rule, std::size_t count,
                                    const std::function<std::vector<double>(const ChartPoint&)>& f, int threads) {
  const auto vals = parallel_map<std::vector<double>>(
      rule.points.size(), [&](std::size_t k) { return f(rule.points[k]); }, threads);
  std::vector<double> out(count, 0.0);
  std::vector<double> column(vals.size());
  for (std::size_t t = 0; t < count; ++t) {
    for (std::size_t k = 0; k < vals.size(); ++k) column[k] = rule.weights[k] * vals[k][t];
    out[t] = pairwise_sum(column);
  }
  return out;
}

void check_structure(const ChartManifold& m, const EndomorphismField& A, bool codazzi) {
  const StructureReport r = structure_check(m, A, sample_chart_points(m, 64, 0x5eed));
  if (!codazzi && !r.flags.parallel)
    throw HypothesisViolation("field " + A.name + " is not parallel (|nabla A| = " +
                              std::to_string(r.parallel_violation) + ")");
  if (codazzi && !r.flags.codazzi)
    throw HypothesisViolation("field " + A.name + " is not Codazzi (|T^A| = " + std::to_string(r.codazzi_violation) +
                              ")");
  if (codazzi && !r.flags.divergence_free)
    throw HypothesisViolation("field " + A.name + " is not divergence free (|div A| = " +
                              std::to_string(r.divergence_violation) + ")");
}

ReillyEvaluation evaluate(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u, int q,
                          const ReillyOptions& opt, bool codazzi) {
  if (q < 1) throw ContractViolation("quadrature order must be >= 1");
  if (opt.sigma != 1 && opt.sigma != -1) throw ContractViolation("sigma must be +1 or -1");
  if (opt.check_hypotheses) check_structure(m, A, codazzi);

  ReillyEvaluation ev;
  ev.formula = codazzi ? "codazzi" : "parallel";
  ev.order = q;
  ev.sigma = opt.sigma;
  ev.form = opt.form;

  const std::vector<double> bt =
      m.has_boundary()
          ? integrate_terms(boundary_quadrature(m, q), kBoundaryTermCount,
                            [&](const ChartPoint& p) { return boundary_integrand(m, A, u, p, opt, codazzi); },
                            opt.threads)
          : std::vector<double>(kBoundaryTermCount, 0.0);
  const int nb = codazzi ? kDnAWn + 1 : kOperator + 1;
  for (int i = 0; i < nb; ++i) {
    ev.boundary_terms.push_back({kBoundaryTermNames[i], bt[i]});
    ev.B += bt[i];
  }
  ev.B_other_form = ev.B - bt[kOperator] + bt[kOperatorOther];

  const std::vector<double> it = integrate_terms(
      interior_quadrature(m, q), kInteriorTermCount,
      [&](const ChartPoint& p) { return interior_integrand(m, A, u, p, codazzi); }, opt.threads);
  ev.interior_terms.push_back({"trace_AH2", it[kTraceAH2]});
  ev.interior_terms.push_back({codazzi ? "Delta_A_u_lap_u" : "L_A_u_lap_u", it[kOpLap]});
  ev.interior_terms.push_back({"ric_A", it[kRicA]});
  if (codazzi) ev.interior_terms.push_back({"lapA", it[kLapA]});
  for (const auto& t : ev.interior_terms) ev.C += t.value;
  return ev;
}

}  // namespace

ChartPoint boundary_point(const ChartManifold& m, const Vec& face_coords) {
  const Chart& c = boundary_chart(m);
  const BoundarySide s = *c.boundary;
  if (face_coords.size() != c.dim() - 1) throw ContractViolation("boundary parameter has the wrong dimension");
  ChartPoint p;
  p.coords = Vec(c.dim());
  for (int a = 0, k = 0; a < c.dim(); ++a) p.coords(a) = a == s.axis ? face_value(c) : face_coords(k++);
  return p;
}

BoundaryGeometry boundary_geometry(const ChartManifold& m, const ChartPoint& p, int sigma) {
  require_on_boundary(m, p);
  if (sigma != 1 && sigma != -1) throw ContractViolation("sigma must be +1 or -1");
  const BoundarySide side = *m.primary().boundary;
  const LocalGeometry geo(m, p);
  const JetTensor N = normal_field(geo, side);
  BoundaryGeometry b;
  b.point = p;
  b.sigma = sigma;
  b.normal = N.vector_value();
  b.tangent_frame = tangent_frame(geo, side, b.normal);
  b.shape = sigma * geo.covariant_derivative(N).matrix_value();
  b.measure = face_measure(geo, side);
  b.metric = geo.metric();
  return b;
}

double ReillyEvaluation::defect() const { return std::abs(B - C) / std::max({std::abs(B), std::abs(C), 1.0}); }

double ReillyEvaluation::form_disagreement() const {
  return std::abs(B - B_other_form) / std::max({std::abs(B), std::abs(B_other_form), 1.0});
}

ReillyEvaluation reilly_parallel(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u, int q,
                                 const ReillyOptions& opt) {
  return evaluate(m, A, u, q, opt, false);
}

ReillyEvaluation reilly_codazzi(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u, int q,
                                const ReillyOptions& opt) {
  return evaluate(m, A, u, q, opt, true);
}

ShapeSignResult determine_shape_sign(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u, int q,
                                     double tol) {
  ReillyOptions opt;
  ShapeSignResult r;
  opt.sigma = 1;
  r.defect_plus = reilly_parallel(m, A, u, q, opt).defect();
  opt.sigma = -1;
  r.defect_minus = reilly_parallel(m, A, u, q, opt).defect();
  const bool plus = r.defect_plus < tol, minus = r.defect_minus < tol;
  if (plus == minus)
    throw ContractViolation("shape sign is not determined: defects " + std::to_string(r.defect_plus) + " (+1), " +
                            std::to_string(r.defect_minus) + " (-1)");
  r.sigma = plus ? 1 : -1;
  return r;
}

}  // namespace reilly
