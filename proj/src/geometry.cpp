#include "reilly/geometry.hpp"

#include <cmath>
#include <numbers>

#include "reilly/errors.hpp"

namespace reilly {

std::string format_flags(const StructureFlags& f) {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(f.self_adjoint, "self_adjoint");
  add(f.positive_semidefinite, "psd");
  add(f.parallel, "parallel");
  add(f.codazzi, "codazzi");
  add(f.divergence_free, "divergence_free");
  add(f.trace_constant, "trace_constant");
  return out.empty() ? "-" : out;
}

// ---------------------------------------------------------------- JetTensor

JetTensor::JetTensor(int dim, std::string variance) : dim_(dim), variance_(std::move(variance)) {
  for (char v : variance_)
    if (v != 'u' && v != 'd') throw ContractViolation("tensor variance must be made of 'u' and 'd'");
  std::size_t n = 1;
  for (std::size_t k = 0; k < variance_.size(); ++k) n *= static_cast<std::size_t>(dim);
  comp_.assign(n, Jet3::constant(dim, 0.0));
}

std::size_t JetTensor::flat_index(std::initializer_list<int> idx) const {
  if (static_cast<int>(idx.size()) != rank()) throw ContractViolation("tensor index count mismatch");
  std::size_t flat = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw ContractViolation("tensor index out of range");
    flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::vector<int> JetTensor::multi_index(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(rank()));
  for (int k = rank() - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
    flat /= static_cast<std::size_t>(dim_);
  }
  return idx;
}

Vec JetTensor::vector_value() const {
  if (rank() != 1) throw ContractViolation("vector_value needs a rank-1 tensor");
  Vec v(dim_);
  for (int a = 0; a < dim_; ++a) v(a) = comp_[static_cast<std::size_t>(a)].value();
  return v;
}

Mat JetTensor::matrix_value() const {
  if (rank() != 2) throw ContractViolation("matrix_value needs a rank-2 tensor");
  Mat m(dim_, dim_);
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) m(a, b) = comp_[static_cast<std::size_t>(a * dim_ + b)].value();
  return m;
}

JetTensor make_vector(const std::vector<Jet3>& v) {
  if (v.empty()) throw ContractViolation("empty vector");
  JetTensor t(v.front().dim(), "u");
  for (std::size_t a = 0; a < v.size(); ++a) t[a] = v[a];
  return t;
}

JetTensor make_endomorphism(int dim, const std::vector<Jet3>& row_major) {
  if (static_cast<int>(row_major.size()) != dim * dim) throw ContractViolation("endomorphism needs n*n entries");
  JetTensor t(dim, "ud");
  for (std::size_t k = 0; k < row_major.size(); ++k) t[k] = row_major[k];
  return t;
}

// ---------------------------------------------------------------- LocalGeometry

namespace {

Jet3 determinant(const JetTensor& g) {
  const int n = g.dim();
  if (n == 1) return g.at({0, 0});
  if (n == 2) return g.at({0, 0}) * g.at({1, 1}) - g.at({0, 1}) * g.at({1, 0});
  return g.at({0, 0}) * (g.at({1, 1}) * g.at({2, 2}) - g.at({1, 2}) * g.at({2, 1})) -
         g.at({0, 1}) * (g.at({1, 0}) * g.at({2, 2}) - g.at({1, 2}) * g.at({2, 0})) +
         g.at({0, 2}) * (g.at({1, 0}) * g.at({2, 1}) - g.at({1, 1}) * g.at({2, 0}));
}

JetTensor inverse(const JetTensor& g, const Jet3& det) {
  const int n = g.dim();
  JetTensor inv(n, "uu");
  const Jet3 r = reciprocal(det);
  if (n == 1) {
    inv.at({0, 0}) = r;
  } else if (n == 2) {
    inv.at({0, 0}) = g.at({1, 1}) * r;
    inv.at({1, 1}) = g.at({0, 0}) * r;
    inv.at({0, 1}) = -g.at({0, 1}) * r;
    inv.at({1, 0}) = -g.at({1, 0}) * r;
  } else {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
        inv.at({i, j}) = (g.at({i1, j1}) * g.at({i2, j2}) - g.at({i1, j2}) * g.at({i2, j1})) * r;
      }
    }
  }
  return inv;
}

}  // namespace

LocalGeometry::LocalGeometry(const ChartManifold& m, const ChartPoint& p)
    : chart_(&m.charts.at(static_cast<std::size_t>(p.chart))), dim_(chart_->dim()), point_(p) {
  if (p.coords.size() != dim_) throw ContractViolation("point dimension does not match chart");
  if (static_cast<int>(chart_->metric.size()) != dim_ * dim_) throw ContractViolation("chart metric must have n*n entries");
  for (int i = 0; i < dim_; ++i) x_[i] = Jet3::variable(dim_, i, p.coords(i));

  g_ = JetTensor(dim_, "dd");
  for (int k = 0; k < dim_ * dim_; ++k) g_[static_cast<std::size_t>(k)] = eval(chart_->metric[static_cast<std::size_t>(k)]);

  const Mat gv = g_.matrix_value();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gv + gv.transpose()), Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 1e-10)) {
    throw SingularMetric("metric is singular or indefinite at chart " + chart_->name + " point (" +
                         std::to_string(p.coords(0)) + (dim_ > 1 ? ", " + std::to_string(p.coords(1)) : "") + ")");
  }
  const Jet3 det = determinant(g_);
  ginv_ = inverse(g_, det);
  sqrtg_ = sqrt(det);

  std::vector<JetTensor> dg;
  for (int l = 0; l < dim_; ++l) {
    JetTensor t(dim_, "dd");
    for (std::size_t k = 0; k < g_.size(); ++k) t[k] = g_[k].derivative(l);
    dg.push_back(std::move(t));
  }
  gamma_ = JetTensor(dim_, "udd");
  for (int k = 0; k < dim_; ++k) {
    for (int i = 0; i < dim_; ++i) {
      for (int j = i; j < dim_; ++j) {
        Jet3 s = Jet3::constant(dim_, 0.0);
        for (int l = 0; l < dim_; ++l)
          s += ginv_.at({k, l}) * (dg[i].at({j, l}) + dg[j].at({i, l}) - dg[l].at({i, j}));
        s *= 0.5;
        gamma_.at({k, i, j}) = s;
        gamma_.at({k, j, i}) = s;
      }
    }
  }

  riem_ = JetTensor(dim_, "uddd");
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c)
        for (int d = 0; d < dim_; ++d) {
          Jet3 s = gamma_.at({a, d, b}).derivative(c) - gamma_.at({a, c, b}).derivative(d);
          for (int e = 0; e < dim_; ++e)
            s += gamma_.at({a, c, e}) * gamma_.at({e, d, b}) - gamma_.at({a, d, e}) * gamma_.at({e, c, b});
          riem_.at({a, b, c, d}) = s;
        }

  frame_ = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    Vec v = Vec::Unit(dim_, i);
    for (int j = 0; j < i; ++j) v -= (frame_.col(j).dot(gv * v)) * frame_.col(j);
    frame_.col(i) = v / std::sqrt(v.dot(gv * v));
  }
}

Jet3 LocalGeometry::eval(const ChartFunction& f) const {
  try {
    Jet3 r = f(coordinate_jets());
    if (r.dim() != dim_) throw ContractViolation("chart function returned a jet of the wrong dimension");
    return r;
  } catch (const DomainError& e) {
    std::string where = "(";
    for (int i = 0; i < dim_; ++i) where += (i ? ", " : "") + std::to_string(point_.coords(i));
    throw DomainError(e.primitive(), e.argument(), where + ")");
  }
}

double LocalGeometry::inner(const Vec& X, const Vec& Y) const { return X.dot(metric() * Y); }

double LocalGeometry::norm(const Vec& X) const { return std::sqrt(std::max(0.0, inner(X, X))); }

Vec LocalGeometry::riemann_apply(const Vec& X, const Vec& Y, const Vec& Z) const {
  Vec out = Vec::Zero(dim_);
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c)
        for (int d = 0; d < dim_; ++d) out(a) += riem_.at({a, b, c, d}).value() * Z(b) * X(c) * Y(d);
  return out;
}

double LocalGeometry::ricci(const Vec& X, const Vec& Y) const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += inner(riemann_apply(X, frame_.col(i), frame_.col(i)), Y);
  return s;
}

double LocalGeometry::ric_A(const Mat& A, const Vec& X, const Vec& Y, const Mat* frame) const {
  const Mat& E = frame ? *frame : frame_;
  double s = 0.0;
  for (int i = 0; i < E.cols(); ++i) s += inner(riemann_apply(X, A * E.col(i), E.col(i)), Y);
  return s;
}

Mat LocalGeometry::ric_A_matrix(const Mat& A, const Mat* frame) const {
  Mat out(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) out(i, j) = ric_A(A, Vec::Unit(dim_, i), Vec::Unit(dim_, j), frame);
  return out;
}

JetTensor LocalGeometry::covariant_derivative(const JetTensor& t) const {
  const int r = t.rank();
  JetTensor out(dim_, t.variance() + "d");
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    const std::vector<int> idx = t.multi_index(flat);
    for (int c = 0; c < dim_; ++c) {
      Jet3 s = t[flat].derivative(c);
      for (int k = 0; k < r; ++k) {
        std::vector<int> j = idx;
        for (int e = 0; e < dim_; ++e) {
          j[static_cast<std::size_t>(k)] = e;
          std::size_t fe = 0;
          for (int q : j) fe = fe * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(q);
          if (t.variance()[static_cast<std::size_t>(k)] == 'u')
            s += gamma_.at({idx[static_cast<std::size_t>(k)], c, e}) * t[fe];
          else
            s -= gamma_.at({e, c, idx[static_cast<std::size_t>(k)]}) * t[fe];
        }
      }
      out[flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)] = s;
    }
  }
  return out;
}

JetTensor LocalGeometry::gradient(const Jet3& u) const {
  JetTensor v(dim_, "u");
  for (int a = 0; a < dim_; ++a) {
    Jet3 s = Jet3::constant(dim_, 0.0);
    for (int b = 0; b < dim_; ++b) s += ginv_.at({a, b}) * u.derivative(b);
    v.at({a}) = s;
  }
  return v;
}

Jet3 LocalGeometry::divergence(const JetTensor& v) const {
  if (v.variance() != "u") throw ContractViolation("divergence needs a vector field");
  Jet3 s = Jet3::constant(dim_, 0.0);
  for (int a = 0; a < dim_; ++a) {
    s += v.at({a}).derivative(a);
    for (int b = 0; b < dim_; ++b) s += gamma_.at({a, a, b}) * v.at({b});
  }
  return s;
}

JetTensor LocalGeometry::metric_trace_last_two(const JetTensor& t) const {
  const int r = t.rank();
  if (r < 2 || t.variance().substr(static_cast<std::size_t>(r - 2)) != "dd")
    throw ContractViolation("metric trace needs two trailing covariant indices");
  JetTensor out(dim_, t.variance().substr(0, static_cast<std::size_t>(r - 2)));
  const std::size_t n = static_cast<std::size_t>(dim_);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    Jet3 s = Jet3::constant(dim_, 0.0);
    for (int c = 0; c < dim_; ++c)
      for (int d = 0; d < dim_; ++d)
        s += ginv_.at({c, d}) * t[(flat * n + static_cast<std::size_t>(c)) * n + static_cast<std::size_t>(d)];
    out[flat] = s;
  }
  return out;
}

Jet3 LocalGeometry::inner_jet(const JetTensor& X, const JetTensor& Y) const {
  Jet3 s = Jet3::constant(dim_, 0.0);
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) s += g_.at({a, b}) * X.at({a}) * Y.at({b});
  return s;
}

Mat LocalGeometry::to_frame(const Mat& mixed) const { return frame_.inverse() * mixed * frame_; }

// ---------------------------------------------------------------- jet bundles

Mat EndomorphismJets::nabla(const Vec& X) const {
  const int n = A.dim();
  Mat out = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out(a, b) += dA.at({a, b, c}).value() * X(c);
  return out;
}

Vec EndomorphismJets::T_apply(const Vec& X, const Vec& Y) const {
  const int n = A.dim();
  Vec out = Vec::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out(a) += T.at({a, b, c}).value() * X(b) * Y(c);
  return out;
}

namespace {
Vec apply_rank4(const JetTensor& t, const Vec& X, const Vec& Y, const Vec& Z) {
  const int n = t.dim();
  Vec out = Vec::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) out(a) += t.at({a, b, c, d}).value() * X(b) * Y(c) * Z(d);
  return out;
}
}  // namespace

Vec EndomorphismJets::d2A_apply(const Vec& X, const Vec& Y, const Vec& Z) const { return apply_rank4(d2A, X, Y, Z); }
Vec EndomorphismJets::dT_apply(const Vec& X, const Vec& Y, const Vec& Z) const { return apply_rank4(dT, X, Y, Z); }

EndomorphismJets endomorphism_jets(const LocalGeometry& geo, const JetTensor& A) {
  const int n = geo.dim();
  if (A.variance() != "ud" || A.dim() != n) throw ContractViolation("endomorphism jets need a (1,1) tensor");
  EndomorphismJets e;
  e.A = A;
  e.dA = geo.covariant_derivative(A);
  e.d2A = geo.covariant_derivative(e.dA);
  e.T = JetTensor(n, "udd");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) e.T.at({a, b, c}) = e.dA.at({a, c, b}) - e.dA.at({a, b, c});
  e.dT = geo.covariant_derivative(e.T);
  e.divA = geo.metric_trace_last_two(e.dA);
  e.lapA = geo.metric_trace_last_two(e.d2A);
  e.trace = Jet3::constant(n, 0.0);
  for (int a = 0; a < n; ++a) e.trace += A.at({a, a});
  return e;
}

EndomorphismJets endomorphism_jets(const LocalGeometry& geo, const EndomorphismField& A) {
  const int n = geo.dim();
  if (static_cast<int>(A.entries.size()) != n * n) throw ContractViolation("field " + A.name + " needs n*n entries");
  std::vector<Jet3> v;
  for (const auto& f : A.entries) v.push_back(geo.eval(f));
  return endomorphism_jets(geo, make_endomorphism(n, v));
}

ScalarJets scalar_jets(const LocalGeometry& geo, const Jet3& u) {
  ScalarJets s;
  s.u = u;
  s.grad = geo.gradient(u);
  s.hess = geo.covariant_derivative(s.grad);
  s.laplacian = Jet3::constant(geo.dim(), 0.0);
  for (int a = 0; a < geo.dim(); ++a) s.laplacian += s.hess.at({a, a});
  return s;
}

ScalarJets scalar_jets(const LocalGeometry& geo, const ScalarField& u) { return scalar_jets(geo, geo.eval(u.u)); }

// ---------------------------------------------------------------- spec-level wrappers

std::vector<Mat> christoffel(const ChartManifold& m, const ChartPoint& p) {
  const LocalGeometry geo(m, p);
  const int n = geo.dim();
  std::vector<Mat> out(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(k)](i, j) = geo.gamma().at({k, i, j}).value();
  return out;
}

std::vector<double> riemann(const ChartManifold& m, const ChartPoint& p) {
  const LocalGeometry geo(m, p);
  std::vector<double> out;
  for (std::size_t k = 0; k < geo.riemann().size(); ++k) out.push_back(geo.riemann()[k].value());
  return out;
}

double sectional_curvature(const ChartManifold& m, const ChartPoint& p, const Vec& X, const Vec& Y) {
  const LocalGeometry geo(m, p);
  const double area2 = geo.inner(X, X) * geo.inner(Y, Y) - std::pow(geo.inner(X, Y), 2);
  if (area2 <= 1e-300) throw ContractViolation("sectional curvature needs independent vectors");
  return geo.inner(geo.riemann_apply(X, Y, Y), X) / area2;
}

Mat ric_A(const ChartManifold& m, const EndomorphismField& A, const ChartPoint& p, const Mat* frame) {
  const LocalGeometry geo(m, p);
  const Mat a = endomorphism_jets(geo, A).value();
  return geo.ric_A_matrix(a, frame);
}

HessianResult hessian(const ChartManifold& m, const ScalarField& u, const ChartPoint& p) {
  const LocalGeometry geo(m, p);
  const ScalarJets s = scalar_jets(geo, u);
  return {s.gradient_value(), geo.metric() * s.hessian_value(), s.laplacian.value()};
}

double op_L_A(const LocalGeometry& geo, const EndomorphismJets& A, const ScalarJets& u) {
  const int n = geo.dim();
  JetTensor flux(n, "u");
  for (int a = 0; a < n; ++a) {
    Jet3 s = Jet3::constant(n, 0.0);
    for (int b = 0; b < n; ++b) s += A.A.at({a, b}) * u.grad.at({b});
    flux.at({a}) = s;
  }
  return geo.divergence(flux).value();
}

double op_Delta_A(const EndomorphismJets& A, const ScalarJets& u) {
  return (u.hessian_value() * A.value()).trace();
}

double op_L_A(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u, const ChartPoint& p) {
  const LocalGeometry geo(m, p);
  return op_L_A(geo, endomorphism_jets(geo, A), scalar_jets(geo, u));
}

double op_Delta_A(const ChartManifold& m, const EndomorphismField& A, const ScalarField& u, const ChartPoint& p) {
  const LocalGeometry geo(m, p);
  return op_Delta_A(endomorphism_jets(geo, A), scalar_jets(geo, u));
}

TensorDerivatives tensor_derivatives(const ChartManifold& m, const EndomorphismField& A, const ChartPoint& p) {
  const LocalGeometry geo(m, p);
  const EndomorphismJets e = endomorphism_jets(geo, A);
  const int n = geo.dim();
  TensorDerivatives out;
  for (int c = 0; c < n; ++c) out.nabla_A.push_back(e.nabla(Vec::Unit(n, c)));
  out.nabla2_A.assign(static_cast<std::size_t>(n), std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(n, n)));
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          out.nabla2_A[static_cast<std::size_t>(d)][static_cast<std::size_t>(c)](a, b) = e.d2A.at({a, b, c, d}).value();
  out.laplacian_A = e.lapA.matrix_value();
  out.div_A = e.divA.vector_value();
  out.T.assign(static_cast<std::size_t>(n), std::vector<Vec>(static_cast<std::size_t>(n)));
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      out.T[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] = e.T_apply(Vec::Unit(n, b), Vec::Unit(n, c));
  return out;
}

double metric_min_eigenvalue(const ChartManifold& m, const ChartPoint& p) {
  const LocalGeometry geo(m, p);
  Eigen::SelfAdjointEigenSolver<Mat> es(geo.metric(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {
std::vector<Jet3> eval_all(const std::vector<ChartFunction>& fs, std::span<const Jet3> x) {
  std::vector<Jet3> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(f(x));
  return out;
}
}  // namespace

std::optional<double> overlap_metric_defect(const ChartManifold& m, const ChartPoint& p, int other) {
  const Chart& c0 = m.charts.at(static_cast<std::size_t>(p.chart));
  const Chart& c1 = m.charts.at(static_cast<std::size_t>(other));
  if (!c0.embedded() || c1.locate.empty()) throw ContractViolation("overlap check needs an embedding and an inverse chart map");
  const LocalGeometry geo(m, p);
  const std::vector<Jet3> ambient = eval_all(c0.embedding, geo.coordinate_jets());
  const std::vector<Jet3> q = eval_all(c1.locate, ambient);
  const int n = geo.dim();
  Vec qv(n);
  Mat J(n, n);
  for (int i = 0; i < n; ++i) {
    qv(i) = q[static_cast<std::size_t>(i)].value();
    const Interval iv = c1.box[static_cast<std::size_t>(i)];
    if (c1.periodic[static_cast<std::size_t>(i)]) {
      qv(i) = iv.lo + std::fmod(std::fmod(qv(i) - iv.lo, iv.width()) + iv.width(), iv.width());
    } else if (qv(i) < iv.lo + 0.05 * iv.width() || qv(i) > iv.hi - 0.05 * iv.width()) {
      return std::nullopt;
    }
    for (int j = 0; j < n; ++j) J(i, j) = q[static_cast<std::size_t>(i)].d(j);
  }
  const LocalGeometry geo1(m, ChartPoint{other, qv});
  const Mat g0 = geo.metric();
  const Mat pulled = J.transpose() * geo1.metric() * J;
  return (g0 - pulled).norm() / std::max(g0.norm(), 1e-300);
}

Vec embed(const Chart& c, const Vec& p) {
  if (!c.embedded()) throw ContractViolation("chart " + c.name + " has no embedding");
  Vec out(static_cast<Eigen::Index>(c.embedding.size()));
  const std::vector<double> pv(p.data(), p.data() + p.size());
  for (std::size_t k = 0; k < c.embedding.size(); ++k) out(static_cast<Eigen::Index>(k)) = value_at(c.embedding[k], pv);
  return out;
}

Mat embedding_jacobian(const Chart& c, const Vec& p) {
  if (!c.embedded()) throw ContractViolation("chart " + c.name + " has no embedding");
  const int n = c.dim();
  const int m = static_cast<int>(c.embedding.size());
  Mat J(m, n);
  const std::vector<double> pv(p.data(), p.data() + p.size());
  for (int i = 0; i < m; ++i) {
    if (!c.embedding_jacobian.empty()) {
      for (int j = 0; j < n; ++j) J(i, j) = value_at(c.embedding_jacobian[static_cast<std::size_t>(i * n + j)], pv);
    } else {
      const Jet3 e = jet_eval(c.embedding[static_cast<std::size_t>(i)], pv);
      for (int j = 0; j < n; ++j) J(i, j) = e.d(j);
    }
  }
  return J;
}

Vec locate(const Chart& c, const Vec& ambient) {
  if (c.locate.empty()) throw ContractViolation("chart " + c.name + " has no inverse map");
  const std::vector<double> av(ambient.data(), ambient.data() + ambient.size());
  Vec out(c.dim());
  for (int i = 0; i < c.dim(); ++i) {
    double v = value_at(c.locate[static_cast<std::size_t>(i)], av);
    const Interval iv = c.box[static_cast<std::size_t>(i)];
    if (c.periodic[static_cast<std::size_t>(i)]) v = iv.lo + std::fmod(std::fmod(v - iv.lo, iv.width()) + iv.width(), iv.width());
    out(i) = v;
  }
  return out;
}

}  // namespace reilly
