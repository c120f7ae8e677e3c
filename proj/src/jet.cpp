#include "reilly/jet.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "reilly/errors.hpp"

namespace reilly {

namespace {

std::string describe_domain_error(const std::string& primitive, double argument,
                                  const std::string& where) {
  std::ostringstream os;
  os.precision(17);
  os << "jet primitive '" << primitive << "' is singular at argument " << argument;
  if (!where.empty()) os << " (point " << where << ")";
  return os.str();
}

struct ProductTerm {
  std::uint8_t a, b, out;
};

struct DerivativeTerm {
  std::uint8_t from, to;
  double factor;
};

struct Layout {
  int dim = 0;
  int count = 0;
  std::vector<MultiIndex> alphas;
  std::vector<ProductTerm> products;
  std::array<std::vector<DerivativeTerm>, kMaxJetDim> derivatives;
};

Layout build_layout(int dim) {
  Layout L;
  L.dim = dim;
  for (int order = 0; order <= kJetOrder; ++order) {
    // Exponent of x0 decreasing first, then x1, ... (lex-descending inside an order).
    if (dim == 1) {
      L.alphas.push_back({static_cast<std::uint8_t>(order), 0, 0});
      continue;
    }
    for (int a0 = order; a0 >= 0; --a0) {
      if (dim == 2) {
        L.alphas.push_back({static_cast<std::uint8_t>(a0), static_cast<std::uint8_t>(order - a0), 0});
        continue;
      }
      for (int a1 = order - a0; a1 >= 0; --a1) {
        L.alphas.push_back({static_cast<std::uint8_t>(a0), static_cast<std::uint8_t>(a1),
                            static_cast<std::uint8_t>(order - a0 - a1)});
      }
    }
  }
  L.count = static_cast<int>(L.alphas.size());
  auto find = [&](const MultiIndex& m) {
    for (int k = 0; k < L.count; ++k)
      if (L.alphas[k] == m) return k;
    return -1;
  };
  // Pairs i <= j only; operator* adds a_i b_j + a_j b_i so the product is exactly commutative.
  for (int i = 0; i < L.count; ++i) {
    for (int j = i; j < L.count; ++j) {
      MultiIndex s{};
      for (int d = 0; d < kMaxJetDim; ++d) s[d] = L.alphas[i][d] + L.alphas[j][d];
      if (jet_total_order(s) > kJetOrder) continue;
      L.products.push_back({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                            static_cast<std::uint8_t>(find(s))});
    }
  }
  for (int axis = 0; axis < dim; ++axis) {
    for (int k = 0; k < L.count; ++k) {
      MultiIndex a = L.alphas[k];
      if (a[axis] == 0) continue;
      const double factor = a[axis];
      a[axis] -= 1;
      L.derivatives[axis].push_back({static_cast<std::uint8_t>(k), static_cast<std::uint8_t>(find(a)), factor});
    }
  }
  return L;
}

const Layout& layout(int dim) {
  static const std::array<Layout, kMaxJetDim> layouts = {build_layout(1), build_layout(2), build_layout(3)};
  if (dim < 1 || dim > kMaxJetDim) throw ContractViolation("jet dimension must be 1..3");
  return layouts[dim - 1];
}

void require_same_dim(const Jet3& a, const Jet3& b) {
  if (a.dim() != b.dim()) throw ContractViolation("jet dimension mismatch");
}

double factorial_weight(const MultiIndex& alpha) {
  static constexpr double fact[] = {1.0, 1.0, 2.0, 6.0};
  double w = 1.0;
  for (auto e : alpha) w *= fact[e];
  return w;
}

// f(a) expanded to order 3 given f(a0), f'(a0), f''(a0), f'''(a0).
Jet3 apply_univariate(const Jet3& a, double f0, double f1, double f2, double f3) {
  Jet3 h = a;
  h -= a.value();
  const Jet3 h2 = h * h;
  const Jet3 h3 = h2 * h;
  Jet3 r = h * f1;
  r += h2 * (f2 / 2.0);
  r += h3 * (f3 / 6.0);
  r += f0;
  return r;
}

}  // namespace

DomainError::DomainError(std::string primitive, double argument, std::string where)
    : std::runtime_error(describe_domain_error(primitive, argument, where)),
      primitive_(std::move(primitive)),
      argument_(argument),
      where_(std::move(where)) {}

int jet_total_order(const MultiIndex& alpha) {
  int s = 0;
  for (auto e : alpha) s += e;
  return s;
}

MultiIndex jet_multi_index(int dim, int k) {
  const Layout& L = layout(dim);
  if (k < 0 || k >= L.count) throw ContractViolation("jet coefficient index out of range");
  return L.alphas[k];
}

int jet_index_of(int dim, const MultiIndex& alpha) {
  const Layout& L = layout(dim);
  for (int d = dim; d < kMaxJetDim; ++d)
    if (alpha[d] != 0) throw ContractViolation("multi-index uses an axis beyond the jet dimension");
  if (jet_total_order(alpha) > kJetOrder) return -1;
  for (int k = 0; k < L.count; ++k)
    if (L.alphas[k] == alpha) return k;
  return -1;
}

Jet3 Jet3::constant(int dim, double value) {
  layout(dim);
  Jet3 j;
  j.dim_ = dim;
  j.c_[0] = value;
  return j;
}

Jet3 Jet3::variable(int dim, int axis, double at) {
  if (axis < 0 || axis >= dim) throw ContractViolation("jet variable axis out of range");
  Jet3 j = constant(dim, at);
  j.c_[1 + axis] = 1.0;  // order-1 block is e_0, e_1, ... in that order
  return j;
}

Jet3 Jet3::from_coefficients(int dim, std::span<const double> coeffs) {
  Jet3 j = constant(dim, 0.0);
  if (static_cast<int>(coeffs.size()) != j.size())
    throw ContractViolation("coefficient count must equal C(dim+3,3)");
  for (std::size_t k = 0; k < coeffs.size(); ++k) j.c_[k] = coeffs[k];
  return j;
}

double Jet3::partial(const MultiIndex& alpha) const {
  const int k = jet_index_of(dim_, alpha);
  if (k < 0) throw ContractViolation("partial derivative order exceeds 3");
  return factorial_weight(alpha) * c_[k];
}

double Jet3::d(int i) const {
  MultiIndex a{};
  a.at(i) += 1;
  return partial(a);
}

double Jet3::d(int i, int j) const {
  MultiIndex a{};
  a.at(i) += 1;
  a.at(j) += 1;
  return partial(a);
}

double Jet3::d(int i, int j, int k) const {
  MultiIndex a{};
  a.at(i) += 1;
  a.at(j) += 1;
  a.at(k) += 1;
  return partial(a);
}

Jet3 Jet3::derivative(int axis) const {
  if (axis < 0 || axis >= dim_) throw ContractViolation("derivative axis out of range");
  Jet3 r = constant(dim_, 0.0);
  for (const auto& t : layout(dim_).derivatives[axis]) r.c_[t.to] = t.factor * c_[t.from];
  return r;
}

Jet3& Jet3::operator+=(const Jet3& o) {
  require_same_dim(*this, o);
  for (int k = 0; k < size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet3& Jet3::operator-=(const Jet3& o) {
  require_same_dim(*this, o);
  for (int k = 0; k < size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet3& Jet3::operator*=(const Jet3& o) {
  *this = *this * o;
  return *this;
}

Jet3& Jet3::operator/=(const Jet3& o) {
  *this = *this * reciprocal(o);
  return *this;
}

Jet3& Jet3::operator+=(double s) noexcept {
  c_[0] += s;
  return *this;
}

Jet3& Jet3::operator-=(double s) noexcept {
  c_[0] -= s;
  return *this;
}

Jet3& Jet3::operator*=(double s) noexcept {
  for (int k = 0; k < size(); ++k) c_[k] *= s;
  return *this;
}

Jet3& Jet3::operator/=(double s) {
  if (std::abs(s) < kJetDivisionFloor) throw DomainError("div", s);
  for (int k = 0; k < size(); ++k) c_[k] /= s;
  return *this;
}

Jet3 operator-(Jet3 a) noexcept {
  for (int k = 0; k < a.size(); ++k) a.c_[k] = -a.c_[k];
  return a;
}

Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }

Jet3 operator*(const Jet3& a, const Jet3& b) {
  require_same_dim(a, b);
  std::array<double, kMaxJetCoefficients> out{};
  const auto ac = a.coefficients();
  const auto bc = b.coefficients();
  for (const auto& t : layout(a.dim()).products)
    out[t.out] += t.a == t.b ? ac[t.a] * bc[t.b] : ac[t.a] * bc[t.b] + ac[t.b] * bc[t.a];
  return Jet3::from_coefficients(a.dim(), std::span<const double>(out.data(), ac.size()));
}

Jet3 operator/(const Jet3& a, const Jet3& b) { return a * reciprocal(b); }
Jet3 operator+(Jet3 a, double s) { return a += s; }
Jet3 operator+(double s, Jet3 a) { return a += s; }
Jet3 operator-(Jet3 a, double s) { return a -= s; }
Jet3 operator-(double s, const Jet3& a) { return (-a) + s; }
Jet3 operator*(Jet3 a, double s) { return a *= s; }
Jet3 operator*(double s, Jet3 a) { return a *= s; }
Jet3 operator/(Jet3 a, double s) { return a /= s; }
Jet3 operator/(double s, const Jet3& a) { return reciprocal(a) * s; }

Jet3 reciprocal(const Jet3& a) {
  const double x = a.value();
  if (std::abs(x) < kJetDivisionFloor) throw DomainError("div", x);
  const double r = 1.0 / x;
  return apply_univariate(a, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

Jet3 sin(const Jet3& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return apply_univariate(a, s, c, -s, -c);
}

Jet3 cos(const Jet3& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return apply_univariate(a, c, -s, -c, s);
}

Jet3 exp(const Jet3& a) {
  const double e = std::exp(a.value());
  return apply_univariate(a, e, e, e, e);
}

Jet3 log(const Jet3& a) {
  const double x = a.value();
  if (!(x > kJetDivisionFloor)) throw DomainError("log", x);
  const double r = 1.0 / x;
  return apply_univariate(a, std::log(x), r, -r * r, 2.0 * r * r * r);
}

Jet3 sqrt(const Jet3& a) {
  const double x = a.value();
  if (!(x > kJetDivisionFloor)) throw DomainError("sqrt", x);
  const double s = std::sqrt(x);
  return apply_univariate(a, s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
}

Jet3 pow(const Jet3& a, double p) {
  const double x = a.value();
  if (!(x > kJetDivisionFloor)) throw DomainError("pow", x);
  const double f0 = std::pow(x, p);
  return apply_univariate(a, f0, p * f0 / x, p * (p - 1) * f0 / (x * x), p * (p - 1) * (p - 2) * f0 / (x * x * x));
}

Jet3 pow(const Jet3& a, int n) {
  if (n < 0) return reciprocal(pow(a, -n));
  Jet3 r = Jet3::constant(a.dim(), 1.0);
  Jet3 base = a;
  while (n > 0) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return r;
}

Jet3 square(const Jet3& a) { return a * a; }

Jet3 atan2(const Jet3& y, const Jet3& x) {
  require_same_dim(x, y);
  const double x0 = x.value(), y0 = y.value();
  const double r2 = x0 * x0 + y0 * y0;
  if (r2 < kJetDivisionFloor * kJetDivisionFloor) throw DomainError("atan2", std::sqrt(r2));
  // Angle increment relative to (x0, y0): tan(dtheta) = cross / dot, and dot > 0 nearby.
  const Jet3 t = (y * x0 - x * y0) / (x * x0 + y * y0);
  // atan about 0 through order 3: t - t^3/3.
  return t - t * t * t / 3.0 + std::atan2(y0, x0);
}

Jet3 acos(const Jet3& a) {
  const double x = a.value();
  const double w = 1.0 - x * x;
  if (!(w > kJetDivisionFloor)) throw DomainError("acos", x);
  const double s = std::sqrt(w);
  return apply_univariate(a, std::acos(x), -1.0 / s, -x / (s * w), -(2.0 * x * x + 1.0) / (s * w * w));
}

Jet3 compose(const Jet3& outer, const Jet3& inner) {
  if (outer.dim() != 1) throw ContractViolation("compose: outer jet must be univariate");
  return apply_univariate(inner, outer.value(), outer.d(0), outer.d(0, 0), outer.d(0, 0, 0));
}

ChartFunction constant_function(double value) {
  return [value](std::span<const Jet3> x) { return Jet3::constant(x.front().dim(), value); };
}

ChartFunction coordinate_function(int axis) {
  return [axis](std::span<const Jet3> x) { return x[static_cast<std::size_t>(axis)]; };
}

Jet3 jet_eval(const ChartFunction& f, std::span<const double> p) {
  const int dim = static_cast<int>(p.size());
  if (dim < 1 || dim > kMaxJetDim) throw ContractViolation("jet_eval: point dimension must be 1..3");
  std::array<Jet3, kMaxJetDim> vars;
  for (int i = 0; i < dim; ++i) vars[i] = Jet3::variable(dim, i, p[i]);
  try {
    Jet3 r = f(std::span<const Jet3>(vars.data(), static_cast<std::size_t>(dim)));
    if (r.dim() != dim) throw ContractViolation("chart function returned a jet of the wrong dimension");
    return r;
  } catch (const DomainError& e) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (int i = 0; i < dim; ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    throw DomainError(e.primitive(), e.argument(), os.str());
  }
}

double value_at(const ChartFunction& f, std::span<const double> p) { return jet_eval(f, p).value(); }

}  // namespace reilly
