#pragma once

// Truncated multivariate Taylor arithmetic ("jets") of total order 3.
//
// A Jet3 holds the Taylor coefficients c_alpha of a scalar function around an
// expansion point, for every multi-index alpha with |alpha| <= 3, so that
//
//   f(p + h) = sum_alpha c_alpha h^alpha + O(|h|^4),   d^alpha f(p) = alpha! c_alpha.
//
// Coefficient layout (frozen): graded-lexicographic.  Multi-indices are grouped by
// total order 0, 1, 2, 3; inside one order they are listed with the exponent of
// x0 decreasing first, then x1, and so on.  For dim = 2 this is
//
//   1, x, y, x^2, xy, y^2, x^3, x^2y, xy^2, y^3.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace reilly {

inline constexpr int kJetOrder = 3;
inline constexpr int kMaxJetDim = 3;
inline constexpr int kMaxJetCoefficients = 20;  // C(kMaxJetDim + 3, 3)

/// C(dim + 3, 3): number of multi-indices of total order <= 3 in `dim` variables.
constexpr int jet_coefficient_count(int dim) {
  return (dim + 1) * (dim + 2) * (dim + 3) / 6;
}

using MultiIndex = std::array<std::uint8_t, kMaxJetDim>;

/// Multi-index stored at position `k` of the layout for `dim` variables.
MultiIndex jet_multi_index(int dim, int k);
/// Inverse of jet_multi_index; -1 when the total order exceeds 3.
int jet_index_of(int dim, const MultiIndex& alpha);
int jet_total_order(const MultiIndex& alpha);

class Jet3 {
 public:
  Jet3() = default;

  static Jet3 constant(int dim, double value);
  /// The coordinate function x_axis expanded at x_axis = at.
  static Jet3 variable(int dim, int axis, double at);
  static Jet3 from_coefficients(int dim, std::span<const double> coeffs);

  int dim() const noexcept { return dim_; }
  int size() const noexcept { return jet_coefficient_count(dim_); }
  double value() const noexcept { return c_[0]; }
  double coefficient(int k) const { return c_.at(static_cast<std::size_t>(k)); }
  std::span<const double> coefficients() const noexcept {
    return {c_.data(), static_cast<std::size_t>(size())};
  }

  /// Partial derivative d^alpha f at the expansion point (alpha! * c_alpha).
  double partial(const MultiIndex& alpha) const;
  double d(int i) const;
  double d(int i, int j) const;
  double d(int i, int j, int k) const;

  /// Jet of d f / d x_axis.  Exact through order 2; the order-3 coefficients of
  /// the result are unknown and set to zero.
  Jet3 derivative(int axis) const;

  Jet3& operator+=(const Jet3& o);
  Jet3& operator-=(const Jet3& o);
  Jet3& operator*=(const Jet3& o);
  Jet3& operator/=(const Jet3& o);
  Jet3& operator+=(double s) noexcept;
  Jet3& operator-=(double s) noexcept;
  Jet3& operator*=(double s) noexcept;
  Jet3& operator/=(double s);

  friend Jet3 operator-(Jet3 a) noexcept;

 private:
  std::array<double, kMaxJetCoefficients> c_{};
  int dim_ = 1;
};

Jet3 operator+(Jet3 a, const Jet3& b);
Jet3 operator-(Jet3 a, const Jet3& b);
Jet3 operator*(const Jet3& a, const Jet3& b);
Jet3 operator/(const Jet3& a, const Jet3& b);
Jet3 operator+(Jet3 a, double s);
Jet3 operator+(double s, Jet3 a);
Jet3 operator-(Jet3 a, double s);
Jet3 operator-(double s, const Jet3& a);
Jet3 operator*(Jet3 a, double s);
Jet3 operator*(double s, Jet3 a);
Jet3 operator/(Jet3 a, double s);
Jet3 operator/(double s, const Jet3& a);

/// Division by a jet whose value is below this magnitude is a DomainError.
inline constexpr double kJetDivisionFloor = 1e-13;

Jet3 reciprocal(const Jet3& a);
Jet3 sin(const Jet3& a);
Jet3 cos(const Jet3& a);
Jet3 exp(const Jet3& a);
Jet3 log(const Jet3& a);
Jet3 sqrt(const Jet3& a);
Jet3 atan2(const Jet3& y, const Jet3& x);
Jet3 acos(const Jet3& a);
Jet3 pow(const Jet3& a, int exponent);
Jet3 pow(const Jet3& a, double exponent);
Jet3 square(const Jet3& a);

/// Composes a univariate jet `outer` (dim 1, expanded at inner.value()) with a
/// multivariate `inner`: returns the order-3 expansion of outer(inner(x)).
Jet3 compose(const Jet3& outer, const Jet3& inner);

/// A function on a chart, written in the primitive vocabulary above.  It receives
/// the coordinate jets and returns the jet of its value.
using ChartFunction = std::function<Jet3(std::span<const Jet3>)>;

ChartFunction constant_function(double value);
ChartFunction coordinate_function(int axis);

/// Order-3 Taylor expansion of f at p.  DomainErrors raised inside f are rethrown
/// with the evaluation point attached.
Jet3 jet_eval(const ChartFunction& f, std::span<const double> p);
double value_at(const ChartFunction& f, std::span<const double> p);

}  // namespace reilly
