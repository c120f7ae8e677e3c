#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "reilly/errors.hpp"
#include "reilly/jet.hpp"
#include "reilly/sampling.hpp"

using namespace reilly;

namespace {

// 6th-order central differences for first/second/third derivatives of a univariate f.
double fd1(const std::function<double(double)>& f, double x, double h) {
  return (-f(x - 3 * h) + 9 * f(x - 2 * h) - 45 * f(x - h) + 45 * f(x + h) - 9 * f(x + 2 * h) + f(x + 3 * h)) /
         (60 * h);
}
double fd2(const std::function<double(double)>& f, double x, double h) {
  return (2 * f(x - 3 * h) - 27 * f(x - 2 * h) + 270 * f(x - h) - 490 * f(x) + 270 * f(x + h) - 27 * f(x + 2 * h) +
          2 * f(x + 3 * h)) /
         (180 * h * h);
}
double fd3(const std::function<double(double)>& f, double x, double h) {
  return (-7 * f(x - 4 * h) + 72 * f(x - 3 * h) - 338 * f(x - 2 * h) + 488 * f(x - h) - 488 * f(x + h) +
          338 * f(x + 2 * h) - 72 * f(x + 3 * h) + 7 * f(x + 4 * h)) /
         (240 * h * h * h);
}

Jet3 random_jet(int dim, SeededRng& rng) {
  std::vector<double> c(static_cast<std::size_t>(jet_coefficient_count(dim)));
  for (auto& v : c) v = rng.uniform(-1, 1);
  return Jet3::from_coefficients(dim, c);
}

}  // namespace

TEST_CASE("jet layout is graded lexicographic with C(dim+3,3) coefficients") {
  CHECK(jet_coefficient_count(1) == 4);
  CHECK(jet_coefficient_count(2) == 10);
  CHECK(jet_coefficient_count(3) == 20);
  // 1, x, y, x^2, xy, y^2, x^3, x^2y, xy^2, y^3
  const std::vector<MultiIndex> expect = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {2, 0, 0}, {1, 1, 0},
                                          {0, 2, 0}, {3, 0, 0}, {2, 1, 0}, {1, 2, 0}, {0, 3, 0}};
  for (int k = 0; k < 10; ++k) CHECK(jet_multi_index(2, k) == expect[static_cast<std::size_t>(k)]);
  for (int dim = 1; dim <= 3; ++dim)
    for (int k = 0; k < jet_coefficient_count(dim); ++k) CHECK(jet_index_of(dim, jet_multi_index(dim, k)) == k);
  CHECK(jet_multi_index(3, 4) == MultiIndex{2, 0, 0});
  CHECK(jet_multi_index(3, 19) == MultiIndex{0, 0, 3});
}

TEST_CASE("jet_product examples") {
  const Jet3 x = Jet3::variable(2, 0, 0.0);
  const Jet3 one_plus_x = 1.0 + x;
  const Jet3 sq = one_plus_x * one_plus_x;
  CHECK(sq.coefficient(0) == 1.0);
  CHECK(sq.coefficient(1) == 2.0);
  CHECK(sq.coefficient(3) == 1.0);
  for (int k : {2, 4, 5, 6, 7, 8, 9}) CHECK(sq.coefficient(k) == 0.0);

  SeededRng rng(7);
  const Jet3 a = random_jet(2, rng);
  const Jet3 prod = a * Jet3::constant(2, 1.0);
  for (int k = 0; k < 10; ++k) CHECK(prod.coefficient(k) == a.coefficient(k));

  const Jet3 X = Jet3::variable(3, 0, 0.0), Y = Jet3::variable(3, 1, 0.0), Z = Jet3::variable(3, 2, 0.0);
  const Jet3 xyz = (X * Y) * Z;
  CHECK(xyz.coefficient(jet_index_of(3, {1, 1, 1})) == 1.0);
  CHECK(xyz.partial({1, 1, 1}) == 1.0);
}

TEST_CASE("jet_product is commutative and distributive, dimension mismatch is a contract violation") {
  SeededRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + trial % 3;
    const Jet3 a = random_jet(dim, rng), b = random_jet(dim, rng), c = random_jet(dim, rng);
    const Jet3 ab = a * b, ba = b * a;
    const Jet3 lhs = a * (b + c), rhs = a * b + a * c;
    for (int k = 0; k < a.size(); ++k) {
      CHECK(ab.coefficient(k) == ba.coefficient(k));
      CHECK(lhs.coefficient(k) == doctest::Approx(rhs.coefficient(k)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(Jet3::constant(2, 1.0) * Jet3::constant(3, 1.0), ContractViolation);
}

TEST_CASE("jet_eval examples") {
  const ChartFunction s = [](std::span<const Jet3> x) { return sin(x[0]); };
  const std::vector<double> p = {std::numbers::pi / 2};
  const Jet3 j = jet_eval(s, p);
  CHECK(j.value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(j.d(0)) < 1e-15);
  CHECK(j.d(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));

  const ChartFunction poly = [](std::span<const Jet3> x) { return x[0] * x[0] * x[1]; };
  const std::vector<double> q = {1.0, 2.0};
  const Jet3 k = jet_eval(poly, q);
  CHECK(k.value() == 2.0);
  CHECK(k.d(0) == 4.0);
  CHECK(k.d(0, 1) == 2.0);
  CHECK(k.d(0, 0, 1) == 2.0);
  CHECK(k.d(0, 0) == 4.0);
  CHECK(k.d(1, 1) == 0.0);

  // 1/(1+x^2) at 0.5 against 6th-order finite differences.
  const ChartFunction r = [](std::span<const Jet3> x) { return 1.0 / (1.0 + x[0] * x[0]); };
  const std::function<double(double)> rf = [](double x) { return 1.0 / (1.0 + x * x); };
  const Jet3 rj = jet_eval(r, std::vector<double>{0.5});
  CHECK(rj.value() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(rj.d(0) == doctest::Approx(fd1(rf, 0.5, 1e-2)).epsilon(1e-8));
  CHECK(rj.d(0, 0) == doctest::Approx(fd2(rf, 0.5, 1e-2)).epsilon(1e-8));
  CHECK(rj.d(0, 0, 0) == doctest::Approx(fd3(rf, 0.5, 1e-2)).epsilon(1e-7));
}

TEST_CASE("primitives agree with finite differences") {
  struct Case {
    const char* name;
    std::function<Jet3(const Jet3&)> jf;
    std::function<double(double)> f;
    double x;
  };
  const std::vector<Case> cases = {
      {"cos", [](const Jet3& a) { return cos(a); }, [](double x) { return std::cos(x); }, 0.7},
      {"exp", [](const Jet3& a) { return exp(a); }, [](double x) { return std::exp(x); }, -0.3},
      {"log", [](const Jet3& a) { return log(a); }, [](double x) { return std::log(x); }, 1.7},
      {"sqrt", [](const Jet3& a) { return sqrt(a); }, [](double x) { return std::sqrt(x); }, 2.2},
      {"acos", [](const Jet3& a) { return acos(a); }, [](double x) { return std::acos(x); }, 0.3},
      {"pow", [](const Jet3& a) { return pow(a, 2.5); }, [](double x) { return std::pow(x, 2.5); }, 1.3},
      {"powi", [](const Jet3& a) { return pow(a, -3); }, [](double x) { return std::pow(x, -3); }, 1.1},
      {"atan2", [](const Jet3& a) { return atan2(a * a, 1.0 - a); },
       [](double x) { return std::atan2(x * x, 1.0 - x); }, 0.4},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const Jet3 j = c.jf(Jet3::variable(1, 0, c.x));
    CHECK(j.value() == doctest::Approx(c.f(c.x)).epsilon(1e-14));
    CHECK(j.d(0) == doctest::Approx(fd1(c.f, c.x, 1e-2)).epsilon(1e-8));
    CHECK(j.d(0, 0) == doctest::Approx(fd2(c.f, c.x, 1e-2)).epsilon(1e-7));
    CHECK(j.d(0, 0, 0) == doctest::Approx(fd3(c.f, c.x, 1e-2)).epsilon(1e-5));
  }
}

TEST_CASE("domain errors carry the primitive and the evaluation point") {
  const ChartFunction f = [](std::span<const Jet3> x) { return 1.0 / (x[0] - 1.0); };
  try {
    jet_eval(f, std::vector<double>{1.0, 0.5});
    FAIL("expected a DomainError");
  } catch (const DomainError& e) {
    CHECK(e.primitive() == "div");
    CHECK(e.argument() == 0.0);
    CHECK(e.where().find("0.5") != std::string::npos);
  }
  CHECK_THROWS_AS(sqrt(Jet3::constant(1, -1.0)), DomainError);
  CHECK_THROWS_AS(log(Jet3::constant(2, 0.0)), DomainError);
  CHECK_THROWS_AS(Jet3::constant(2, 1.0) / Jet3::constant(2, 1e-14), DomainError);
}

TEST_CASE("polynomials of degree <= 3 have exact partials") {
  SeededRng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 1 + trial % 3;
    std::vector<double> c(static_cast<std::size_t>(jet_coefficient_count(dim)));
    for (auto& v : c) v = rng.uniform(-2, 2);
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (auto& v : p) v = rng.uniform(-1, 1);
    // f(x) = sum c_alpha x^alpha, evaluated by jets at p.
    const ChartFunction f = [c, dim](std::span<const Jet3> x) {
      Jet3 s = Jet3::constant(dim, 0.0);
      for (int k = 0; k < jet_coefficient_count(dim); ++k) {
        Jet3 m = Jet3::constant(dim, c[static_cast<std::size_t>(k)]);
        const MultiIndex a = jet_multi_index(dim, k);
        for (int d = 0; d < dim; ++d)
          for (int e = 0; e < a[static_cast<std::size_t>(d)]; ++e) m = m * x[static_cast<std::size_t>(d)];
        s += m;
      }
      return s;
    };
    const Jet3 j = jet_eval(f, p);
    // Analytic partial d^beta f(p) = sum_alpha c_alpha * alpha!/(alpha-beta)! * p^(alpha-beta).
    for (int kb = 0; kb < jet_coefficient_count(dim); ++kb) {
      const MultiIndex b = jet_multi_index(dim, kb);
      double expect = 0.0;
      for (int k = 0; k < jet_coefficient_count(dim); ++k) {
        const MultiIndex a = jet_multi_index(dim, k);
        double term = c[static_cast<std::size_t>(k)];
        for (int d = 0; d < dim; ++d) {
          const int ad = a[static_cast<std::size_t>(d)], bd = b[static_cast<std::size_t>(d)];
          if (ad < bd) {
            term = 0.0;
            break;
          }
          for (int e = 0; e < bd; ++e) term *= ad - e;
          term *= std::pow(p[static_cast<std::size_t>(d)], ad - bd);
        }
        expect += term;
      }
      CHECK(j.partial(b) == doctest::Approx(expect).epsilon(1e-14).scale(1.0));
    }
  }
}

TEST_CASE("chain rule: composing univariate jets equals evaluating the composition") {
  SeededRng rng(5);
  const std::vector<std::function<Jet3(const Jet3&)>> outer = {
      [](const Jet3& a) { return sin(a); }, [](const Jet3& a) { return exp(a); },
      [](const Jet3& a) { return a * a * a - 2.0 * a; }, [](const Jet3& a) { return 1.0 / (2.0 + a * a); }};
  const std::vector<ChartFunction> inner = {
      [](std::span<const Jet3> x) { return x[0] * x[1] + cos(x[0]); },
      [](std::span<const Jet3> x) { return sqrt(1.0 + x[0] * x[0] + x[1] * x[1]); },
      [](std::span<const Jet3> x) { return exp(x[1]) - x[0]; }};
  for (const auto& f : outer) {
    for (const auto& g : inner) {
      const std::vector<double> p = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const Jet3 gj = jet_eval(g, p);
      const Jet3 fj = f(Jet3::variable(1, 0, gj.value()));
      const Jet3 composed = compose(fj, gj);
      const Jet3 direct = jet_eval([&](std::span<const Jet3> x) { return f(g(x)); }, p);
      for (int k = 0; k < direct.size(); ++k)
        CHECK(composed.coefficient(k) ==
              doctest::Approx(direct.coefficient(k)).epsilon(1e-12).scale(std::abs(direct.value()) + 1.0));
    }
  }
}

TEST_CASE("jet_eval is linear") {
  const ChartFunction f = [](std::span<const Jet3> x) { return sin(x[0]) * x[1]; };
  const ChartFunction g = [](std::span<const Jet3> x) { return exp(x[1] - x[0]); };
  const double alpha = 0.75, beta = -2.0;  // exact in binary
  const std::vector<double> p = {0.3, -0.4};
  const Jet3 lhs = jet_eval([&](std::span<const Jet3> x) { return alpha * f(x) + beta * g(x); }, p);
  const Jet3 rhs = alpha * jet_eval(f, p) + beta * jet_eval(g, p);
  for (int k = 0; k < lhs.size(); ++k) CHECK(lhs.coefficient(k) == rhs.coefficient(k));
}

TEST_CASE("derivative drops one order") {
  const Jet3 j = jet_eval([](std::span<const Jet3> x) { return x[0] * x[0] * x[1] + x[1] * x[1] * x[1]; },
                          std::vector<double>{1.0, 2.0});
  const Jet3 dx = j.derivative(0);  // 2xy
  CHECK(dx.value() == 4.0);
  CHECK(dx.d(0) == 4.0);
  CHECK(dx.d(1) == 2.0);
  CHECK(dx.d(0, 1) == 2.0);
}
