#include <cmath>
#include <numbers>

#include "doctest.h"
#include "reilly/boundary.hpp"
#include "reilly/errors.hpp"
#include "reilly/quadrature.hpp"
#include "reilly/zoo.hpp"

using namespace reilly;

namespace {

constexpr double kPi = std::numbers::pi;

ChartPoint pt(double a, double b) {
  ChartPoint p;
  p.coords = Vec(2);
  p.coords << a, b;
  return p;
}

double term(const std::vector<ReillyTerm>& terms, const std::string& name) {
  for (const auto& t : terms)
    if (t.name == name) return t.value;
  FAIL("missing term " << name);
  return 0.0;
}

void check_terms(const ReillyEvaluation& ev, const std::vector<double>& boundary, double tol) {
  const char* names[] = {"nabla_W_W", "shape", "mean_curvature", "grad_u_n", "W_u_n", "boundary_operator"};
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    CAPTURE(names[i]);
    CHECK(term(ev.boundary_terms, names[i]) == doctest::Approx(boundary[i]).epsilon(tol).scale(1.0));
  }
}

ScalarField disk_scalar(const CatalogEntry& d, std::string name,
                        std::function<Jet3(const Jet3&, const Jet3&, const Jet3&)> f) {
  return ScalarField{std::move(name), ambient_scalar(d.manifold.primary(), std::move(f))};
}

}  // namespace

TEST_CASE("gauss-legendre rules") {
  for (int q : {1, 2, 3, 5, 8, 17, 40}) {
    const GaussLegendre r = gauss_legendre(q);
    double s = 0.0;
    for (double w : r.weights) s += w;
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    for (int deg = 0; deg <= 2 * q - 1; ++deg) {
      double acc = 0.0;
      for (int k = 0; k < q; ++k) acc += r.weights[k] * std::pow(r.nodes[k], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(acc == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
    for (int k = 1; k < q; ++k) CHECK(r.nodes[k] > r.nodes[k - 1]);
  }
  CHECK_THROWS_AS(gauss_legendre(0), ContractViolation);
}

TEST_CASE("chart volumes") {
  CHECK(chart_volume(instantiate("sphere_unit", false).manifold) == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(chart_volume(instantiate("sphere_r2", false).manifold) == doctest::Approx(16 * kPi).epsilon(1e-12));
  CHECK(chart_volume(instantiate("hemisphere_unit", false).manifold) == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(chart_volume(instantiate("disk_unit", false).manifold) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(chart_volume(instantiate("torus_2pi", false).manifold) == doctest::Approx(4 * kPi * kPi).epsilon(1e-12));
}

TEST_CASE("boundary_geometry examples") {
  const CatalogEntry h = instantiate("hemisphere_unit", false);
  const Mat I2 = Mat::Identity(2, 2);
  for (double phi : {0.1, 1.7, 4.0}) {
    const BoundaryGeometry b = boundary_geometry(h.manifold, boundary_point(h.manifold, Vec::Constant(1, phi)));
    CHECK(std::abs(b.mean_curvature_A(I2)) <= 1e-12);
  }

  const CatalogEntry d = instantiate("disk_unit", false);
  for (double th : {0.0, 0.9, 3.0}) {
    const ChartPoint p = boundary_point(d.manifold, Vec::Constant(1, th));
    CHECK(boundary_geometry(d.manifold, p, -1).mean_curvature_A(I2) == doctest::Approx(-1.0));
    CHECK(boundary_geometry(d.manifold, p, +1).mean_curvature_A(I2) == doctest::Approx(1.0));
  }

  // At (1, 0) the tangent is e_theta = (0, 1); A = diag(2,1) gives <A t, t> = 1.
  const BoundaryGeometry b = boundary_geometry(d.manifold, pt(1.0, 0.0), -1);
  const LocalGeometry geo(d.manifold, pt(1.0, 0.0));
  const Mat A = endomorphism_jets(geo, d.field("A=diag(2,1)").field).value();
  CHECK(b.mean_curvature_A(A) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(boundary_geometry(d.manifold, pt(0.5, 0.0)), ContractViolation);
  CHECK_THROWS_AS(boundary_geometry(instantiate("torus_2pi", false).manifold, pt(1.0, 0.0)), ContractViolation);
}

TEST_CASE("boundary frame invariants") {
  for (const char* id : {"disk_unit", "hemisphere_unit"}) {
    const CatalogEntry e = instantiate(id, false);
    for (int k = 0; k < 16; ++k) {
      const ChartPoint p = boundary_point(e.manifold, Vec::Constant(1, 0.37 * k));
      const BoundaryGeometry b = boundary_geometry(e.manifold, p);
      const LocalGeometry geo(e.manifold, p);
      CHECK(geo.norm(b.normal) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(geo.inner(b.normal, b.tangent_frame.col(0))) <= 1e-12);
      CHECK(geo.norm(b.tangent_frame.col(0)) == doctest::Approx(1.0).epsilon(1e-12));
      // A small step along n leaves the chart box through the boundary face.
      const BoundarySide s = *e.manifold.primary().boundary;
      const double step = p.coords(s.axis) + 1e-6 * b.normal(s.axis);
      CHECK(step > e.manifold.primary().box[s.axis].hi);
    }
  }
}

TEST_CASE("reilly parallel matches the disk oracle") {
  // Values from tests/oracles/gen_reilly_values.py.
  const CatalogEntry d = instantiate("disk_unit", false);
  const ReillyEvaluation a = reilly_parallel(d.manifold, d.field("A=I").field, d.scalar("u=x^2"), 8);
  check_terms(a, {-kPi, 0.0, -3 * kPi, 0.0, 2 * kPi, 2 * kPi}, 1e-10);
  CHECK(a.defect() <= 1e-8);
  CHECK(term(a.interior_terms, "trace_AH2") == doctest::Approx(4 * kPi).epsilon(1e-10));

  const ReillyEvaluation b = reilly_parallel(d.manifold, d.field("A=I").field, d.scalar("u=x^3+xy"), 12);
  check_terms(b, {-6.6758843888783106, 0.0, -20.813051330032380, 0.0, 16.886060513045139, 16.886060513045139}, 1e-10);
  CHECK(b.B == doctest::Approx(2 * kPi).epsilon(1e-10));
  CHECK(b.C == doctest::Approx(2 * kPi).epsilon(1e-10));

  const ReillyEvaluation c = reilly_parallel(d.manifold, d.field("A=diag(2,1)").field, d.scalar("u=x^3+xy"), 12);
  check_terms(c,
              {-10.013826583317466, 4.4178646691106467, -24.592779991382600, -6.6267970036659701, 26.654450170300902,
               19.585866699723867},
              1e-10);
  CHECK(c.C == doctest::Approx(3 * kPi).epsilon(1e-10));
  CHECK(c.defect() <= 1e-10);
}

TEST_CASE("reilly parallel examples") {
  const CatalogEntry t = instantiate("torus_2pi", false);
  const ReillyEvaluation a = reilly_parallel(t.manifold, t.field("A=diag(2,1)").field, t.scalar("u=cos(x)"), 8);
  CHECK(a.B == 0.0);
  CHECK(std::abs(a.C) <= 1e-12);

  const CatalogEntry h = instantiate("hemisphere_unit", false);
  for (const char* u : {"u=cos(theta)", "u=xz+y", "u=exp(x/2)+yz^2"}) {
    const ReillyEvaluation e = reilly_parallel(h.manifold, h.field("A=1.5I").field, h.scalar(u), 16);
    CAPTURE(u);
    CHECK(e.defect() <= 1e-6);
  }

  const CatalogEntry s = instantiate("sphere_unit", false);
  CHECK_THROWS_AS(reilly_parallel(s.manifold, s.field("A=Hess(phi)+phi*g").field, s.scalar("u=xz+y"), 8),
                  HypothesisViolation);
}

TEST_CASE("closed manifolds give B = 0 and integrated Bochner C = 0") {
  for (const char* id : {"sphere_unit", "sphere_r2", "torus_2pi"}) {
    const CatalogEntry e = instantiate(id, false);
    for (const auto& f : e.fields) {
      if (!f.field.declared.parallel) continue;
      for (const auto& u : e.scalars) {
        const ReillyEvaluation ev = reilly_parallel(e.manifold, f.field, u, 16);
        double scale = 1.0;
        for (const auto& t : ev.interior_terms) scale = std::max(scale, std::abs(t.value));
        CAPTURE(id);
        CAPTURE(f.field.name);
        CAPTURE(u.name);
        CHECK(ev.B == 0.0);
        CHECK(std::abs(ev.C) <= 1e-8 * scale);
      }
    }
  }
}

TEST_CASE("reilly codazzi") {
  const CatalogEntry d = instantiate("disk_unit", false);
  const auto& H = d.field("A=Hess(x^3-3xy^2)").field;
  for (const char* u : {"u=x^2+y^2", "u=x", "u=x^3+xy"}) {
    const ReillyEvaluation e = reilly_codazzi(d.manifold, H, d.scalar(u), 12);
    CAPTURE(u);
    CHECK(e.defect() <= 1e-6);
  }
  const ScalarField mixed = disk_scalar(d, "u=x^2+x^3+xy", [](const Jet3& x, const Jet3& y, const Jet3&) {
    return x * x + x * x * x + x * y;
  });
  const ReillyEvaluation e = reilly_codazzi(d.manifold, H, mixed, 12);
  CHECK(e.defect() <= 1e-10);
  double largest = 0.0;
  for (const ReillyTerm& t : e.boundary_terms) largest = std::max(largest, std::abs(t.value));
  CHECK(largest > 10.0);

  // A = Id: the codazzi evaluation reduces to the parallel one.
  for (const char* u : {"u=x^2", "u=x^3+xy", "u=sin(x)exp(y)"}) {
    const ReillyEvaluation p = reilly_parallel(d.manifold, d.field("A=I").field, d.scalar(u), 12);
    const ReillyEvaluation c = reilly_codazzi(d.manifold, d.field("A=I").field, d.scalar(u), 12);
    CHECK(c.B == doctest::Approx(p.B).epsilon(1e-12).scale(1.0));
    CHECK(c.C == doctest::Approx(p.C).epsilon(1e-12).scale(1.0));
  }

  const CatalogEntry pl = instantiate("plane_patch", false);
  CHECK_THROWS_AS(reilly_codazzi(pl.manifold, pl.field("A=[[y,0],[0,0]]").field, pl.scalar("u=x"), 4),
                  HypothesisViolation);
}

TEST_CASE("breakdown sums to both sides") {
  const CatalogEntry d = instantiate("disk_unit", false);
  const ReillyEvaluation e = reilly_parallel(d.manifold, d.field("A=diag(2,1)").field, d.scalar("u=sin(x)exp(y)"), 10);
  double b = 0.0, c = 0.0;
  for (const auto& t : e.boundary_terms) b += t.value;
  for (const auto& t : e.interior_terms) c += t.value;
  CHECK(std::abs(b - e.B) <= 1e-12 * std::max(1.0, std::abs(e.B)));
  CHECK(std::abs(c - e.C) <= 1e-12 * std::max(1.0, std::abs(e.C)));
}

TEST_CASE("defect decreases as the quadrature order doubles") {
  const CatalogEntry d = instantiate("disk_unit", false);
  const CatalogEntry h = instantiate("hemisphere_unit", false);
  struct Case {
    const CatalogEntry* e;
    const char* A;
    const char* u;
  };
  for (const Case& c : {Case{&d, "A=diag(2,1)", "u=sin(x)exp(y)"}, Case{&h, "A=I", "u=exp(x/2)+yz^2"}}) {
    double prev = 1e300;
    for (int q : {2, 4, 8, 16}) {
      const double def = reilly_parallel(c.e->manifold, c.e->field(c.A).field, c.e->scalar(c.u), q).defect();
      CAPTURE(c.u);
      CAPTURE(q);
      if (prev > 1e-13) CHECK(def <= 1.1 * prev + 1e-14);
      prev = def;
    }
  }
}

TEST_CASE("shape sign is uniquely determined by the classical disk case") {
  const CatalogEntry d = instantiate("disk_unit", false);
  const ShapeSignResult r = determine_shape_sign(d.manifold, d.field("A=I").field, d.scalar("u=x^2"));
  CHECK(r.sigma == kShapeSign);
  CHECK(r.defect_minus < 1e-6);
  CHECK(r.defect_plus > 1e-2);
}
