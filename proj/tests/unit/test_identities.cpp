#include <cmath>

#include "doctest.h"
#include "reilly/errors.hpp"
#include "reilly/identities.hpp"
#include "reilly/sampling.hpp"
#include "reilly/zoo.hpp"

using namespace reilly;

namespace {

ChartPoint pt(double a, double b) {
  ChartPoint p;
  p.coords = Vec(2);
  p.coords << a, b;
  return p;
}

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("bochner examples") {
  const CatalogEntry torus = instantiate("torus_2pi", false);
  const auto& I = torus.field("A=I").field;
  const auto& cosx = torus.scalar("u=cos(x)");
  for (double x : {0.1, 0.9, 2.3, 4.0}) {
    const LocalGeometry geo(torus.manifold, pt(x, 0.4));
    const BochnerTerms t = bochner_terms(geo, endomorphism_jets(geo, I), scalar_jets(geo, cosx));
    CHECK(t.lhs == doctest::Approx(std::cos(2 * x)).epsilon(1e-12));
    CHECK(std::abs(t.lhs - t.rhs()) <= 1e-12);
  }

  const CatalogEntry sphere = instantiate("sphere_unit", false);
  for (const auto& p : sample_chart_points(sphere.manifold, 20, 11))
    CHECK(bochner_residual(sphere.manifold, sphere.field("A=1.5I").field, sphere.scalar("u=cos(theta)"), p)
              .relative() <= 1e-8);

  for (const auto& id : catalog_ids()) {
    const CatalogEntry e = instantiate(id, false);
    for (const auto& f : e.fields)
      for (const auto& p : sample_chart_points(e.manifold, 5, 2))
        CHECK(bochner_residual(e.manifold, f.field, e.scalar("u=1"), p).residual == 0.0);
  }
}

TEST_CASE("bochner terms match the symbolic oracle") {
  // Values from tests/oracles/gen_identity_values.py.
  const CatalogEntry s = instantiate("sphere_unit", false);
  const LocalGeometry geo(s.manifold, pt(0.7, 1.3));
  const BochnerTerms t = bochner_terms(geo, endomorphism_jets(geo, s.field("A=Hess(phi)+phi*g").field),
                                       scalar_jets(geo, s.scalar("u=xz+y")));
  CHECK(t.lhs == doctest::Approx(2.4220592092390936).epsilon(1e-11));
  CHECK(t.div_term == doctest::Approx(2.8719941058491711).epsilon(1e-11));
  CHECK(t.hess_term == doctest::Approx(-1.5323154792943372).epsilon(1e-11));
  CHECK(t.grad_term == doctest::Approx(2.7558461894578801).epsilon(1e-11));
  CHECK(-t.nabla_term == doctest::Approx(-2.2114430698264219).epsilon(1e-11));
  CHECK(t.ric_term == doctest::Approx(0.53797746305280154).epsilon(1e-11));

  const CatalogEntry pl = instantiate("plane_patch", false);
  const LocalGeometry g2(pl.manifold, pt(0.3, -0.2));
  const BochnerTerms q =
      bochner_terms(g2, endomorphism_jets(g2, pl.field("A=Hess(x^3)").field), scalar_jets(g2, pl.scalar("u=x^2")));
  CHECK(q.lhs == doctest::Approx(14.4));
  CHECK(q.div_term == doctest::Approx(7.2));
  CHECK(q.hess_term == doctest::Approx(7.2));
  CHECK(q.grad_term == doctest::Approx(7.2));
  CHECK(q.nabla_term == doctest::Approx(7.2));
  CHECK(std::abs(q.ric_term) <= 1e-14);
}

TEST_CASE("bochner holds for every catalog triple") {
  for (const auto& id : catalog_ids()) {
    const CatalogEntry e = instantiate(id, false);
    const auto samples = sample_chart_points(e.manifold, 100, 0xb0c4);
    for (const auto& f : e.fields)
      for (const auto& u : e.scalars) {
        double worst = 0.0;
        for (const auto& p : samples)
          worst = std::max(worst, bochner_residual(e.manifold, f.field, u, p).relative());
        CAPTURE(id);
        CAPTURE(f.field.name);
        CAPTURE(u.name);
        CHECK(worst <= 1e-7);
      }
  }
}

TEST_CASE("parallel bochner") {
  const CatalogEntry t = instantiate("torus_2pi", false);
  for (const auto& p : sample_chart_points(t.manifold, 20, 5))
    CHECK(bochner_parallel_residual(t.manifold, t.field("A=diag(2,1)").field, t.scalar("u=cos(x)"), p).residual <=
          1e-10);

  const CatalogEntry s = instantiate("sphere_unit", false);
  for (const auto& p : sample_chart_points(s.manifold, 20, 6)) {
    CHECK(bochner_parallel_residual(s.manifold, s.field("A=1.5I").field, s.scalar("u=cos(theta)"), p).relative() <=
          1e-8);
    const auto a = bochner_parallel_residual(s.manifold, s.field("A=I").field, s.scalar("u=xz+y"), p);
    const auto b = bochner_residual(s.manifold, s.field("A=I").field, s.scalar("u=xz+y"), p);
    CHECK(a.residual == doctest::Approx(b.residual).epsilon(1e-6).scale(1e-12));
  }
  CHECK_THROWS_AS(bochner_parallel_residual(s.manifold, s.field("A=Hess(phi)+phi*g").field, s.scalar("u=xz+y"),
                                            pt(0.7, 1.3)),
                  HypothesisViolation);
}

TEST_CASE("commutation lemmas hold for all catalog fields") {
  SeededRng rng(77);
  for (const auto& id : catalog_ids()) {
    const CatalogEntry e = instantiate(id, false);
    for (const auto& f : e.fields)
      for (const auto& p : sample_chart_points(e.manifold, 20, 9)) {
        const LocalGeometry geo(e.manifold, p);
        const Vec X = random_tangent(geo, rng), Y = random_tangent(geo, rng), Z = random_tangent(geo, rng);
        CAPTURE(id);
        CAPTURE(f.field.name);
        CHECK(ricci_commutation_residual(e.manifold, f.field, p, X, Y, Z).relative() <= 1e-8);
        CHECK(torsion_swap_residual(e.manifold, f.field, p, X, Y, Z).relative() <= 1e-8);
      }
  }
}

TEST_CASE("torsion swap with constant torsion") {
  const CatalogEntry pl = instantiate("plane_patch", false);
  Vec X(2), Y(2);
  X << 1, 0;
  Y << 0, 1;
  CHECK(torsion_swap_residual(pl.manifold, pl.field("A=[[y,0],[0,0]]").field, pt(0.2, 0.1), X, Y, X).residual ==
        doctest::Approx(0.0));
}

TEST_CASE("Delta A identity on Codazzi fields") {
  const CatalogEntry torus = instantiate("torus_2pi", false);
  Vec X(2);
  X << 0.3, -1.1;
  const auto r0 = deltaA_identity_residual(torus.manifold, torus.field("A=[[2,.5],[.5,1]]").field, pt(1, 2), X);
  CHECK(r0.residual == 0.0);
  CHECK(r0.scale == 0.0);

  SeededRng rng(123);
  for (const auto& id : catalog_ids()) {
    const CatalogEntry e = instantiate(id, false);
    for (const auto& f : e.fields) {
      if (!f.field.declared.codazzi) continue;
      for (const auto& p : sample_chart_points(e.manifold, 30, 4)) {
        const LocalGeometry geo(e.manifold, p);
        CAPTURE(id);
        CAPTURE(f.field.name);
        CHECK(deltaA_identity_residual(e.manifold, f.field, p, random_tangent(geo, rng)).relative() <= 1e-7);
      }
    }
  }

  const CatalogEntry pl = instantiate("plane_patch", false);
  CHECK_THROWS_AS(deltaA_identity_residual(pl.manifold, pl.field("A=[[y,0],[0,0]]").field, pt(0.1, 0.1), X),
                  HypothesisViolation);
}

TEST_CASE("nabla nabla u identity") {
  const CatalogEntry pl = instantiate("plane_patch", false);
  const auto& hx3 = pl.field("A=Hess(x^3)").field;
  for (const auto& p : sample_chart_points(pl.manifold, 30, 8)) {
    CHECK(nabla_nabla_u_residual(pl.manifold, hx3, pl.scalar("u=x^2"), p).residual <= 1e-9);
    const auto c = nabla_nabla_u_residual(pl.manifold, pl.field("A=diag(2,1)").field, pl.scalar("u=x^3+xy"), p);
    CHECK(c.residual == 0.0);
  }
  // B = Hess(x^3), u = x^2: C = diag(12x, 0), so Delta_C u = 24x.
  const LocalGeometry geo(pl.manifold, pt(0.5, 0.2));
  const NablaNablaTerms t = nabla_nabla_u_terms(geo, endomorphism_jets(geo, hx3), scalar_jets(geo, pl.scalar("u=x^2")));
  CHECK(t.lhs == doctest::Approx(12.0));
  CHECK(t.iterated == doctest::Approx(12.0));

  for (const auto& id : catalog_ids()) {
    const CatalogEntry e = instantiate(id, false);
    for (const auto& f : e.fields) {
      if (!f.field.declared.codazzi) continue;
      for (const auto& u : e.scalars)
        for (const auto& p : sample_chart_points(e.manifold, 10, 12)) {
          CAPTURE(id);
          CAPTURE(f.field.name);
          CAPTURE(u.name);
          CHECK(nabla_nabla_u_residual(e.manifold, f.field, u, p).relative() <= 1e-7);
        }
    }
  }
}

TEST_CASE("trace inequality examples") {
  CHECK(trace_inequality_slack(Mat::Identity(2, 2), diag2(1, 2)) == doctest::Approx(0.5));
  Mat F(2, 2);
  F << 0, 1, 1, 0;
  CHECK(trace_inequality_slack(diag2(2, 0), F) == doctest::Approx(2.0));
  Mat A(3, 3);
  A << 2, 1, 0, 1, 3, 0.5, 0, 0.5, 1;
  CHECK(std::abs(trace_inequality_slack(A, 3.0 * Mat::Identity(3, 3))) <= 1e-12);
  CHECK_THROWS_AS(trace_inequality_slack(Mat::Zero(2, 2), F), ContractViolation);
  CHECK_THROWS_AS(trace_inequality_slack(diag2(1, -1), F), ContractViolation);
}

TEST_CASE("trace inequality over random PSD pairs") {
  SeededRng rng(2024);
  for (int k = 0; k < 1000; ++k) {
    const int n = 2 + static_cast<int>(rng.bits() % 5);
    Mat G(n, n), F(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        G(i, j) = rng.normal();
        F(i, j) = rng.normal();
      }
    const Mat A = G * G.transpose();
    const Mat Fs = 0.5 * (F + F.transpose());
    const double slack = trace_inequality_slack(A, Fs);
    CHECK(slack >= -1e-12 * (1.0 + std::abs((A * Fs * Fs).trace())));
  }
}

TEST_CASE("structure_check examples") {
  const CatalogEntry torus = instantiate("torus_2pi", false);
  const auto ts = sample_chart_points(torus.manifold, 50, 1);
  const StructureReport r = structure_check(torus.manifold, torus.field("A=diag(2,1)").field, ts);
  CHECK(r.flags == StructureFlags{true, true, true, true, true, true});

  const CatalogEntry pl = instantiate("plane_patch", false);
  const StructureReport y =
      structure_check(pl.manifold, pl.field("A=[[y,0],[0,0]]").field, sample_chart_points(pl.manifold, 50, 1));
  CHECK_FALSE(y.flags.codazzi);
  CHECK(y.codazzi_violation == doctest::Approx(std::sqrt(2.0)));  // T(e1,e2) and T(e2,e1) each have norm 1
  CHECK(y.flags.divergence_free);
  CHECK_FALSE(y.flags.positive_semidefinite);

  const CatalogEntry d = instantiate("disk_unit", false);
  const StructureReport h =
      structure_check(d.manifold, d.field("A=Hess(x^3-3xy^2)").field, sample_chart_points(d.manifold, 50, 1));
  CHECK(h.flags.codazzi);
  CHECK(h.flags.divergence_free);
  CHECK_FALSE(h.flags.positive_semidefinite);

  CHECK_THROWS_AS(structure_check(d.manifold, d.field("A=I").field, {}), ContractViolation);
}

TEST_CASE("parallel implies codazzi and divergence free") {
  for (const auto& id : catalog_ids()) {
    const CatalogEntry e = instantiate(id, false);
    const auto samples = sample_chart_points(e.manifold, 40, 21);
    for (const auto& f : e.fields) {
      const StructureReport r = structure_check(e.manifold, f.field, samples);
      if (r.flags.parallel) {
        CHECK(r.flags.codazzi);
        CHECK(r.flags.divergence_free);
      }
    }
  }
}
