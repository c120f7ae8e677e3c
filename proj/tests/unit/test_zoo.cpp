#include <cmath>
#include <numbers>

#include "doctest.h"
#include "reilly/errors.hpp"
#include "reilly/identities.hpp"
#include "reilly/sampling.hpp"
#include "reilly/zoo.hpp"

using namespace reilly;

TEST_CASE("every registered entry instantiates with verified flags") {
  for (const auto& id : catalog_ids()) {
    CAPTURE(id);
    CHECK_NOTHROW(instantiate(id));
  }
}

TEST_CASE("instantiate examples") {
  const CatalogEntry s = instantiate("sphere_unit/A=1.5I");
  REQUIRE(s.fields.size() == 1);
  CHECK(s.fields[0].field.declared.parallel);
  CHECK(*analytic_lambda1(s, "A=1.5I") == doctest::Approx(3.0));
  const auto samples = sample_chart_points(s.manifold, 20, 1);
  for (const auto& p : samples) {
    const LocalGeometry geo(s.manifold, p);
    const Mat r = ric_A(s.manifold, s.fields[0].field, p);
    CHECK((r - 1.5 * geo.metric()).norm() < 1e-12);
  }

  const CatalogEntry t = instantiate("torus_2pi/A=diag(2,1)");
  CHECK(t.fields[0].field.declared.parallel);
  CHECK(*analytic_lambda1(t, "A=diag(2,1)") == 1.0);

  const CatalogEntry d = instantiate("disk_unit/A=Hess(x^3-3xy^2)");
  const StructureFlags f = d.fields[0].field.declared;
  CHECK(f.codazzi);
  CHECK(f.divergence_free);
  CHECK(f.trace_constant);
  CHECK_FALSE(f.positive_semidefinite);
}

TEST_CASE("analytic_lambda1 examples") {
  const CatalogEntry h = instantiate("hemisphere_unit", false);
  CHECK(*analytic_lambda1(h, "A=1.5I", BoundaryCondition::dirichlet) == 3.0);
  CHECK(*analytic_lambda1(h, "A=I", BoundaryCondition::dirichlet) == 2.0);
  const CatalogEntry torus = instantiate("torus_2pi", false);
  CHECK_FALSE(analytic_lambda1(torus, "A=(2+cos(x))I").has_value());
  CHECK(*analytic_lambda1(instantiate("sphere_r2", false), "A=1.5I") == doctest::Approx(0.75));
}

TEST_CASE("unknown ids are rejected") {
  CHECK_THROWS_AS(instantiate("klein_bottle"), UnknownName);
  CHECK_THROWS_AS(instantiate("sphere_unit/A=7I"), UnknownName);
  CHECK_THROWS_AS(instantiate("sphere_unit", false).scalar("u=nope"), UnknownName);
}

TEST_CASE("a constant non-scalar matrix on the sphere chart is not parallel") {
  const CatalogEntry s = instantiate("sphere_unit", false);
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 1;
  const EndomorphismField f = constant_field(2, "diag(2,1)", d, {});
  const StructureReport r = structure_check(s.manifold, f, sample_chart_points(s.manifold, 200, 3));
  CHECK_FALSE(r.flags.parallel);
}

TEST_CASE("zoo listing has one tab-separated line per case") {
  const auto lines = zoo_listing();
  CHECK(lines.size() == catalog_case_ids().size());
  bool found = false;
  for (const auto& l : lines) {
    CHECK(std::count(l.begin(), l.end(), '\t') == 3);
    if (l.rfind("torus_2pi/A=diag(2,1)\t2\t", 0) == 0) found = true;
  }
  CHECK(found);
}
