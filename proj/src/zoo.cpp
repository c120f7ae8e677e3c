#include "reilly/zoo.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "reilly/errors.hpp"
#include "reilly/identities.hpp"
#include "reilly/sampling.hpp"

namespace reilly {

namespace {

constexpr double kPi = std::numbers::pi;

using Ambient3 = std::function<Jet3(const Jet3&, const Jet3&, const Jet3&)>;

Jet3 cst(const Jet3& like, double c) { return Jet3::constant(like.dim(), c); }

StructureFlags all_flags() { return {true, true, true, true, true, true}; }

StructureFlags flags(bool psd, bool parallel, bool codazzi, bool div_free, bool trace_const) {
  return {true, psd, parallel, codazzi, div_free, trace_const};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Chart flat_chart(std::string name, Interval a, Interval b, bool periodic, bool embedded) {
  Chart c;
  c.name = std::move(name);
  c.box = {a, b};
  c.periodic = {periodic, periodic};
  c.metric = {constant_function(1.0), constant_function(0.0), constant_function(0.0), constant_function(1.0)};
  if (embedded) {
    c.embedding = {coordinate_function(0), coordinate_function(1), constant_function(0.0)};
    c.embedding_jacobian = {constant_function(1.0), constant_function(0.0), constant_function(0.0),
                            constant_function(1.0), constant_function(0.0), constant_function(0.0)};
    c.locate = {coordinate_function(0), coordinate_function(1)};
  }
  return c;
}

Chart disk_chart() {
  Chart c;
  c.name = "polar";
  c.box = {{0.0, 1.0}, {0.0, 2.0 * kPi}};
  c.periodic = {false, true};
  c.metric = {constant_function(1.0), constant_function(0.0), constant_function(0.0),
              [](std::span<const Jet3> x) { return x[0] * x[0]; }};
  c.embedding = {[](std::span<const Jet3> x) { return x[0] * cos(x[1]); },
                 [](std::span<const Jet3> x) { return x[0] * sin(x[1]); }, constant_function(0.0)};
  c.embedding_jacobian = {[](std::span<const Jet3> x) { return cos(x[1]); },
                          [](std::span<const Jet3> x) { return -x[0] * sin(x[1]); },
                          [](std::span<const Jet3> x) { return sin(x[1]); },
                          [](std::span<const Jet3> x) { return x[0] * cos(x[1]); },
                          constant_function(0.0),
                          constant_function(0.0)};
  c.locate = {[](std::span<const Jet3> a) { return sqrt(a[0] * a[0] + a[1] * a[1]); },
              [](std::span<const Jet3> a) { return atan2(a[1], a[0]); }};
  c.boundary = BoundarySide{0, true};
  return c;
}

ScalarField make_scalar(std::string name, ChartFunction f) { return {std::move(name), std::move(f), "test function"}; }

FieldEntry entry(EndomorphismField f, FieldFacts facts = {}) { return {std::move(f), std::move(facts)}; }

FieldFacts closed_lambda(double v, std::string why) {
  FieldFacts f;
  f.lambda1_closed = v;
  f.provenance = std::move(why);
  return f;
}

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

std::array<Jet3, 9> zeros9(const Jet3& like) {
  std::array<Jet3, 9> S;
  S.fill(cst(like, 0.0));
  return S;
}

// Ambient test functions shared by the embedded entries.
Jet3 u_xz_y(const Jet3& x, const Jet3& y, const Jet3& z) { return x * z + y; }
Jet3 u_exp_mix(const Jet3& x, const Jet3& y, const Jet3& z) { return exp(0.5 * x) + y * z * z; }

CatalogEntry build_sphere(const std::string& id, double r) {
  CatalogEntry e;
  e.id = id;
  e.manifold.name = id;
  e.manifold.dim = 2;
  e.manifold.charts = {sphere_chart(r), sphere_chart_rotated(r)};
  e.manifold.known_diameter = kPi * r;
  e.manifold.curvature_constant = 1.0 / (r * r);
  e.provenance = "round sphere of radius " + fmt(r) + ": sectional curvature 1/r^2, diameter pi r (antipodal points)";
  const Chart& c = e.manifold.charts.front();
  const double l1 = 2.0 / (r * r);
  const std::string why = "first spherical harmonics: -Delta z = (2/r^2) z, scaled by alpha for A = alpha I";
  e.fields.push_back(entry(constant_field(2, "A=I", Mat::Identity(2, 2), all_flags()), closed_lambda(l1, why)));
  e.fields.push_back(entry(constant_field(2, "A=1.5I", 1.5 * Mat::Identity(2, 2), all_flags()),
                           closed_lambda(1.5 * l1, why)));
  if (r == 1.0) {
    // phi = 0.3 + xz.  For a quadratic form f on the unit sphere Hess f = D^2 f|_T - 2 f g,
    // hence Hess phi + phi g = D^2(xz)|_T + (0.3 - xz) g.
    e.fields.push_back(entry(ambient_form_field(
        c, "A=Hess(phi)+phi*g",
        [](const Jet3& x, const Jet3&, const Jet3&) {
          auto S = zeros9(x);
          S[2] = cst(x, 1.0);
          S[6] = cst(x, 1.0);
          return S;
        },
        [](const Jet3& x, const Jet3&, const Jet3& z) { return 0.3 - x * z; },
        flags(false, false, true, false, false))));
    // Identity plus the tangential part of a constant positive definite matrix: not Codazzi.
    e.fields.push_back(entry(ambient_form_field(
        c, "A=I+P(S)",
        [](const Jet3& x, const Jet3&, const Jet3&) {
          const double S0[9] = {0.5, 0.2, 0.1, 0.2, 0.3, 0.0, 0.1, 0.0, 0.4};
          std::array<Jet3, 9> S;
          for (int k = 0; k < 9; ++k) S[static_cast<std::size_t>(k)] = cst(x, S0[k]);
          return S;
        },
        [](const Jet3& x, const Jet3&, const Jet3&) { return cst(x, 1.0); },
        flags(true, false, false, false, false))));
  }
  e.scalars = {make_scalar("u=cos(theta)", [](std::span<const Jet3> x) { return cos(x[0]); }),
               make_scalar("u=xz+y", ambient_scalar(c, u_xz_y)),
               make_scalar("u=exp(x/2)+yz^2", ambient_scalar(c, u_exp_mix)),
               make_scalar("u=1", constant_function(1.0))};
  return e;
}

CatalogEntry build_hemisphere() {
  CatalogEntry e;
  e.id = "hemisphere_unit";
  e.manifold.name = e.id;
  e.manifold.dim = 2;
  Chart c = sphere_chart(1.0);
  c.name = "polar-cap";
  c.box[0] = {0.0, kPi / 2};
  c.boundary = BoundarySide{0, true};
  e.manifold.charts = {c};
  e.manifold.known_diameter = kPi;
  e.manifold.curvature_constant = 1.0;
  e.provenance = "closed upper unit hemisphere: curvature 1, diameter pi (antipodal equator points)";
  const std::string why =
      "z vanishes on the equator (Dirichlet) and x, y have zero normal derivative there (Neumann); all satisfy "
      "-Delta f = 2 f, scaled by alpha";
  for (double alpha : {1.0, 1.5}) {
    FieldFacts f;
    f.lambda1_dirichlet = 2.0 * alpha;
    f.lambda1_neumann = 2.0 * alpha;
    f.provenance = why;
    e.fields.push_back(
        entry(constant_field(2, alpha == 1.0 ? "A=I" : "A=1.5I", alpha * Mat::Identity(2, 2), all_flags()), f));
  }
  e.scalars = {make_scalar("u=cos(theta)", [](std::span<const Jet3> x) { return cos(x[0]); }),
               make_scalar("u=xz+y", ambient_scalar(c, u_xz_y)),
               make_scalar("u=exp(x/2)+yz^2", ambient_scalar(c, u_exp_mix)),
               make_scalar("u=1", constant_function(1.0))};
  return e;
}

CatalogEntry build_torus() {
  CatalogEntry e;
  e.id = "torus_2pi";
  e.manifold.name = e.id;
  e.manifold.dim = 2;
  e.manifold.charts = {flat_chart("periodic", {0.0, 2 * kPi}, {0.0, 2 * kPi}, true, false)};
  e.manifold.known_diameter = kPi * std::sqrt(2.0);
  e.manifold.curvature_constant = 0.0;
  e.provenance = "flat square torus of side 2 pi: curvature 0, diameter sqrt(pi^2 + pi^2)";
  const std::string why = "Fourier modes exp(i k.x): eigenvalue k^T A k, minimised over nonzero integer k";
  e.fields.push_back(entry(constant_field(2, "A=I", Mat::Identity(2, 2), all_flags()), closed_lambda(1.0, why)));
  e.fields.push_back(entry(constant_field(2, "A=diag(2,1)", diag2(2, 1), all_flags()), closed_lambda(1.0, why)));
  Mat m(2, 2);
  m << 2.0, 0.5, 0.5, 1.0;
  e.fields.push_back(entry(constant_field(2, "A=[[2,.5],[.5,1]]", m, all_flags()), closed_lambda(1.0, why)));
  EndomorphismField w;
  w.name = "A=(2+cos(x))I";
  w.entries = {[](std::span<const Jet3> x) { return 2.0 + cos(x[0]); }, constant_function(0.0), constant_function(0.0),
               [](std::span<const Jet3> x) { return 2.0 + cos(x[0]); }};
  w.declared = flags(true, false, false, false, false);
  e.fields.push_back(entry(w));
  e.scalars = {make_scalar("u=cos(x)", [](std::span<const Jet3> x) { return cos(x[0]); }),
               make_scalar("u=sin(x)cos(2y)+cos(y)",
                           [](std::span<const Jet3> x) { return sin(x[0]) * cos(2.0 * x[1]) + cos(x[1]); }),
               make_scalar("u=1", constant_function(1.0))};
  return e;
}

// A = Hess(x^3 - 3 x y^2) in Cartesian components.
std::array<Jet3, 9> harmonic_cubic_hessian(const Jet3& x, const Jet3& y, const Jet3&) {
  auto S = zeros9(x);
  S[0] = 6.0 * x;
  S[1] = -6.0 * y;
  S[3] = -6.0 * y;
  S[4] = -6.0 * x;
  return S;
}

std::vector<ScalarField> planar_scalars(const Chart& c) {
  return {make_scalar("u=x", ambient_scalar(c, [](const Jet3& x, const Jet3&, const Jet3&) { return x; })),
          make_scalar("u=x^2", ambient_scalar(c, [](const Jet3& x, const Jet3&, const Jet3&) { return x * x; })),
          make_scalar("u=x^2+y^2",
                      ambient_scalar(c, [](const Jet3& x, const Jet3& y, const Jet3&) { return x * x + y * y; })),
          make_scalar("u=x^3+xy",
                      ambient_scalar(c, [](const Jet3& x, const Jet3& y, const Jet3&) { return x * x * x + x * y; })),
          make_scalar("u=sin(x)exp(y)",
                      ambient_scalar(c, [](const Jet3& x, const Jet3& y, const Jet3&) { return sin(x) * exp(y); })),
          make_scalar("u=1", constant_function(1.0))};
}

CatalogEntry build_disk() {
  CatalogEntry e;
  e.id = "disk_unit";
  e.manifold.name = e.id;
  e.manifold.dim = 2;
  e.manifold.charts = {disk_chart()};
  e.manifold.known_diameter = 2.0;
  e.manifold.curvature_constant = 0.0;
  e.provenance = "flat closed unit disk in polar coordinates: curvature 0, diameter 2";
  const Chart& c = e.manifold.charts.front();
  FieldFacts id;
  id.lambda1_dirichlet = 5.783185962946783;  // j_{0,1}^2
  id.lambda1_neumann = 3.3899577166718897;   // (j'_{1,1})^2
  id.provenance = "Bessel modes: Dirichlet J_0(j01 r), Neumann J_1(j'11 r) cos(theta)";
  e.fields.push_back(entry(constant_field(2, "A=I", Mat::Identity(2, 2), all_flags()), id));
  e.fields.push_back(entry(ambient_form_field(
      c, "A=diag(2,1)",
      [](const Jet3& x, const Jet3&, const Jet3&) {
        auto S = zeros9(x);
        S[0] = cst(x, 2.0);
        S[4] = cst(x, 1.0);
        return S;
      },
      [](const Jet3& x, const Jet3&, const Jet3&) { return cst(x, 0.0); }, all_flags())));
  e.fields.push_back(entry(ambient_form_field(c, "A=Hess(x^3-3xy^2)", harmonic_cubic_hessian,
                                              [](const Jet3& x, const Jet3&, const Jet3&) { return cst(x, 0.0); },
                                              flags(false, false, true, true, true))));
  e.scalars = planar_scalars(c);
  return e;
}

CatalogEntry build_plane_patch() {
  CatalogEntry e;
  e.id = "plane_patch";
  e.manifold.name = e.id;
  e.manifold.dim = 2;
  e.manifold.charts = {flat_chart("cartesian", {-1.0, 1.0}, {-1.0, 1.0}, false, true)};
  e.manifold.known_diameter = 2.0 * std::sqrt(2.0);
  e.manifold.curvature_constant = 0.0;
  e.provenance = "flat square [-1,1]^2 used for pointwise identities only";
  const Chart& c = e.manifold.charts.front();
  EndomorphismField ay;
  ay.name = "A=[[y,0],[0,0]]";
  ay.entries = {coordinate_function(1), constant_function(0.0), constant_function(0.0), constant_function(0.0)};
  ay.declared = flags(false, false, false, true, false);
  e.fields.push_back(entry(ay));
  EndomorphismField hx;
  hx.name = "A=Hess(x^3)";
  hx.entries = {[](std::span<const Jet3> x) { return 6.0 * x[0]; }, constant_function(0.0), constant_function(0.0),
                constant_function(0.0)};
  hx.declared = flags(false, false, true, false, false);
  e.fields.push_back(entry(hx));
  e.fields.push_back(entry(ambient_form_field(c, "A=Hess(x^3-3xy^2)", harmonic_cubic_hessian,
                                              [](const Jet3& x, const Jet3&, const Jet3&) { return cst(x, 0.0); },
                                              flags(false, false, true, true, true))));
  e.fields.push_back(entry(constant_field(2, "A=diag(2,1)", diag2(2, 1), all_flags())));
  e.scalars = planar_scalars(c);
  return e;
}

CatalogEntry build(const std::string& id) {
  if (id == "sphere_unit") return build_sphere(id, 1.0);
  if (id == "sphere_r2") return build_sphere(id, 2.0);
  if (id == "hemisphere_unit") return build_hemisphere();
  if (id == "torus_2pi") return build_torus();
  if (id == "disk_unit") return build_disk();
  if (id == "plane_patch") return build_plane_patch();
  throw UnknownName("unknown catalog entry '" + id + "'");
}

}  // namespace

std::string to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::closed: return "closed";
    case BoundaryCondition::dirichlet: return "dirichlet";
    case BoundaryCondition::neumann: return "neumann";
  }
  return "closed";
}

BoundaryCondition parse_boundary_condition(const std::string& s) {
  if (s == "closed") return BoundaryCondition::closed;
  if (s == "dirichlet") return BoundaryCondition::dirichlet;
  if (s == "neumann") return BoundaryCondition::neumann;
  throw UnknownName("unknown boundary condition '" + s + "'");
}

const FieldEntry& CatalogEntry::field(const std::string& name) const {
  for (const auto& f : fields)
    if (f.field.name == name) return f;
  throw UnknownName("entry " + id + " has no field '" + name + "'");
}

const ScalarField& CatalogEntry::scalar(const std::string& name) const {
  for (const auto& s : scalars)
    if (s.name == name) return s;
  throw UnknownName("entry " + id + " has no scalar field '" + name + "'");
}

std::vector<std::string> catalog_ids() {
  return {"sphere_unit", "sphere_r2", "torus_2pi", "disk_unit", "hemisphere_unit", "plane_patch"};
}

CaseRef split_case_id(const std::string& case_id) {
  const auto slash = case_id.find('/');
  if (slash == std::string::npos) return {case_id, ""};
  return {case_id.substr(0, slash), case_id.substr(slash + 1)};
}

CatalogEntry instantiate(const std::string& id, bool verify) {
  const CaseRef ref = split_case_id(id);
  CatalogEntry e = build(ref.entry);
  if (!ref.field.empty()) {
    FieldEntry keep = e.field(ref.field);
    e.fields = {keep};
  }
  if (verify) {
    const auto samples = sample_chart_points(e.manifold, 200, 0x5eed2024ULL);
    for (const auto& f : e.fields) {
      const StructureReport r = structure_check(e.manifold, f.field, samples);
      if (!(r.flags == f.field.declared)) {
        throw HypothesisViolation("catalog field " + e.id + "/" + f.field.name + " declares {" +
                                  format_flags(f.field.declared) + "} but structure_check finds {" +
                                  format_flags(r.flags) + "}");
      }
    }
  }
  return e;
}

std::vector<std::string> catalog_case_ids() {
  std::vector<std::string> out;
  for (const auto& id : catalog_ids()) {
    const CatalogEntry e = build(id);
    for (const auto& f : e.fields) out.push_back(id + "/" + f.field.name);
  }
  return out;
}

std::optional<double> analytic_lambda1(const CatalogEntry& entry, const std::string& field,
                                       std::optional<BoundaryCondition> bc) {
  const FieldFacts& f = entry.field(field).facts;
  if (!entry.manifold.has_boundary()) return f.lambda1_closed;
  const BoundaryCondition b = bc.value_or(BoundaryCondition::dirichlet);
  if (b == BoundaryCondition::neumann) return f.lambda1_neumann;
  if (b == BoundaryCondition::dirichlet) return f.lambda1_dirichlet;
  return std::nullopt;
}

std::vector<std::string> zoo_listing() {
  std::vector<std::string> lines;
  for (const auto& id : catalog_ids()) {
    const CatalogEntry e = build(id);
    for (const auto& f : e.fields) {
      std::string known = "unknown";
      if (auto l = analytic_lambda1(e, f.field.name)) known = fmt(*l);
      lines.push_back(id + "/" + f.field.name + "\t" + std::to_string(e.manifold.dim) + "\t" +
                      format_flags(f.field.declared) + "\t" + known);
    }
  }
  return lines;
}

Chart sphere_chart(double r) {
  Chart c;
  c.name = "spherical";
  c.box = {{0.0, kPi}, {0.0, 2.0 * kPi}};
  c.periodic = {false, true};
  const double r2 = r * r;
  c.metric = {constant_function(r2), constant_function(0.0), constant_function(0.0),
              [r2](std::span<const Jet3> x) { return r2 * square(sin(x[0])); }};
  c.embedding = {[r](std::span<const Jet3> x) { return r * sin(x[0]) * cos(x[1]); },
                 [r](std::span<const Jet3> x) { return r * sin(x[0]) * sin(x[1]); },
                 [r](std::span<const Jet3> x) { return r * cos(x[0]); }};
  c.embedding_jacobian = {[r](std::span<const Jet3> x) { return r * cos(x[0]) * cos(x[1]); },
                          [r](std::span<const Jet3> x) { return -r * sin(x[0]) * sin(x[1]); },
                          [r](std::span<const Jet3> x) { return r * cos(x[0]) * sin(x[1]); },
                          [r](std::span<const Jet3> x) { return r * sin(x[0]) * cos(x[1]); },
                          [r](std::span<const Jet3> x) { return -r * sin(x[0]); },
                          constant_function(0.0)};
  c.locate = {[](std::span<const Jet3> a) { return acos(a[2] / sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])); },
              [](std::span<const Jet3> a) { return atan2(a[1], a[0]); }};
  return c;
}

Chart sphere_chart_rotated(double r) {
  Chart c;
  c.name = "spherical-x-pole";
  c.box = {{0.0, kPi}, {0.0, 2.0 * kPi}};
  c.periodic = {false, true};
  const double r2 = r * r;
  c.metric = {constant_function(r2), constant_function(0.0), constant_function(0.0),
              [r2](std::span<const Jet3> x) { return r2 * square(sin(x[0])); }};
  c.embedding = {[r](std::span<const Jet3> x) { return r * cos(x[0]); },
                 [r](std::span<const Jet3> x) { return r * sin(x[0]) * cos(x[1]); },
                 [r](std::span<const Jet3> x) { return r * sin(x[0]) * sin(x[1]); }};
  c.embedding_jacobian = {[r](std::span<const Jet3> x) { return -r * sin(x[0]); },
                          constant_function(0.0),
                          [r](std::span<const Jet3> x) { return r * cos(x[0]) * cos(x[1]); },
                          [r](std::span<const Jet3> x) { return -r * sin(x[0]) * sin(x[1]); },
                          [r](std::span<const Jet3> x) { return r * cos(x[0]) * sin(x[1]); },
                          [r](std::span<const Jet3> x) { return r * sin(x[0]) * cos(x[1]); }};
  c.locate = {[](std::span<const Jet3> a) { return acos(a[0] / sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])); },
              [](std::span<const Jet3> a) { return atan2(a[2], a[1]); }};
  return c;
}

ChartFunction ambient_scalar(const Chart& c, Ambient3 f) {
  if (!c.embedded()) throw ContractViolation("ambient_scalar needs an embedded chart");
  auto emb = c.embedding;
  return [emb, f](std::span<const Jet3> x) { return f(emb[0](x), emb[1](x), emb[2](x)); };
}

EndomorphismField ambient_form_field(const Chart& c, std::string name,
                                     std::function<std::array<Jet3, 9>(const Jet3&, const Jet3&, const Jet3&)> S,
                                     Ambient3 s, StructureFlags declared) {
  if (!c.embedded() || c.embedding_jacobian.empty() || c.dim() != 2)
    throw ContractViolation("ambient_form_field needs a 2-d chart with an explicit embedding Jacobian");
  auto emb = c.embedding;
  auto jac = c.embedding_jacobian;
  auto met = c.metric;
  EndomorphismField f;
  f.name = std::move(name);
  f.declared = declared;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      f.entries.push_back([=](std::span<const Jet3> x) {
        const Jet3 X = emb[0](x), Y = emb[1](x), Z = emb[2](x);
        const std::array<Jet3, 9> Sm = S(X, Y, Z);
        // W = J^T S J (lower indices), then A = g^{-1} W + s I.
        std::array<Jet3, 6> J;
        for (int k = 0; k < 6; ++k) J[static_cast<std::size_t>(k)] = jac[static_cast<std::size_t>(k)](x);
        auto W = [&](int i, int j) {
          Jet3 acc = Jet3::constant(x.front().dim(), 0.0);
          for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q)
              acc += J[static_cast<std::size_t>(p * 2 + i)] * Sm[static_cast<std::size_t>(p * 3 + q)] *
                     J[static_cast<std::size_t>(q * 2 + j)];
          return acc;
        };
        const Jet3 g00 = met[0](x), g01 = met[1](x), g11 = met[3](x);
        const Jet3 det = g00 * g11 - g01 * g01;
        // inverse of [[g00, g01], [g01, g11]] is [[g11, -g01], [-g01, g00]] / det
        const Jet3 ginv_a0 = (a == 0 ? g11 : -g01) / det;
        const Jet3 ginv_a1 = (a == 0 ? -g01 : g00) / det;
        Jet3 out = ginv_a0 * W(0, b) + ginv_a1 * W(1, b);
        if (a == b) out += s(X, Y, Z);
        return out;
      });
    }
  }
  return f;
}

EndomorphismField constant_field(int dim, std::string name, const Mat& A, StructureFlags declared) {
  if (A.rows() != dim || A.cols() != dim) throw ContractViolation("constant_field: matrix size mismatch");
  EndomorphismField f;
  f.name = std::move(name);
  f.declared = declared;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) f.entries.push_back(constant_function(A(a, b)));
  return f;
}

}  // namespace reilly
