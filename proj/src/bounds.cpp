#include "reilly/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "reilly/boundary.hpp"
#include "reilly/errors.hpp"
#include "reilly/sampling.hpp"

namespace reilly {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Constant lower(double raw, double margin) { return {raw, raw - margin * std::abs(raw)}; }
Constant upper(double raw, double margin) { return {raw, raw + margin * std::abs(raw)}; }

double min_eig(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eig(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// Unit directions in frame coordinates: a 720-step circle in dimension 2, seeded
/// random directions otherwise.
std::vector<Vec> unit_directions(int n, std::uint64_t seed) {
  std::vector<Vec> out;
  if (n == 2) {
    for (int k = 0; k < 720; ++k) {
      const double t = 2 * std::numbers::pi * k / 720;
      out.push_back(Vec::Unit(2, 0) * std::cos(t) + Vec::Unit(2, 1) * std::sin(t));
    }
    return out;
  }
  SeededRng rng(seed);
  for (int k = 0; k < 2000; ++k) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
    out.push_back(v.normalized());
  }
  return out;
}

void check_denominator(double d, const char* what) {
  if (!(d > 0.0)) throw HypothesisViolation(std::string("bound denominator is not positive: ") + what);
}

}  // namespace

double li_yau_bound(double delta1, double diameter, double trace, double K) {
  const double a = delta1 * delta1 / (diameter * diameter * trace);
  if (!(a > 0.0)) throw HypothesisViolation("Li-Yau bound needs delta1 > 0 and finite diameter");
  return 2.0 * (a + std::sqrt(a * a + K * a)) * std::exp(-1.0 - std::sqrt(1.0 + K / a));
}

TheoremConstants estimate_constants(const ChartManifold& m, const EndomorphismField& A, const ConstantOptions& opt) {
  if (opt.samples < 100) throw ContractViolation("estimate_constants needs at least 100 samples");
  const std::vector<ChartPoint> pts = sample_chart_points(m, opt.samples, opt.seed);
  if (pts.empty()) throw ContractViolation("no sample points");
  TheoremConstants c;
  c.n = m.dim;
  c.samples = static_cast<int>(pts.size());
  c.margin = opt.margin;
  c.structure = structure_check(m, A, pts);
  if (!c.structure.flags.self_adjoint)
    throw HypothesisViolation("field " + A.name + " is not self-adjoint (violation " +
                              std::to_string(c.structure.self_adjoint_violation) + ")");

  double tmin = kInf, tmax = -kInf, d1 = kInf, dn = -kInf, kg = kInf, ka = kInf, kneg = kInf, kax = kInf, kmix = kInf,
         kprime = 0.0, dgrad = -kInf;
  bool pd = true;
  const std::vector<Vec> dirs = unit_directions(m.dim, opt.seed);
  for (const ChartPoint& p : pts) {
    const LocalGeometry geo(m, p);
    const EndomorphismJets e = endomorphism_jets(geo, A);
    const Mat& F = geo.frame();
    const Mat Am = e.value();
    const Mat Af = geo.to_frame(Am);
    const Mat As = 0.5 * (Af + Af.transpose());
    tmin = std::min(tmin, e.trace.value());
    tmax = std::max(tmax, e.trace.value());
    const double lo = min_eig(As);
    d1 = std::min(d1, lo);
    dn = std::max(dn, max_eig(As));
    pd = pd && lo > 0.0;

    const Mat ricA = F.transpose() * geo.ric_A_matrix(Am) * F;
    const Mat ricAX = F.transpose() * (geo.ric_A_matrix(Mat::Identity(m.dim, m.dim)) * Am) * F;
    const Mat rA = 0.5 * (ricA + ricA.transpose()), rX = 0.5 * (ricAX + ricAX.transpose());
    kg = std::min(kg, min_eig(rA));
    kax = std::min(kax, min_eig(rX));
    kmix = std::min(kmix, min_eig(0.5 * (rA + rX)));
    if (lo > 0.0) {
      Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(rA, As, Eigen::EigenvaluesOnly);
      ka = std::min(ka, ges.eigenvalues().minCoeff());
    }

    double fro = 0.0;
    for (int i = 0; i < m.dim; ++i)
      for (int j = 0; j < m.dim; ++j)
        for (int k = 0; k < m.dim; ++k) fro += std::pow(geo.norm(e.d2A_apply(F.col(i), F.col(j), F.col(k))), 2);
    kprime = std::max(kprime, std::sqrt(fro));
    for (const Vec& u : dirs) {
      const Vec X = F * u;
      dgrad = std::max(dgrad, geo.inner(X, e.nabla(X) * X));
    }
    kneg = std::min(kneg, min_eig(rA));
  }
  const double mg = opt.margin;
  c.trace = upper(tmax, mg);
  c.trace_min = tmin;
  c.trace_spread = tmax - tmin;
  c.delta1 = lower(d1, mg);
  c.deltan = upper(dn, mg);
  c.K_g = lower(kg, mg);
  if (pd) c.K_A = lower(ka, mg);
  c.K_neg = upper(std::max(0.0, -kneg), mg);
  c.K_neg_ric_AX = upper(std::max(0.0, -kax), mg);
  c.K_mixed = lower(kmix, mg);
  c.K_B = lower(kax, mg);
  c.K_prime = upper(kprime, mg);
  c.delta_grad = upper(dgrad, mg);

  if (opt.diameter) {
    c.diameter = upper(*opt.diameter, mg);
    c.diameter_source = "option";
  } else if (m.known_diameter) {
    c.diameter = upper(*m.known_diameter, mg);
    c.diameter_source = "catalog";
  } else {
    throw ContractViolation("no diameter for " + m.name + "; pass one explicitly");
  }

  c.has_boundary = m.has_boundary();
  if (c.has_boundary) {
    const Chart& ch = m.primary();
    const int axis = ch.boundary->axis;
    c.min_boundary_curvature = kInf;
    for (int k = 0; k < opt.boundary_samples; ++k) {
      Vec face(m.dim - 1);
      for (int i = 0, f = 0; i < m.dim; ++i) {
        if (i == axis) continue;
        const Interval iv = ch.box[static_cast<std::size_t>(i)];
        const double s = ch.periodic[static_cast<std::size_t>(i)] ? static_cast<double>(k) / opt.boundary_samples
                                                                  : (k + 0.5) / opt.boundary_samples;
        face(f++) = iv.lo + s * iv.width();
      }
      const ChartPoint bp = boundary_point(m, face);
      const BoundaryGeometry bg = boundary_geometry(m, bp);
      const LocalGeometry geo(m, bp);
      const Mat Am = endomorphism_jets(geo, A).value();
      const Vec An = Am * bg.normal;
      const Vec off = An - geo.inner(An, bg.normal) * bg.normal;
      c.normal_eigen_violation = std::max(c.normal_eigen_violation, geo.norm(off));
      const Mat second = bg.tangent_frame.transpose() * bg.metric * (bg.sigma * bg.shape) * bg.tangent_frame;
      c.min_boundary_curvature = std::min(c.min_boundary_curvature, min_eig(second));
    }
  }
  return c;
}

TheoremConstants estimate_constants(const CatalogEntry& entry, const std::string& field, const ConstantOptions& opt) {
  const EndomorphismField& A = entry.field(field).field;
  if (opt.diameter || entry.manifold.known_diameter) return estimate_constants(entry.manifold, A, opt);
  ConstantOptions o = opt;
  o.diameter = mesh_diameter(build_mesh(entry, opt.diameter_refine), entry.manifold);
  TheoremConstants c = estimate_constants(entry.manifold, A, o);
  c.diameter_source = "mesh";
  return c;
}

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::thm11a: return "thm11a";
    case Theorem::thm11b: return "thm11b";
    case Theorem::thm12: return "thm12";
    case Theorem::thm14: return "thm14";
    case Theorem::thm15: return "thm15";
    case Theorem::thm16: return "thm16";
    case Theorem::corollaryDN: return "corollaryDN";
  }
  return "?";
}

std::vector<Theorem> all_theorems() {
  return {Theorem::thm11a, Theorem::thm11b, Theorem::thm12, Theorem::thm14,
          Theorem::thm15,  Theorem::thm16,  Theorem::corollaryDN};
}

Theorem parse_theorem(const std::string& s) {
  for (Theorem t : all_theorems())
    if (to_string(t) == s) return t;
  throw UnknownName("unknown theorem '" + s + "'");
}

BoundValue bound_value(Theorem t, const TheoremConstants& c, BoundaryCondition bc) {
  const StructureFlags& f = c.structure.flags;
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw HypothesisViolation(to_string(t) + " requires " + what);
  };
  require(f.positive_semidefinite && c.delta1.raw > 0.0, "a positive definite field (delta1 > 0)");
  if (t == Theorem::corollaryDN) {
    require(c.has_boundary, "a manifold with boundary");
    require(bc != BoundaryCondition::closed, "a dirichlet or neumann condition");
  } else {
    require(!c.has_boundary, "a closed manifold");
  }
  switch (t) {
    case Theorem::thm11a:
    case Theorem::thm11b:
    case Theorem::thm12:
    case Theorem::corollaryDN: require(f.parallel, "a parallel field"); break;
    case Theorem::thm14:
    case Theorem::thm15: require(f.codazzi && f.trace_constant, "a Codazzi field of constant trace"); break;
    case Theorem::thm16: require(f.divergence_free, "a divergence-free field"); break;
  }
  if (t == Theorem::corollaryDN) {
    require(c.normal_eigen_violation <= kStructureTolerance, "the outward normal to be an eigenvector of A");
    if (bc == BoundaryCondition::dirichlet) require(c.min_boundary_curvature >= -kStructureTolerance, "a convex boundary");
  }

  BoundValue b;
  b.theorem = t;
  auto not_met = [&](const std::string& why) {
    b.hypothesis_met = false;
    b.reason = why;
    return b;
  };
  auto lich = [](double trace, double delta1, double K) {
    check_denominator(trace - delta1, "Trace(A) - delta1");
    return trace * K / (trace - delta1);
  };
  switch (t) {
    case Theorem::thm11a:
    case Theorem::corollaryDN:
      b.K_used = c.K_g.raw;
      if (!(c.K_g.raw > 0.0)) return not_met("Ric_A >= K g needs K > 0 (sampled K = " + std::to_string(c.K_g.raw) + ")");
      b.value = lich(c.trace.raw, c.delta1.raw, c.K_g.raw);
      b.conservative = c.K_g.safe > 0.0 ? lich(c.trace.safe, c.delta1.safe, c.K_g.safe) : 0.0;
      return b;
    case Theorem::thm11b:
      if (!c.K_A || !(c.K_A->raw > 0.0)) return not_met("Ric_A >= K <A.,.> needs K > 0");
      b.K_used = c.K_A->raw;
      b.value = c.delta1.raw * lich(c.trace.raw, c.delta1.raw, c.K_A->raw);
      b.conservative = c.K_A->safe > 0.0 ? c.delta1.safe * lich(c.trace.safe, c.delta1.safe, c.K_A->safe) : 0.0;
      return b;
    case Theorem::thm12:
      b.K_used = c.K_neg.raw;
      b.value = li_yau_bound(c.delta1.raw, c.diameter.raw, c.trace.raw, c.K_neg.raw);
      b.conservative = li_yau_bound(c.delta1.safe, c.diameter.safe, c.trace.safe, c.K_neg.safe);
      return b;
    case Theorem::thm14:
      b.K_used = c.K_mixed.raw;
      if (!(c.K_mixed.raw > 0.0)) return not_met("Ric_A(X,X) + Ric(X,AX) >= 2K needs K > 0");
      b.value = lich(c.trace.raw, c.delta1.raw, c.K_mixed.raw);
      b.conservative = c.K_mixed.safe > 0.0 ? lich(c.trace.safe, c.delta1.safe, c.K_mixed.safe) : 0.0;
      return b;
    case Theorem::thm15: {
      const double k_raw = c.K_neg_ric_AX.raw + 2 * c.K_prime.raw + std::max(0.0, c.delta_grad.raw);
      const double k_safe = c.K_neg_ric_AX.safe + 2 * c.K_prime.safe + std::max(0.0, c.delta_grad.safe);
      b.K_used = k_raw;
      b.value = li_yau_bound(c.delta1.raw, c.diameter.raw, c.trace.raw, k_raw);
      b.conservative = li_yau_bound(c.delta1.safe, c.diameter.safe, c.trace.safe, k_safe);
      return b;
    }
    case Theorem::thm16: {
      const double n = c.n;
      check_denominator(n * c.deltan.raw - c.delta1.raw, "n deltan - delta1");
      b.K_used = c.K_B.raw;
      b.value = n * c.deltan.raw * (c.K_B.raw + 2 * n * c.K_prime.raw) / (n * c.deltan.raw - c.delta1.raw);
      b.conservative = n * c.deltan.safe * (c.K_B.safe + 2 * n * c.K_prime.safe) / (n * c.deltan.safe - c.delta1.safe);
      return b;
    }
  }
  return b;
}

BoundReport verify_bound(double lambda1, const BoundValue& bound, double tolerance) {
  BoundReport r;
  r.theorem = bound.theorem;
  r.bound = bound;
  r.lambda1 = lambda1;
  r.tolerance = tolerance;
  if (!bound.hypothesis_met) {
    r.verdict = "hypothesis not met";
    return r;
  }
  r.margin = lambda1 - bound.value;
  r.verdict = lambda1 >= bound.value * (1.0 - tolerance) ? "PASS" : "FAIL";
  r.near_equality = r.margin <= 0.02 * lambda1;
  return r;
}

BoundReport run_bound(const std::string& case_id, Theorem t, const BoundRunOptions& opt) {
  const CaseRef ref = split_case_id(case_id);
  const CatalogEntry e = instantiate(ref.entry, false);
  const FieldEntry& fe = e.field(ref.field);
  const BoundaryCondition bc = opt.bc.value_or(e.manifold.has_boundary() ? BoundaryCondition::dirichlet
                                                                          : BoundaryCondition::closed);
  ConstantOptions co;
  co.samples = opt.points;
  co.seed = opt.seed;
  const TheoremConstants c = estimate_constants(e, ref.field, co);

  BoundReport r;
  BoundValue b;
  b.theorem = t;
  try {
    b = bound_value(t, c, bc);
  } catch (const HypothesisViolation& ex) {
    b.hypothesis_met = false;
    b.reason = ex.what();
  }
  if (b.hypothesis_met) {
    const TriMesh mesh = build_mesh(e, opt.refine);
    const FemSystem sys = assemble(mesh, e.manifold, fe.field, opt.threads);
    EigenOptions eo;
    eo.seed = opt.seed;
    const EigenResult eig = lowest_eigenpairs(sys.K, sys.M, bc == BoundaryCondition::dirichlet ? 2 : 4, bc, mesh.boundary, eo);
    r = verify_bound(eig.lambda1(), b, opt.tolerance);
    r.residual = eig.residuals.at(static_cast<std::size_t>(eig.lambda1_index()));
  } else {
    r = verify_bound(0.0, b, opt.tolerance);
  }
  r.case_id = case_id;
  r.bc = bc;
  r.constants = c;
  return r;
}

}  // namespace reilly
