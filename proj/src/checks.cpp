#include "reilly/checks.hpp"

#include <cmath>

#include "reilly/errors.hpp"
#include "reilly/identities.hpp"
#include "reilly/parallel.hpp"
#include "reilly/sampling.hpp"

namespace reilly {

namespace {

std::vector<std::string> entry_fields(const CatalogEntry& e, const std::string& id) {
  std::vector<std::string> out;
  if (id.find('/') != std::string::npos) {
    out.push_back(split_case_id(id).field);
    return out;
  }
  for (const auto& f : e.fields) out.push_back(f.field.name);
  return out;
}

}  // namespace

std::vector<IdentityRow> check_identities(const std::string& id, const IdentityCheckOptions& opt) {
  if (opt.points < 1) throw ContractViolation("points must be >= 1");
  const std::string entry_id = id.find('/') != std::string::npos ? split_case_id(id).entry : id;
  const CatalogEntry e = instantiate(entry_id, false);
  const ChartManifold& m = e.manifold;
  const std::vector<ChartPoint> pts = sample_chart_points(m, opt.points, opt.seed);

  struct Job {
    std::string field, identity, scalar;
  };
  std::vector<Job> jobs;
  for (const std::string& fname : entry_fields(e, id)) {
    const EndomorphismField& A = e.field(fname).field;
    for (const auto& u : e.scalars) jobs.push_back({fname, "bochner", u.name});
    if (A.declared.parallel)
      for (const auto& u : e.scalars) jobs.push_back({fname, "bochner_parallel", u.name});
    jobs.push_back({fname, "ricci_commutation", ""});
    jobs.push_back({fname, "torsion_swap", ""});
    if (A.declared.codazzi) {
      jobs.push_back({fname, "deltaA", ""});
      for (const auto& u : e.scalars) jobs.push_back({fname, "nabla_nabla_u", u.name});
    }
  }

  std::vector<IdentityRow> rows;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const EndomorphismField& A = e.field(job.field).field;
    const std::vector<double> res = parallel_map<double>(
        pts.size(),
        [&](std::size_t k) {
          const ChartPoint& p = pts[k];
          if (job.identity == "bochner") return bochner_residual(m, A, e.scalar(job.scalar), p).relative();
          if (job.identity == "bochner_parallel") return bochner_parallel_residual(m, A, e.scalar(job.scalar), p).relative();
          if (job.identity == "nabla_nabla_u") return nabla_nabla_u_residual(m, A, e.scalar(job.scalar), p).relative();
          // Tangent vectors depend only on (seed, job, point), not on scheduling.
          SeededRng rng(opt.seed ^ (0x9e3779b97f4a7c15ULL * (j + 1)) ^ (k << 20));
          const LocalGeometry geo(m, p);
          const Vec X = random_tangent(geo, rng), Y = random_tangent(geo, rng), Z = random_tangent(geo, rng);
          if (job.identity == "ricci_commutation") return ricci_commutation_residual(m, A, p, X, Y, Z).relative();
          if (job.identity == "torsion_swap") return torsion_swap_residual(m, A, p, X, Y, Z).relative();
          return deltaA_identity_residual(m, A, p, X).relative();
        },
        opt.threads);
    for (std::size_t k = 0; k < res.size(); ++k)
      rows.push_back({entry_id + "/" + job.field, job.identity, job.scalar, static_cast<int>(k), res[k],
                      res[k] <= opt.tolerance});
  }
  return rows;
}

TraceSweep trace_inequality_sweep(int pairs, std::uint64_t seed) {
  SeededRng rng(seed);
  TraceSweep s;
  s.pairs = pairs;
  for (int k = 0; k < pairs; ++k) {
    const int n = 2 + static_cast<int>(rng.bits() % 5);
    Mat G(n, n), F(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        G(i, j) = rng.normal();
        F(i, j) = rng.normal();
      }
    const Mat A = G * G.transpose();
    const Mat Fs = 0.5 * (F + F.transpose());
    const double scale = 1.0 + std::abs((A * Fs * Fs).trace());
    const double slack = trace_inequality_slack(A, Fs);
    if (slack < -1e-12 * scale) ++s.violations;
    s.worst_relative = std::min(s.worst_relative, slack / scale);
    const double c = rng.normal();
    const double scalar = trace_inequality_slack(A, c * Mat::Identity(n, n));
    s.scalar_max_slack = std::max(s.scalar_max_slack, std::abs(scalar) / (1.0 + std::abs(c * c * A.trace())));
  }
  return s;
}

}  // namespace reilly
