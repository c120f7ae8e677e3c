#pragma once

// Catalog-wide identity sweeps: every applicable pointwise identity of a case,
// evaluated at seeded sample points.

#include <cstdint>
#include <string>
#include <vector>

#include "reilly/zoo.hpp"

namespace reilly {

struct IdentityRow {
  std::string case_id;   // "<entry>/<field>"
  std::string identity;  // bochner, bochner_parallel, ricci_commutation, torsion_swap, deltaA, nabla_nabla_u
  std::string scalar;    // test function name, empty for field-only identities
  int point = 0;
  double relative_residual = 0.0;
  bool pass = false;
};

struct IdentityCheckOptions {
  int points = 100;
  std::uint64_t seed = 0xb0c4;
  double tolerance = 1e-7;
  int threads = 0;
};

/// `id` is an entry id (all its fields) or a case id.  Identities whose hypotheses the
/// field does not declare (parallel for bochner_parallel, Codazzi for deltaA and
/// nabla_nabla_u) are skipped.
std::vector<IdentityRow> check_identities(const std::string& id, const IdentityCheckOptions& opt = {});

struct TraceSweep {
  int pairs = 0;
  int violations = 0;        // slack below -1e-12 (1 + |Trace(A F^2)|)
  double worst_relative = 0.0;
  double scalar_max_slack = 0.0;  // max |slack| with F a multiple of the identity
};

/// Random A = G G^T and symmetric F in dimensions 2..6.
TraceSweep trace_inequality_sweep(int pairs, std::uint64_t seed);

}  // namespace reilly
