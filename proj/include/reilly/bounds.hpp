#pragma once

// Sampled theorem constants and the first-eigenvalue lower bounds built from them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reilly/identities.hpp"
#include "reilly/spectral.hpp"
#include "reilly/zoo.hpp"

namespace reilly {

/// Sampled extremum and the same value moved by the safety margin in the direction
/// that weakens the bound (min-type down, max-type up).
struct Constant {
  double raw = 0.0;
  double safe = 0.0;
};

struct TheoremConstants {
  int n = 0;
  int samples = 0;
  double margin = 0.01;
  Constant trace;             // max over samples
  double trace_min = 0.0;
  double trace_spread = 0.0;
  Constant delta1, deltan;
  Constant K_g;               // Ric_A >= K g
  std::optional<Constant> K_A;  // Ric_A >= K <A., .>; empty when A is not positive definite
  Constant K_neg;             // Ric_A >= -K, K >= 0
  Constant K_neg_ric_AX;      // Ric(X, AX) >= -K |X|^2, K >= 0
  Constant K_mixed;           // (Ric_A(X,X) + Ric(X,AX)) / 2 >= K |X|^2
  Constant K_B;               // Ric(X, AX) >= K |X|^2
  Constant K_prime;           // sup |nabla^2 A| (Frobenius norm in an orthonormal frame)
  Constant delta_grad;        // max over unit X of <X, (nabla_X A) X>
  Constant diameter;
  std::string diameter_source;  // "catalog" or "mesh"
  StructureReport structure;
  // Boundary data, filled only on manifolds with boundary.
  bool has_boundary = false;
  double normal_eigen_violation = 0.0;  // max |A n - <A n, n> n|
  double min_boundary_curvature = 0.0;  // min eigenvalue of <nabla_X n, Y> on the boundary
};

struct ConstantOptions {
  int samples = 200;
  std::uint64_t seed = 0xc0ffee;
  double margin = 0.01;
  std::optional<double> diameter;  // overrides catalog and mesh values
  int diameter_refine = 3;         // mesh level when the catalog has no diameter
  int boundary_samples = 64;
};

/// Throws ContractViolation for fewer than 100 samples, HypothesisViolation for a
/// field that is not self-adjoint.
TheoremConstants estimate_constants(const ChartManifold& m, const EndomorphismField& A, const ConstantOptions& opt = {});
TheoremConstants estimate_constants(const CatalogEntry& entry, const std::string& field, const ConstantOptions& opt = {});

enum class Theorem { thm11a, thm11b, thm12, thm14, thm15, thm16, corollaryDN };
std::string to_string(Theorem t);
Theorem parse_theorem(const std::string& s);
std::vector<Theorem> all_theorems();

struct BoundValue {
  Theorem theorem = Theorem::thm11a;
  bool hypothesis_met = true;
  std::string reason;         // why the hypothesis is not met
  double value = 0.0;         // formula on the raw constants
  double conservative = 0.0;  // formula on the margin-adjusted constants
  double K_used = 0.0;        // the curvature constant that entered the formula
};

/// Structural hypotheses that fail throw HypothesisViolation; a non-positive curvature
/// constant for thm11a, thm11b, thm14 and corollaryDN gives hypothesis_met = false.
BoundValue bound_value(Theorem t, const TheoremConstants& c, BoundaryCondition bc = BoundaryCondition::dirichlet);

/// Li-Yau type expression 2(a + sqrt(a^2 + K a)) exp(-1 - sqrt(1 + K / a)),
/// a = delta1^2 / (d^2 Trace A).
double li_yau_bound(double delta1, double diameter, double trace, double K);

struct BoundReport {
  std::string case_id;
  Theorem theorem = Theorem::thm11a;
  BoundaryCondition bc = BoundaryCondition::closed;
  TheoremConstants constants;
  BoundValue bound;
  double lambda1 = 0.0;
  double residual = 0.0;
  double tolerance = 0.02;
  std::string verdict;  // "PASS", "FAIL" or "hypothesis not met"
  double margin = 0.0;  // lambda1 - bound
  bool near_equality = false;
};

/// PASS iff lambda1 >= bound (1 - tolerance); near equality when margin <= 0.02 lambda1.
BoundReport verify_bound(double lambda1, const BoundValue& bound, double tolerance = 0.02);

struct BoundRunOptions {
  int refine = 4;
  int points = 200;
  std::uint64_t seed = 0xc0ffee;
  double tolerance = 0.02;
  std::optional<BoundaryCondition> bc;  // default: closed, or dirichlet with boundary
  int threads = 0;
};

/// Constants, bound and FEM lambda_1 for one case.  Structural hypothesis failures are
/// reported as "hypothesis not met" instead of throwing.
BoundReport run_bound(const std::string& case_id, Theorem t, const BoundRunOptions& opt = {});

}  // namespace reilly
