#pragma once

// JSON-configured run orchestration shared by the CLI and the acceptance binary.
//
// Config schema "reilly-lab-suite/1":
//   { "schema": "reilly-lab-suite/1", "output": "report.json", "format": "json" | "csv",
//     "runs": [ { "command": "identities" | "reilly" | "eigen" | "bounds" | "trace_inequality",
//                 "case": "<entry>[/<field>]", "parameters": {...}, "tolerances": {...}, "seed": 7 } ] }
// Unknown keys anywhere are rejected.  Reports carry no timings; those go to a
// separate metadata object.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace reilly {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSuiteSchema = "reilly-lab-suite/1";
inline constexpr const char* kReportSchema = "reilly-lab-report/1";

/// Malformed configuration (unknown key, wrong type, missing field).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 17 significant digits, '.' decimal point, independent of the global locale.
std::string format_double(double v);
/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_escape(const std::string& s);

struct IdentityRunParams {
  int points = 100;
  double tolerance = 1e-7;
};
struct ReillyRunParams {
  std::string u;
  int quad = 16;
  std::string sigma = "auto";  // "auto", "+1" or "-1"
  std::string form = "default";
  double tolerance = 1e-6;
};
struct EigenRunParams {
  int refine = 4;
  std::optional<std::string> bc;
  int k = 6;
  bool dense = false;
  double lambda_tolerance = 0.01;
  double residual_tolerance = 1e-8;
};
struct BoundsRunParams {
  std::string theorem;
  int refine = 4;
  int points = 200;
  std::optional<std::string> bc;
  double tolerance = 0.02;
};

// Each returns a report object with a "status" of "pass", "fail" or "skipped".
Json run_identities(const std::string& case_id, const IdentityRunParams& p, std::uint64_t seed, int threads);
Json run_reilly(const std::string& case_id, const ReillyRunParams& p, int threads);
Json run_eigen(const std::string& case_id, const EigenRunParams& p, std::uint64_t seed, int threads);
Json run_bounds(const std::string& case_id, const BoundsRunParams& p, std::uint64_t seed, int threads);
Json run_trace_inequality(int pairs, std::uint64_t seed);

/// Shape sign from the flat-disk oracle (A = I, u = x^2).
int oracle_shape_sign();

struct SuiteOutcome {
  Json report;
  Json meta;
  int exit_code = 0;  // 0 all pass or skipped, 1 numerical failure, 2 unknown name
  std::string message;
  std::string format = "json";
  std::string output;  // from the config; may be empty
};

/// Throws ConfigError.
Json parse_suite_config(const std::string& text);
SuiteOutcome run_suite(const Json& config, std::uint64_t seed, int threads);
/// Report rendered in the configured format.
std::string render_report(const SuiteOutcome& o);

}  // namespace reilly
