#include "reilly/suite.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <locale>
#include <map>
#include <set>
#include <sstream>

#include "reilly/boundary.hpp"
#include "reilly/bounds.hpp"
#include "reilly/checks.hpp"
#include "reilly/errors.hpp"
#include "reilly/spectral.hpp"

namespace reilly {

std::string format_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

namespace {

const char* status(bool pass) { return pass ? "pass" : "fail"; }

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

BoundaryCondition default_bc(const CatalogEntry& e, const std::optional<std::string>& bc) {
  if (bc) return parse_boundary_condition(*bc);
  return e.manifold.has_boundary() ? BoundaryCondition::dirichlet : BoundaryCondition::closed;
}

}  // namespace

int oracle_shape_sign() {
  const CatalogEntry d = instantiate("disk_unit", false);
  return determine_shape_sign(d.manifold, d.field("A=I").field, d.scalar("u=x^2"), 16).sigma;
}

Json run_identities(const std::string& case_id, const IdentityRunParams& p, std::uint64_t seed, int threads) {
  IdentityCheckOptions o;
  o.points = p.points;
  o.seed = seed;
  o.tolerance = p.tolerance;
  o.threads = threads;
  const std::vector<IdentityRow> rows = check_identities(case_id, o);
  // Aggregate per (case, identity, scalar) in first-seen order.
  Json groups = Json::array();
  std::map<std::string, std::size_t> index;
  bool all = true;
  for (const IdentityRow& r : rows) {
    const std::string key = r.case_id + "|" + r.identity + "|" + r.scalar;
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      groups.push_back({{"case", r.case_id}, {"identity", r.identity}, {"scalar", r.scalar}, {"points", 0},
                        {"worst_relative_residual", 0.0}, {"failures", 0}});
    }
    Json& g = groups[it->second];
    g["points"] = g["points"].get<int>() + 1;
    g["worst_relative_residual"] = std::max(g["worst_relative_residual"].get<double>(), r.relative_residual);
    if (!r.pass) {
      g["failures"] = g["failures"].get<int>() + 1;
      all = false;
    }
  }
  return {{"command", "identities"}, {"case", case_id}, {"points", p.points}, {"tolerance", p.tolerance},
          {"groups", groups}, {"status", status(all)}};
}

Json run_reilly(const std::string& case_id, const ReillyRunParams& p, int threads) {
  const CaseRef ref = split_case_id(case_id);
  const CatalogEntry e = instantiate(ref.entry, false);
  const EndomorphismField& A = e.field(ref.field).field;
  const ScalarField& u = e.scalar(p.u);
  ReillyOptions o;
  o.threads = threads;
  if (p.sigma == "auto") o.sigma = oracle_shape_sign();
  else if (p.sigma == "+1" || p.sigma == "1") o.sigma = 1;
  else if (p.sigma == "-1") o.sigma = -1;
  else throw ConfigError("sigma must be auto, +1 or -1");
  if (p.form != "default") o.form = parse_boundary_form(p.form);
  Json out = {{"command", "reilly"}, {"case", case_id}, {"u", p.u}, {"quad", p.quad}, {"sigma", o.sigma}};
  ReillyEvaluation ev;
  try {
    ev = A.declared.parallel ? reilly_parallel(e.manifold, A, u, p.quad, o) : reilly_codazzi(e.manifold, A, u, p.quad, o);
  } catch (const HypothesisViolation& ex) {
    out["status"] = "skipped";
    out["reason"] = ex.what();
    return out;
  }
  out["formula"] = ev.formula;
  out["form"] = to_string(ev.form);
  out["B"] = number(ev.B);
  out["C"] = number(ev.C);
  out["defect"] = number(ev.defect());
  out["B_other_form"] = number(ev.B_other_form);
  Json bt = Json::object(), it = Json::object();
  for (const auto& t : ev.boundary_terms) bt[t.name] = number(t.value);
  for (const auto& t : ev.interior_terms) it[t.name] = number(t.value);
  out["boundary_terms"] = bt;
  out["interior_terms"] = it;
  out["tolerance"] = p.tolerance;
  out["status"] = status(ev.defect() <= p.tolerance);
  return out;
}

Json run_eigen(const std::string& case_id, const EigenRunParams& p, std::uint64_t seed, int threads) {
  const CaseRef ref = split_case_id(case_id);
  const CatalogEntry e = instantiate(ref.entry, false);
  const BoundaryCondition bc = default_bc(e, p.bc);
  if (bc == BoundaryCondition::closed && e.manifold.has_boundary())
    throw ConfigError("closed condition requested on " + ref.entry + ", which has a boundary");
  if (bc != BoundaryCondition::closed && !e.manifold.has_boundary())
    throw ConfigError(to_string(bc) + " condition requested on closed manifold " + ref.entry);
  const TriMesh mesh = build_mesh(e, p.refine);
  const FemSystem sys = assemble(mesh, e.manifold, e.field(ref.field).field, threads);
  EigenOptions eo;
  eo.seed = seed;
  eo.force_dense = p.dense;
  const EigenResult r = lowest_eigenpairs(sys.K, sys.M, p.k, bc, mesh.boundary, eo);
  Json out = {{"command", "eigen"}, {"case", case_id}, {"refine", p.refine}, {"bc", to_string(bc)},
              {"unknowns", r.unknowns}, {"dense", r.dense}};
  Json ev = Json::array(), rs = Json::array();
  for (double v : r.eigenvalues) ev.push_back(v);
  double worst = 0.0;
  for (double v : r.residuals) {
    rs.push_back(v);
    worst = std::max(worst, v);
  }
  out["eigenvalues"] = ev;
  out["residuals"] = rs;
  out["lambda1"] = r.lambda1();
  out["multiplicity"] = r.lambda1_multiplicity();
  bool ok = worst <= p.residual_tolerance;
  if (const auto expect = analytic_lambda1(e, ref.field, bc)) {
    const double rel = std::abs(r.lambda1() - *expect) / *expect;
    out["lambda1_expected"] = *expect;
    out["relative_error"] = rel;
    ok = ok && rel <= p.lambda_tolerance;
  } else {
    out["lambda1_expected"] = nullptr;
  }
  out["status"] = status(ok);
  return out;
}

Json run_bounds(const std::string& case_id, const BoundsRunParams& p, std::uint64_t seed, int threads) {
  BoundRunOptions o;
  o.refine = p.refine;
  o.points = p.points;
  o.seed = seed;
  o.tolerance = p.tolerance;
  o.threads = threads;
  if (p.bc) o.bc = parse_boundary_condition(*p.bc);
  const BoundReport r = run_bound(case_id, parse_theorem(p.theorem), o);
  const TheoremConstants& c = r.constants;
  auto pair = [](const Constant& k) { return Json{{"raw", number(k.raw)}, {"safe", number(k.safe)}}; };
  Json constants = {{"n", c.n},
                    {"samples", c.samples},
                    {"margin", c.margin},
                    {"TraceA", pair(c.trace)},
                    {"TraceA_spread", c.trace_spread},
                    {"delta1", pair(c.delta1)},
                    {"deltan", pair(c.deltan)},
                    {"K_g", pair(c.K_g)},
                    {"K_A", c.K_A ? pair(*c.K_A) : Json(nullptr)},
                    {"K_neg", pair(c.K_neg)},
                    {"K_neg_ric_AX", pair(c.K_neg_ric_AX)},
                    {"K_mixed", pair(c.K_mixed)},
                    {"K_B", pair(c.K_B)},
                    {"K_prime", pair(c.K_prime)},
                    {"delta_grad", pair(c.delta_grad)},
                    {"d", pair(c.diameter)},
                    {"d_source", c.diameter_source}};
  if (c.has_boundary) {
    constants["normal_eigen_violation"] = c.normal_eigen_violation;
    constants["min_boundary_curvature"] = c.min_boundary_curvature;
  }
  Json out = {{"command", "bounds"}, {"case", case_id}, {"theorem", p.theorem}, {"bc", to_string(r.bc)},
              {"constants", constants}};
  if (r.bound.hypothesis_met) {
    out["bound"] = number(r.bound.value);
    out["bound_conservative"] = number(r.bound.conservative);
    out["lambda1"] = r.lambda1;
    out["lambda1_residual"] = r.residual;
  } else {
    out["bound"] = nullptr;
    out["reason"] = r.bound.reason;
  }
  out["verdict"] = r.verdict;
  out["margin"] = r.bound.hypothesis_met ? Json(r.margin) : Json(nullptr);
  out["near_equality"] = r.near_equality;
  out["tolerance"] = p.tolerance;
  out["status"] = r.verdict == "PASS" ? "pass" : r.verdict == "FAIL" ? "fail" : "skipped";
  return out;
}

Json run_trace_inequality(int pairs, std::uint64_t seed) {
  const TraceSweep s = trace_inequality_sweep(pairs, seed);
  return {{"command", "trace_inequality"}, {"pairs", s.pairs}, {"violations", s.violations},
          {"worst_relative_slack", s.worst_relative}, {"scalar_max_slack", s.scalar_max_slack},
          {"status", status(s.violations == 0 && s.scalar_max_slack <= 1e-12)}};
}

// ---------------------------------------------------------------- config

namespace {

void only_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <class T>
T get_or(const Json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("wrong type for '" + std::string(key) + "' in " + where);
  }
}

std::optional<std::string> opt_string(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return get_or<std::string>(obj, key, "", where);
}

}  // namespace

Json parse_suite_config(const std::string& text) {
  Json c;
  try {
    c = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(c, {"schema", "output", "format", "runs"}, "config");
  if (get_or<std::string>(c, "schema", "", "config") != kSuiteSchema)
    throw ConfigError(std::string("config schema must be \"") + kSuiteSchema + "\"");
  const std::string fmt = get_or<std::string>(c, "format", "json", "config");
  if (fmt != "json" && fmt != "csv") throw ConfigError("format must be json or csv");
  if (!c.contains("runs") || !c["runs"].is_array()) throw ConfigError("config needs a runs array");
  for (std::size_t i = 0; i < c["runs"].size(); ++i) {
    const Json& r = c["runs"][i];
    const std::string where = "runs[" + std::to_string(i) + "]";
    only_keys(r, {"command", "case", "parameters", "tolerances", "seed"}, where);
    const std::string cmd = get_or<std::string>(r, "command", "", where);
    const Json params = r.value("parameters", Json::object());
    const Json tols = r.value("tolerances", Json::object());
    if (cmd == "identities") {
      only_keys(params, {"points"}, where + ".parameters");
      only_keys(tols, {"relative"}, where + ".tolerances");
    } else if (cmd == "reilly") {
      only_keys(params, {"u", "quad", "sigma", "form"}, where + ".parameters");
      only_keys(tols, {"defect"}, where + ".tolerances");
    } else if (cmd == "eigen") {
      only_keys(params, {"refine", "bc", "k", "dense"}, where + ".parameters");
      only_keys(tols, {"lambda1_relative", "residual"}, where + ".tolerances");
    } else if (cmd == "bounds") {
      only_keys(params, {"theorem", "refine", "points", "bc"}, where + ".parameters");
      only_keys(tols, {"bound"}, where + ".tolerances");
    } else if (cmd == "trace_inequality") {
      only_keys(params, {"pairs"}, where + ".parameters");
      only_keys(tols, {}, where + ".tolerances");
    } else {
      throw ConfigError("unknown command '" + cmd + "' in " + where);
    }
    if (cmd != "trace_inequality" && !r.contains("case")) throw ConfigError(where + " needs a case");
  }
  return c;
}

SuiteOutcome run_suite(const Json& config, std::uint64_t seed, int threads) {
  SuiteOutcome out;
  out.format = config.value("format", "json");
  out.output = config.value("output", "");
  Json runs = Json::array(), timings = Json::array();
  int passed = 0, failed = 0, skipped = 0;
  const auto t_all = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < config["runs"].size(); ++i) {
    const Json& r = config["runs"][i];
    const std::string where = "runs[" + std::to_string(i) + "]";
    const std::string cmd = r["command"].get<std::string>();
    const std::string cid = r.value("case", "");
    const std::uint64_t s = get_or<std::uint64_t>(r, "seed", seed, where);
    const Json params = r.value("parameters", Json::object());
    const Json tols = r.value("tolerances", Json::object());
    const auto t0 = std::chrono::steady_clock::now();
    Json res;
    try {
      if (cmd == "identities") {
        IdentityRunParams p;
        p.points = get_or(params, "points", p.points, where);
        p.tolerance = get_or(tols, "relative", p.tolerance, where);
        res = run_identities(cid, p, s, threads);
      } else if (cmd == "reilly") {
        ReillyRunParams p;
        p.u = get_or<std::string>(params, "u", "", where);
        p.quad = get_or(params, "quad", p.quad, where);
        p.sigma = get_or(params, "sigma", p.sigma, where);
        p.form = get_or(params, "form", p.form, where);
        p.tolerance = get_or(tols, "defect", p.tolerance, where);
        res = run_reilly(cid, p, threads);
      } else if (cmd == "eigen") {
        EigenRunParams p;
        p.refine = get_or(params, "refine", p.refine, where);
        p.bc = opt_string(params, "bc", where);
        p.k = get_or(params, "k", p.k, where);
        p.dense = get_or(params, "dense", p.dense, where);
        p.lambda_tolerance = get_or(tols, "lambda1_relative", p.lambda_tolerance, where);
        p.residual_tolerance = get_or(tols, "residual", p.residual_tolerance, where);
        res = run_eigen(cid, p, s, threads);
      } else if (cmd == "bounds") {
        BoundsRunParams p;
        p.theorem = get_or<std::string>(params, "theorem", "", where);
        p.refine = get_or(params, "refine", p.refine, where);
        p.points = get_or(params, "points", p.points, where);
        p.bc = opt_string(params, "bc", where);
        p.tolerance = get_or(tols, "bound", p.tolerance, where);
        res = run_bounds(cid, p, s, threads);
      } else {
        res = run_trace_inequality(get_or(params, "pairs", 1000, where), s);
      }
    } catch (const UnknownName& e) {
      out.exit_code = 2;
      out.message = where + " (" + cmd + " " + cid + "): " + e.what();
      break;
    } catch (const ConfigError& e) {
      out.exit_code = 2;
      out.message = where + " (" + cmd + " " + cid + "): " + e.what();
      break;
    } catch (const std::exception& e) {
      res = {{"command", cmd}, {"case", cid}, {"status", "error"}, {"error", e.what()}};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Json entry = {{"index", i}, {"seed", s}};
    for (const auto& [k, v] : res.items()) entry[k] = v;
    const std::string st = entry["status"].get<std::string>();
    if (st == "pass") ++passed;
    else if (st == "skipped") ++skipped;
    else {
      ++failed;
      if (out.exit_code == 0) {
        out.exit_code = 1;
        out.message = where + " (" + cmd + " " + cid + ") " + st;
      }
    }
    runs.push_back(entry);
    timings.push_back({{"index", i}, {"command", cmd}, {"case", cid}, {"seconds", secs}});
  }
  out.report = {{"schema", kReportSchema},
                {"runs", runs},
                {"summary", {{"passed", passed}, {"failed", failed}, {"skipped", skipped}}}};
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out.meta = {{"started_utc", stamp},
              {"threads", threads},
              {"total_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t_all).count()},
              {"timings", timings}};
  return out;
}

std::string render_report(const SuiteOutcome& o) {
  if (o.format == "json") return o.report.dump(2) + "\n";
  std::string s = "index,command,case,status,metric,value\n";
  for (const Json& r : o.report["runs"]) {
    std::string metric, value;
    const std::string cmd = r["command"].get<std::string>();
    auto num = [&](const char* k) { return r.contains(k) && r[k].is_number() ? format_double(r[k].get<double>()) : std::string(); };
    if (cmd == "reilly") metric = "defect", value = num("defect");
    else if (cmd == "eigen") metric = "lambda1", value = num("lambda1");
    else if (cmd == "bounds") metric = "bound", value = num("bound");
    else if (cmd == "trace_inequality") metric = "violations", value = std::to_string(r["violations"].get<int>());
    else if (cmd == "identities") {
      double worst = 0.0;
      for (const Json& g : r["groups"]) worst = std::max(worst, g["worst_relative_residual"].get<double>());
      metric = "worst_relative_residual", value = format_double(worst);
    }
    s += std::to_string(r["index"].get<int>()) + "," + cmd + "," + csv_escape(r.value("case", "")) + "," +
         r["status"].get<std::string>() + "," + metric + "," + value + "\n";
  }
  return s;
}

}  // namespace reilly
