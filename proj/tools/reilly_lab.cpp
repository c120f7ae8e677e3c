// reilly_lab: command-line front end.  Exit codes: 0 success, 1 numerical failure,
// 2 unknown name or bad configuration.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "reilly/boundary.hpp"
#include "reilly/checks.hpp"
#include "reilly/errors.hpp"
#include "reilly/parallel.hpp"
#include "reilly/suite.hpp"
#include "reilly/zoo.hpp"

using namespace reilly;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240607;

struct Globals {
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;

  std::uint64_t seed_or(std::uint64_t fallback) const { return seed.value_or(fallback); }
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + g.out);
  f << text;
}

int cmd_zoo_list(const Globals& g) {
  std::string s = "case\tdim\tflags\tlambda1\n";
  for (const auto& line : zoo_listing()) s += line + "\n";
  emit(g, s);
  return 0;
}

int cmd_identities(const Globals& g, const std::string& cid, int points, double tol) {
  IdentityCheckOptions o;
  o.points = points;
  o.seed = g.seed_or(0xb0c4);
  o.tolerance = tol;
  o.threads = g.threads;
  const auto rows = check_identities(cid, o);
  std::string s = "case,identity,scalar,point,relative_residual,pass\n";
  bool all = true;
  for (const auto& r : rows) {
    s += csv_escape(r.case_id) + "," + r.identity + "," + csv_escape(r.scalar) + "," + std::to_string(r.point) + "," +
         format_double(r.relative_residual) + "," + (r.pass ? "true" : "false") + "\n";
    all = all && r.pass;
  }
  emit(g, s);
  return all ? 0 : 1;
}

int cmd_reilly(const Globals& g, const std::string& cid, const ReillyRunParams& p) {
  const Json r = run_reilly(cid, p, g.threads);
  if (r["status"] == "skipped") {
    std::cerr << "skipped: " << r["reason"].get<std::string>() << "\n";
    return 1;
  }
  std::string head = "case,q,sigma,formula,form,B,C,defect,B_other_form";
  std::string row = csv_escape(cid) + "," + std::to_string(p.quad) + "," + std::to_string(r["sigma"].get<int>()) + "," +
                    r["formula"].get<std::string>() + "," + r["form"].get<std::string>() + "," +
                    format_double(r["B"].get<double>()) + "," + format_double(r["C"].get<double>()) + "," +
                    format_double(r["defect"].get<double>()) + "," + format_double(r["B_other_form"].get<double>());
  for (const char* part : {"boundary_terms", "interior_terms"})
    for (const auto& [k, v] : r[part].items()) {
      head += "," + std::string(part == std::string("boundary_terms") ? "bd_" : "int_") + k;
      row += "," + format_double(v.get<double>());
    }
  emit(g, head + "\n" + row + "\n");
  return r["status"] == "pass" ? 0 : 1;
}

int cmd_eigen(const Globals& g, const std::string& cid, const EigenRunParams& p) {
  const auto t0 = std::chrono::steady_clock::now();
  const Json r = run_eigen(cid, p, g.seed_or(0x1a2b3c), g.threads);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string head = "case,L,bc,unknowns", row = csv_escape(cid) + "," + std::to_string(p.refine) + "," +
                                                 r["bc"].get<std::string>() + "," +
                                                 std::to_string(r["unknowns"].get<int>());
  for (std::size_t i = 0; i < r["eigenvalues"].size(); ++i) {
    head += ",lambda_" + std::to_string(i + 1);
    row += "," + format_double(r["eigenvalues"][i].get<double>());
  }
  for (std::size_t i = 0; i < r["residuals"].size(); ++i) {
    head += ",residual_" + std::to_string(i + 1);
    row += "," + format_double(r["residuals"][i].get<double>());
  }
  head += ",runtime_s";
  row += "," + format_double(secs);
  emit(g, head + "\n" + row + "\n");
  return r["status"] == "pass" ? 0 : 1;
}

int cmd_bounds(const Globals& g, const std::string& cid, const BoundsRunParams& p) {
  const Json r = run_bounds(cid, p, g.seed_or(0xc0ffee), g.threads);
  emit(g, r.dump(2) + "\n");
  return r["status"] == "fail" ? 1 : 0;
}

int cmd_suite(const Globals& g, const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  const Json config = parse_suite_config(buf.str());
  const SuiteOutcome o = run_suite(config, g.seed_or(kDefaultSeed), g.threads);
  Globals out = g;
  if (out.out.empty()) out.out = o.output;
  emit(out, render_report(o));
  if (!out.out.empty()) {
    std::ofstream m(out.out + ".meta.json", std::ios::binary);
    m << o.meta.dump(2) << "\n";
  }
  if (!o.message.empty()) std::cerr << o.message << "\n";
  const auto& s = o.report["summary"];
  std::cerr << "suite: " << s["passed"] << " passed, " << s["failed"] << " failed, " << s["skipped"] << " skipped\n";
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reilly_lab: Bochner/Reilly identities and first-eigenvalue bounds for div(A grad u)"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for sampling and the eigensolver");
  app.add_option("--threads", g.threads, "Worker threads (default: REILLY_LAB_THREADS or hardware)");
  app.add_option("--out", g.out, "Write the report here instead of stdout");

  auto* zoo = app.add_subcommand("zoo", "Catalog of manifolds and fields");
  zoo->require_subcommand(1);
  zoo->fallthrough();
  auto* zoo_list = zoo->add_subcommand("list", "List every case with its structure flags and known lambda_1");

  auto* check = app.add_subcommand("check", "Pointwise identities and Reilly formulas");
  check->require_subcommand(1);
  check->fallthrough();
  std::string id_case;
  int id_points = 100;
  double id_tol = 1e-7;
  auto* check_id = check->add_subcommand("identities", "Residuals of every applicable identity");
  check_id->add_option("--case", id_case, "Entry id or case id")->required();
  check_id->add_option("--points", id_points, "Sample points");
  check_id->add_option("--tol", id_tol, "Relative residual tolerance");

  std::string re_case;
  ReillyRunParams re;
  auto* check_re = check->add_subcommand("reilly", "Both sides of the Reilly-type formula");
  check_re->add_option("--case", re_case, "Case id <entry>/<field>")->required();
  check_re->add_option("--u", re.u, "Test function name")->required();
  check_re->add_option("--quad", re.quad, "Gauss-Legendre order");
  check_re->add_option("--sigma", re.sigma, "Shape sign: +1, -1 or auto");
  check_re->add_option("--form", re.form, "Boundary operator: default, trace or divergence");
  check_re->add_option("--tol", re.tolerance, "Defect tolerance");

  std::string ei_case, ei_bc;
  EigenRunParams ei;
  auto* eigen = app.add_subcommand("eigen", "Lowest eigenpairs of -L_A on a mesh");
  eigen->add_option("--case", ei_case, "Case id <entry>/<field>")->required();
  eigen->add_option("--refine", ei.refine, "Mesh refinement level");
  eigen->add_option("--bc", ei_bc, "closed, dirichlet or neumann");
  eigen->add_option("--k", ei.k, "Number of eigenpairs");
  eigen->add_flag("--dense", ei.dense, "Force the dense solver");

  std::string bo_case, bo_bc;
  BoundsRunParams bo;
  auto* bounds = app.add_subcommand("bounds", "Theorem constants, bound and verdict");
  bounds->add_option("--case", bo_case, "Case id <entry>/<field>")->required();
  bounds->add_option("--theorem", bo.theorem, "thm11a|thm11b|thm12|thm14|thm15|thm16|corollaryDN")->required();
  bounds->add_option("--refine", bo.refine, "Mesh refinement level for lambda_1");
  bounds->add_option("--points", bo.points, "Sample points for the constants");
  bounds->add_option("--bc", bo_bc, "dirichlet or neumann (corollaryDN)");
  bounds->add_option("--tol", bo.tolerance, "Verdict tolerance");

  std::string config;
  auto* suite = app.add_subcommand("suite", "Run a JSON suite configuration");
  suite->add_option("--config", config, "Config path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*seed_opt) g.seed = seed;
  g.threads = resolve_threads(g.threads);
  set_default_threads(g.threads);

  try {
    if (*zoo_list) return cmd_zoo_list(g);
    if (*check_id) return cmd_identities(g, id_case, id_points, id_tol);
    if (*check_re) return cmd_reilly(g, re_case, re);
    if (*eigen) {
      if (!ei_bc.empty()) ei.bc = ei_bc;
      return cmd_eigen(g, ei_case, ei);
    }
    if (*bounds) {
      if (!bo_bc.empty()) bo.bc = bo_bc;
      return cmd_bounds(g, bo_case, bo);
    }
    if (*suite) return cmd_suite(g, config);
  } catch (const UnknownName& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
