// conc: compute certified lower bounds and numerical upper bounds on the
// concurrence of mixed bipartite quantum states.
//
// Subcommands:
//   bounds     full bound report for a state file
//   scan       bound report over the one-parameter 3x3 PPT family, as CSV
//   gen        generate states from the built-in zoo
//   selfcheck  run the built-in oracle suites

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conc/conc.hpp"
#include "json.hpp"

namespace {

struct CommonFlags {
  std::uint64_t seed = 0;
  int restarts_lower = 16;
  int restarts_upper = 8;
  int evals = 0;  // 0 = keep per-optimizer defaults (400 lower / 2000 upper)
  int embed_n = 0;
  double rank_tol = -1.0;
  std::string convention = "paper";
  std::string out;
  bool no_timing = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "Seed for all stochastic components (default 0)");
  cmd->add_option("--restarts-lower", f.restarts_lower, "Multi-start count for the z search");
  cmd->add_option("--restarts-upper", f.restarts_upper, "Multi-start count for the V search");
  cmd->add_option("--evals", f.evals,
                  "Objective evaluations per restart for both optimizers "
                  "(default: 400 for the lower, 2000 for the upper)");
  cmd->add_option("--embed-n", f.embed_n, "Rows N of the isometry V, in [r, 2r] (default r)");
  cmd->add_option("--rank-tol", f.rank_tol, "Decomposition eigenvalue cutoff (default 1e-12*n)");
  cmd->add_option("--convention", f.convention, "Output scale: paper or wootters (2x2 only)")
      ->check(CLI::IsMember({"paper", "wootters"}));
  cmd->add_option("--out", f.out, "Write the result to this file as well");
  cmd->add_flag("--no-timing", f.no_timing, "Report 0 for wall-time fields (byte-stable output)");
}

conc::OptimizerOptions to_options(const CommonFlags& f) {
  if (f.restarts_lower < 1 || f.restarts_upper < 1)
    throw conc::BadOptions("restart counts must be at least 1");
  if (f.evals < 0) throw conc::BadOptions("--evals must be nonnegative");
  conc::OptimizerOptions o;
  o.seed = f.seed;
  o.restarts_lower = f.restarts_lower;
  o.restarts_upper = f.restarts_upper;
  if (f.evals > 0) {
    o.evals_lower = f.evals;
    o.evals_upper = f.evals;
  }
  o.embed_n = f.embed_n;
  o.rank_tol = f.rank_tol;
  o.no_timing = f.no_timing;
  return o;
}

std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

nlohmann::json report_to_json(const conc::BoundReport& rep, double scale,
                              const std::string& convention) {
  nlohmann::json j;
  j["dims"] = {rep.dims.n1, rep.dims.n2};
  j["r"] = rep.r;
  j["m_bound"] = rep.m_bound;
  j["m_eff"] = rep.m_eff;
  j["detected"] = rep.detected;
  j["convention"] = convention;
  j["lower_algebraic"] = scale * rep.lower_algebraic;
  j["lower_optimized"] = scale * rep.lower_optimized;
  j["upper_optimized"] = scale * rep.upper_optimized;
  j["negativity"] = rep.negativity;
  j["is_ppt"] = rep.is_ppt;
  j["seconds"] = rep.diag.wall_seconds;
  j["diagnostics"] = {{"lower_evals", rep.diag.lower_evals},
                      {"upper_evals", rep.diag.upper_evals},
                      {"restarts_lower", rep.diag.restarts_lower},
                      {"restarts_upper", rep.diag.restarts_upper},
                      {"lower_raw_unclamped", rep.diag.lower_raw_unclamped}};
  nlohmann::json z = nlohmann::json::array();
  for (int a = 0; a < rep.z_best.size(); ++a)
    z.push_back({rep.z_best.components(a).real(), rep.z_best.components(a).imag()});
  j["z_best"] = z;
  nlohmann::json V = nlohmann::json::array();
  for (int i = 0; i < rep.V_best.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < rep.V_best.cols(); ++k)
      row.push_back({rep.V_best(i, k).real(), rep.V_best(i, k).imag()});
    V.push_back(row);
  }
  j["V_best"] = V;
  return j;
}

int cmd_bounds(const std::string& state_file, const CommonFlags& flags) {
  conc::DensityMatrix rho = conc::load_state(state_file);

  const bool wootters = (flags.convention == "wootters");
  if (wootters && !(rho.dims == conc::BipartiteDims{2, 2}))
    throw conc::BadOptions("--convention wootters applies to 2x2 states only");

  conc::BoundReport rep = conc::bound_report(rho, to_options(flags));
  const double scale = wootters ? 1.0 / conc::convention_kappa() : 1.0;

  std::printf("dims: %dx%d\n", rep.dims.n1, rep.dims.n2);
  std::printf("r: %d\n", rep.r);
  std::printf("m_bound: %d\n", rep.m_bound);
  std::printf("m_eff: %d\n", rep.m_eff);
  std::printf("detected: %s\n", rep.detected ? "true" : "false");
  std::printf("convention: %s\n", flags.convention.c_str());
  std::printf("lower_algebraic: %s\n", g12(scale * rep.lower_algebraic).c_str());
  std::printf("lower_optimized: %s\n", g12(scale * rep.lower_optimized).c_str());
  std::printf("upper_optimized: %s\n", g12(scale * rep.upper_optimized).c_str());
  std::printf("negativity: %s\n", g12(rep.negativity).c_str());
  std::printf("is_ppt: %s\n", rep.is_ppt ? "true" : "false");
  if (rho.dims == conc::BipartiteDims{2, 2}) {
    const double exact = conc::two_qubit_exact(rho, flags.rank_tol);
    std::printf("two_qubit_exact: %s\n", g12(scale * exact).c_str());
  }
  std::printf("seconds: %s\n", g12(rep.diag.wall_seconds).c_str());

  if (!flags.out.empty()) {
    std::ofstream f(flags.out, std::ios::binary);
    if (!f) throw conc::ParseError("cannot open '" + flags.out + "' for writing");
    f << report_to_json(rep, scale, flags.convention).dump(1) << "\n";
  }
  return 0;
}

int cmd_scan(double a_min, double a_max, int steps, const CommonFlags& flags) {
  if (flags.convention != "paper")
    throw conc::BadOptions("--convention wootters applies to 2x2 states only");
  std::vector<conc::ScanRow> rows = conc::scan_horodecki(a_min, a_max, steps, to_options(flags));
  const std::string csv = conc::scan_to_csv(rows);
  if (flags.out.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream f(flags.out, std::ios::binary);
    if (!f) throw conc::ParseError("cannot open '" + flags.out + "' for writing");
    f << csv;
  }
  return 0;
}

std::map<std::string, std::string> parse_kv(const std::vector<std::string>& params) {
  std::map<std::string, std::string> kv;
  for (const std::string& p : params) {
    const std::size_t eq = p.find('=');
    if (eq == std::string::npos || eq == 0)
      throw conc::BadParams("gen: parameters take the form key=value, got '" + p + "'");
    kv[p.substr(0, eq)] = p.substr(eq + 1);
  }
  return kv;
}

std::string take(std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw conc::BadParams("gen: missing required parameter '" + key + "'");
  std::string v = it->second;
  kv.erase(it);
  return v;
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw conc::BadParams("gen: parameter '" + key + "' is not a number: '" + v + "'");
  }
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw conc::BadParams("gen: parameter '" + key + "' is not an integer: '" + v + "'");
  }
}

conc::BipartiteDims parse_dims(const std::string& v) {
  const std::size_t comma = v.find(',');
  if (comma == std::string::npos)
    throw conc::BadParams("gen: dims takes the form n1,n2, got '" + v + "'");
  conc::BipartiteDims dims;
  dims.n1 = static_cast<int>(parse_long(v.substr(0, comma), "dims"));
  dims.n2 = static_cast<int>(parse_long(v.substr(comma + 1), "dims"));
  return dims;
}

int cmd_gen(const std::string& name, const std::vector<std::string>& params,
            const std::string& out_file) {
  std::map<std::string, std::string> kv = parse_kv(params);
  conc::DensityMatrix rho;
  try {
    if (name == "horodecki") {
      rho = conc::horodecki_state(parse_double(take(kv, "a"), "a"));
    } else if (name == "maxent") {
      const long n = parse_long(take(kv, "n"), "n");
      conc::StateVector psi = conc::maximally_entangled(static_cast<int>(n));
      conc::ComplexMatrix proj = psi.amplitudes * psi.amplitudes.adjoint();
      rho = conc::validate(proj, psi.dims);
    } else if (name == "random") {
      const conc::BipartiteDims dims = parse_dims(take(kv, "dims"));
      const long rank = parse_long(take(kv, "rank"), "rank");
      const long seed = kv.count("seed") ? parse_long(take(kv, "seed"), "seed") : 0;
      rho = conc::validate(conc::random_density_matrix(dims, static_cast<int>(rank),
                                                       static_cast<std::uint64_t>(seed)),
                           dims);
    } else if (name == "product-mixture") {
      const conc::BipartiteDims dims = parse_dims(take(kv, "dims"));
      const long k = parse_long(take(kv, "k"), "k");
      const long seed = kv.count("seed") ? parse_long(take(kv, "seed"), "seed") : 0;
      rho = conc::product_mixture(dims, static_cast<int>(k), static_cast<std::uint64_t>(seed));
    } else {
      throw conc::UnknownState("gen: unknown state '" + name +
                               "' (choose horodecki, maxent, random, product-mixture)");
    }
  } catch (const conc::OutOfRange& e) {
    // Bad parameter values (e.g. horodecki a outside [0,1]) are argument errors here.
    throw conc::BadParams(std::string("gen: ") + e.what());
  } catch (const conc::BadRank& e) {
    throw conc::BadParams(std::string("gen: ") + e.what());
  } catch (const conc::OptionError&) {
    throw;
  } catch (const conc::ValidationError& e) {
    throw conc::BadParams(std::string("gen: ") + e.what());
  }
  if (!kv.empty()) throw conc::BadParams("gen: unknown parameter '" + kv.begin()->first + "'");
  conc::save_state(rho, out_file);
  std::printf("wrote %s (%dx%d, trace %s)\n", out_file.c_str(), rho.dims.n1, rho.dims.n2,
              g12(rho.matrix.trace().real()).c_str());
  return 0;
}

int cmd_selfcheck(std::uint64_t seed, bool inject_f_sign_error) {
  conc::detail::f_trace_sign_flip = inject_f_sign_error;
  if (inject_f_sign_error)
    std::printf("note: running with an injected sign error in f (mutation canary)\n");
  std::vector<conc::SuiteResult> results = conc::run_selfcheck(seed);
  int suites_passed = 0;
  for (const conc::SuiteResult& r : results) {
    if (r.ok()) {
      ++suites_passed;
      std::printf("[pass] %-26s %d/%d checks\n", r.name.c_str(), r.passed, r.total);
    } else {
      std::printf("[FAIL] %-26s %d/%d checks (first failure: %s)\n", r.name.c_str(), r.passed,
                  r.total, r.first_failure.c_str());
    }
  }
  std::printf("selfcheck: %d/%zu suites passed\n", suites_passed, results.size());
  return suites_passed == static_cast<int>(results.size()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified lower bounds and numerical upper bounds on the concurrence "
               "of mixed bipartite quantum states"};
  app.require_subcommand(1);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Full bound report for a state file");
  std::string state_file;
  bounds->add_option("state-file", state_file, "JSON state file")->required();
  CommonFlags bounds_flags;
  add_common_flags(bounds, bounds_flags);

  // scan
  auto* scan = app.add_subcommand("scan", "Scan the one-parameter 3x3 PPT family, CSV output");
  double a_min = 0.1, a_max = 0.9;
  int steps = 9;
  scan->add_option("--a-min", a_min, "Grid start (default 0.1)");
  scan->add_option("--a-max", a_max, "Grid end (default 0.9)");
  scan->add_option("--steps", steps, "Grid size (default 9)");
  CommonFlags scan_flags;
  add_common_flags(scan, scan_flags);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a state file from the built-in zoo");
  std::string gen_name;
  std::vector<std::string> gen_params;
  std::string gen_out;
  gen->add_option("name", gen_name, "horodecki | maxent | random | product-mixture")->required();
  gen->add_option("params", gen_params, "key=value parameters (a=, n=, dims=, rank=, k=, seed=)");
  gen->add_option("--out", gen_out, "Output state file")->required();

  // selfcheck
  auto* selfcheck = app.add_subcommand("selfcheck", "Run the built-in oracle suites");
  std::uint64_t selfcheck_seed = 0;
  bool inject = false;
  selfcheck->add_option("--seed", selfcheck_seed, "Seed for the randomized checks (default 0)");
  selfcheck->add_flag("--inject-f-sign-error", inject,
                      "Debug hook: flip a sign inside f and expect the suites to catch it");

  try {
    app.parse(argc, argv);
    if (bounds->parsed()) return cmd_bounds(state_file, bounds_flags);
    if (scan->parsed()) return cmd_scan(a_min, a_max, steps, scan_flags);
    if (gen->parsed()) return cmd_gen(gen_name, gen_params, gen_out);
    if (selfcheck->parsed()) return cmd_selfcheck(selfcheck_seed, inject);
    return 4;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 4;
  } catch (const conc::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const conc::OptionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const conc::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const conc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
}
