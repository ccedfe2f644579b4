// qcmod: command-line front end for the condenser modulus toolkit.
//
//   qcmod solve problem.json [--out report.json] [--trace trace.csv] ...
//   qcmod certify problem.json (--cert cert.json | --ascent) [--report report.json]
//   qcmod stationarity problem.json --report report.json
//   qcmod shift spec.json [--out study.csv]
//
// Exit codes: 0 success, 1 input error, 2 non-convergence, 3 numerical failure.

#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qcmod/duality.hpp"
#include "qcmod/io.hpp"
#include "qcmod/objectives.hpp"
#include "qcmod/shift_bench.hpp"
#include "qcmod/solver.hpp"
#include "qcmod/stationarity.hpp"

using namespace qcmod;
using io::json;

namespace {

enum Exit { kOk = 0, kInput = 1, kNoConvergence = 2, kNumerical = 3 };

struct Common {
  std::string input;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string trace_path;
  std::string out_path;
  std::optional<double> tol;
  std::optional<int> max_iters;
  std::optional<int> restarts;
  std::string variant;
  std::string p;
  bool record_time = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON file with solver options");
  cmd->add_option("--seed", c.seed, "random seed for restarts");
  cmd->add_option("--trace", c.trace_path, "write the iteration trace (CSV)");
  cmd->add_option("--out", c.out_path, "output file (default: stdout)");
  cmd->add_option("--tol", c.tol, "gradient tolerance");
  cmd->add_option("--max-iters", c.max_iters, "iteration cap per restart");
  cmd->add_option("--restarts", c.restarts, "number of restarts");
  cmd->add_option("--variant", c.variant, "objective variant")->check(CLI::IsMember({"max", "column", "dirac"}));
  cmd->add_option("--p", c.p, "Schatten exponent (number or inf)");
  cmd->add_flag("--record-time", c.record_time, "embed wall time in the manifest");
}

/// Solver configuration from --config then the explicit flags, with the overrides recorded.
SolverConfig build_config(const Common& c, json& overrides) {
  SolverConfig config;
  if (!c.config_path.empty()) {
    const json file = io::read_json_file(c.config_path);
    io::apply_solver_overrides(config, file);
    overrides = file;
    overrides.erase("schema");
  }
  json flags = json::object();
  if (c.seed) flags["seed"] = *c.seed;
  if (c.tol) flags["tol_grad"] = *c.tol;
  if (c.max_iters) flags["max_iters"] = *c.max_iters;
  if (c.restarts) flags["restarts"] = *c.restarts;
  io::apply_solver_overrides(config, flags);
  overrides.update(flags);
  if (!c.variant.empty()) overrides["variant"] = c.variant;
  if (!c.p.empty()) overrides["p"] = c.p;
  if (!c.trace_path.empty()) config.record_trace = true;
  return config;
}

CondenserProblem load_problem(const Common& c, const json& overrides) {
  CondenserProblem problem = io::problem_from_json(io::read_json_file(c.input));
  const std::string variant = overrides.contains("variant") ? overrides["variant"].get<std::string>() : "";
  if (!variant.empty()) problem = problem.with_objective(objective_kind_from_string(variant));
  if (overrides.contains("p")) {
    const json pj = overrides["p"];
    const std::string ps = pj.get<std::string>();
    const double p = ps == "inf" ? io::exponent_from_json(json("inf"), "--p")
                                 : io::exponent_from_json(json(std::stod(ps)), "--p");
    problem = problem.with_norm(std::isinf(p) ? SchattenNorm::infinity() : SchattenNorm(p));
  }
  return problem;
}

void emit(const Common& c, const std::string& text) {
  if (c.out_path.empty()) std::cout << text;
  else io::write_text_file(c.out_path, text);
}

io::RunManifest manifest(const std::string& command, const Common& c, const json& overrides,
                         const SolverConfig& config) {
  io::RunManifest m;
  m.command = command;
  m.input = c.input;
  m.overrides = overrides;
  m.seed = config.seed;
  if (!c.out_path.empty()) m.outputs.push_back(c.out_path);
  if (!c.trace_path.empty()) m.outputs.push_back(c.trace_path);
  return m;
}

std::string csv_with_manifest(const std::string& csv, const io::RunManifest& m) {
  return "# " + m.to_json().dump() + "\n" + csv;
}

using Clock = std::chrono::steady_clock;

void stamp(io::RunManifest& m, const Common& c, Clock::time_point t0) {
  if (c.record_time) m.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

int cmd_solve(const Common& c, bool with_stationarity, bool with_dual) {
  const auto t0 = Clock::now();
  json overrides = json::object();
  const SolverConfig config = build_config(c, overrides);
  const CondenserProblem problem = load_problem(c, overrides);
  SolveReport report = solve(problem, config);
  if (with_stationarity && problem.objective() != ObjectiveKind::Max && !problem.norm().is_infinite())
    report.stationarity = check_compressed(problem, report.minimizer);
  if (with_dual) {
    DualAscentConfig dc;
    dc.warm_start = report.minimizer;
    report.dual_bound = dual_ascent(problem, dc).bound;
  }
  io::RunManifest m = manifest("solve", c, overrides, config);
  if (!c.trace_path.empty()) io::write_text_file(c.trace_path, csv_with_manifest(io::trace_csv(report.trace), m));
  json j = io::solve_report_to_json(report);
  stamp(m, c, t0);
  j["manifest"] = m.to_json();
  emit(c, j.dump(2) + "\n");
  if (!report.converged) {
    std::cerr << "qcmod: solver did not converge (report written)\n";
    return kNoConvergence;
  }
  return kOk;
}

int cmd_certify(const Common& c, const std::string& cert_path, bool ascent, const std::string& report_path) {
  const auto t0 = Clock::now();
  json overrides = json::object();
  const SolverConfig config = build_config(c, overrides);
  const CondenserProblem problem = load_problem(c, overrides);
  if (cert_path.empty() == !ascent) throw io::SchemaError("certify", "give exactly one of --cert or --ascent");

  DualCertificate cert;
  int iterations = 0;
  if (ascent) {
    DualAscentConfig dc;
    if (c.max_iters) dc.max_iters = *c.max_iters;
    if (!report_path.empty())
      dc.warm_start = io::matrix_from_json(io::read_json_file(report_path).at("minimizer"), "minimizer");
    const DualAscentResult r = dual_ascent(problem, dc);
    cert = r.certificate;
    iterations = r.iterations;
  } else {
    cert = io::certificate_from_json(io::read_json_file(cert_path));
  }
  const DualBound bound = dual_bound(problem, cert);
  json j{{"schema", io::kSchema}};
  j.update(io::dual_bound_to_json(bound));
  if (ascent) {
    j["ascent_iterations"] = iterations;
    j["certificate"] = io::certificate_to_json(cert)["X"];
  }
  if (!report_path.empty()) {
    const json rep = io::read_json_file(report_path);
    if (!rep.contains("primal_value") || !rep["primal_value"].is_number())
      throw io::SchemaError(report_path, "missing primal_value");
    const double primal = rep["primal_value"].get<double>();
    j["primal_value"] = primal;
    j["bracket"] = json::array({bound.bound, primal});
    std::cerr << "bracket [" << bound.bound << ", " << primal << "]\n";
  }
  io::RunManifest m = manifest("certify", c, overrides, config);
  stamp(m, c, t0);
  j["manifest"] = m.to_json();
  emit(c, j.dump(2) + "\n");
  return kOk;
}

int cmd_stationarity(const Common& c, const std::string& report_path) {
  const auto t0 = Clock::now();
  json overrides = json::object();
  const SolverConfig config = build_config(c, overrides);
  const CondenserProblem problem = load_problem(c, overrides);
  const Matrix X = io::matrix_from_json(io::read_json_file(report_path).at("minimizer"), "minimizer");
  const StationarityReport r = check_compressed(problem, X);
  json j{{"schema", io::kSchema}};
  j.update(io::stationarity_to_json(r));
  io::RunManifest m = manifest("stationarity", c, overrides, config);
  stamp(m, c, t0);
  j["manifest"] = m.to_json();
  emit(c, j.dump(2) + "\n");
  return kOk;
}

int cmd_shift(const Common& c) {
  const auto t0 = Clock::now();
  json overrides = json::object();
  const SolverConfig config = build_config(c, overrides);
  io::ShiftStudyInput in = io::shift_spec_from_json(io::read_json_file(c.input));
  if (overrides.contains("p")) {
    const std::string ps = overrides["p"].get<std::string>();
    in.p_list = {io::exponent_from_json(json(std::stod(ps)), "--p")};
  }
  const auto rows = convergence_study(in.spec, in.windows, in.p_list, config);
  io::RunManifest m = manifest("shift", c, overrides, config);
  stamp(m, c, t0);
  emit(c, csv_with_manifest(study_csv(rows), m));
  for (const auto& r : rows)
    if (!r.converged) {
      std::cerr << "qcmod: window " << r.window << " did not converge\n";
      return kNoConvergence;
    }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Condenser quasicentral modulus toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kVersion));

  Common solve_opts, cert_opts, stat_opts, shift_opts;
  bool with_stationarity = false, with_dual = false, ascent = false;
  std::string cert_path, report_path, stat_report;

  auto* solve_cmd = app.add_subcommand("solve", "minimize the condenser functional");
  solve_cmd->add_option("problem", solve_opts.input, "problem JSON")->required();
  add_common(solve_cmd, solve_opts);
  solve_cmd->add_flag("--stationarity", with_stationarity, "attach compressed stationarity checks");
  solve_cmd->add_flag("--dual", with_dual, "attach a dual bound from ascent");

  auto* cert_cmd = app.add_subcommand("certify", "evaluate a dual lower bound");
  cert_cmd->add_option("problem", cert_opts.input, "problem JSON")->required();
  add_common(cert_cmd, cert_opts);
  cert_cmd->add_option("--cert", cert_path, "certificate JSON");
  cert_cmd->add_flag("--ascent", ascent, "construct a certificate by supergradient ascent");
  cert_cmd->add_option("--report", report_path, "solve report, for the bracket");

  auto* stat_cmd = app.add_subcommand("stationarity", "check the compressed conditions at a solved point");
  stat_cmd->add_option("problem", stat_opts.input, "problem JSON")->required();
  add_common(stat_cmd, stat_opts);
  stat_cmd->add_option("--report", stat_report, "solve report holding the minimizer")->required();

  auto* shift_cmd = app.add_subcommand("shift", "shift-condenser convergence study");
  shift_cmd->add_option("spec", shift_opts.input, "shift spec JSON")->required();
  add_common(shift_cmd, shift_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_opts, with_stationarity, with_dual);
    if (*cert_cmd) return cmd_certify(cert_opts, cert_path, ascent, report_path);
    if (*stat_cmd) return cmd_stationarity(stat_opts, stat_report);
    if (*shift_cmd) return cmd_shift(shift_opts);
  } catch (const ValidationError& e) {
    std::cerr << "qcmod: input error: " << e.what() << "\n";
    return kInput;
  } catch (const json::exception& e) {
    std::cerr << "qcmod: input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qcmod: input error: " << e.what() << "\n";
    return kInput;
  } catch (const NumericalError& e) {
    std::cerr << "qcmod: numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "qcmod: numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kInput;
}
