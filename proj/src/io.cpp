#include "qcmod/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace qcmod::io {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError(path, "JSON syntax error at line " + std::to_string(line) + ", column " +
                                std::to_string(col));
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw SchemaError(path, "cannot open for writing");
  out << text;
}

json matrix_to_json(const Matrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) entries.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
  return json{{"dim", m.rows()}, {"entries", entries}};
}

namespace {

double number_at(const json& j, const std::string& field) {
  if (!j.is_number()) throw SchemaError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(field, "not finite");
  return v;
}

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where.empty() ? "document" : where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where.empty() ? key : where + "." + key, "missing field");
  return *it;
}

void check_schema(const json& j) {
  if (!j.is_object()) throw SchemaError("document", "expected an object");
  auto it = j.find("schema");
  if (it != j.end() && (!it->is_string() || it->get<std::string>() != kSchema))
    throw SchemaError("schema", std::string("expected \"") + kSchema + "\"");
}

std::vector<int> int_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw SchemaError(field, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw SchemaError(field + "[" + std::to_string(i) + "]", "expected an integer");
    out.push_back(j[i].get<int>());
  }
  return out;
}

Projection projection_from_json(const json& j, int dim, const std::string& field) {
  if (!j.is_array() && !j.is_object()) throw SchemaError(field, "expected an index list or a matrix");
  try {
    if (j.is_array() && (j.empty() || !j[0].is_array())) return Projection::coordinate(dim, int_list(j, field));
    const Matrix m = matrix_from_json(j, field);
    if (m.rows() != dim) throw SchemaError(field, "dimension differs from \"dim\"");
    return Projection::from_matrix(m);
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    throw SchemaError(field, e.what());
  }
}

json projection_to_json(const Projection& p) {
  if (p.coordinates()) return json(*p.coordinates());
  return matrix_to_json(p.matrix());
}

}  // namespace

namespace {

Complex entry_from_json(const json& e, const std::string& f) {
  if (e.is_array()) {
    if (e.size() != 2) throw SchemaError(f, "complex entries are [re, im]");
    return Complex(number_at(e[0], f), number_at(e[1], f));
  }
  return number_at(e, f);
}

}  // namespace

Matrix matrix_from_json(const json& j, const std::string& field) {
  if (j.is_object()) {
    const json& dim_j = member(j, "dim", field);
    if (!dim_j.is_number_integer() || dim_j.get<int>() < 1) throw SchemaError(field + ".dim", "expected a positive integer");
    const int n = dim_j.get<int>();
    const json& entries = member(j, "entries", field);
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n) * n)
      throw SchemaError(field + ".entries", "expected " + std::to_string(n * n) + " row-major entries");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const std::size_t idx = static_cast<std::size_t>(i) * n + k;
        m(i, k) = entry_from_json(entries[idx], field + ".entries[" + std::to_string(idx) + "]");
      }
    return m;
  }
  if (!j.is_array() || j.empty()) throw SchemaError(field, "expected {dim, entries} or a nonempty array of rows");
  const std::size_t n = j.size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != n) throw SchemaError(row_field, "expected a row of length " + std::to_string(n));
    for (std::size_t k = 0; k < n; ++k) m(i, k) = entry_from_json(j[i][k], row_field + "[" + std::to_string(k) + "]");
  }
  return m;
}

json exponent_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

double exponent_from_json(const json& j, const std::string& field) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw SchemaError(field, "expected a number >= 1 or \"inf\"");
  }
  const double p = number_at(j, field);
  if (!(p >= 1.0)) throw SchemaError(field, "exponent must be >= 1");
  return p;
}

json problem_to_json(const CondenserProblem& problem) {
  json j;
  j["schema"] = kSchema;
  j["kind"] = to_string(problem.tuple().kind());
  j["objective"] = to_string(problem.objective());
  j["p"] = exponent_to_json(problem.norm().p());
  j["dim"] = problem.dim();
  if (problem.tuple().kind() == TupleKind::Permutation) {
    j["permutations"] = problem.tuple().permutations();
  } else {
    json ops = json::array();
    for (const auto& op : problem.tuple().ops()) ops.push_back(matrix_to_json(op));
    j["operators"] = ops;
  }
  j["P"] = projection_to_json(problem.P());
  j["Q"] = projection_to_json(problem.Q());
  return j;
}

CondenserProblem problem_from_json(const json& j) {
  check_schema(j);
  const json& dim_j = member(j, "dim", "");
  if (!dim_j.is_number_integer() || dim_j.get<int>() < 1) throw SchemaError("dim", "expected a positive integer");
  const int dim = dim_j.get<int>();

  const json& kind_j = member(j, "kind", "");
  if (!kind_j.is_string()) throw SchemaError("kind", "expected a string");
  TupleKind kind;
  try {
    kind = tuple_kind_from_string(kind_j.get<std::string>());
  } catch (const ValidationError& e) {
    throw SchemaError("kind", e.what());
  }

  ObjectiveKind objective = ObjectiveKind::Max;
  if (auto it = j.find("objective"); it != j.end()) {
    if (!it->is_string()) throw SchemaError("objective", "expected a string");
    try {
      objective = objective_kind_from_string(it->get<std::string>());
    } catch (const ValidationError& e) {
      throw SchemaError("objective", e.what());
    }
  }
  const double p = exponent_from_json(member(j, "p", ""), "p");

  std::optional<OperatorTuple> tuple;
  try {
    if (kind == TupleKind::Permutation) {
      const json& perms_j = member(j, "permutations", "");
      if (!perms_j.is_array() || perms_j.empty()) throw SchemaError("permutations", "expected a nonempty array");
      std::vector<std::vector<int>> perms;
      for (std::size_t i = 0; i < perms_j.size(); ++i)
        perms.push_back(int_list(perms_j[i], "permutations[" + std::to_string(i) + "]"));
      tuple = OperatorTuple::permutation(dim, perms);
    } else {
      const json& ops_j = member(j, "operators", "");
      if (!ops_j.is_array() || ops_j.empty()) throw SchemaError("operators", "expected a nonempty array");
      std::vector<Matrix> ops;
      for (std::size_t i = 0; i < ops_j.size(); ++i) {
        const std::string f = "operators[" + std::to_string(i) + "]";
        ops.push_back(matrix_from_json(ops_j[i], f));
        if (ops.back().rows() != dim) throw SchemaError(f, "dimension differs from \"dim\"");
      }
      try {
        if (kind == TupleKind::SelfAdjoint) tuple = OperatorTuple::self_adjoint(ops);
        else if (kind == TupleKind::Unitary) tuple = OperatorTuple::unitary(ops);
        else tuple = OperatorTuple::automorphism(ops);
      } catch (const ValidationError& e) {
        throw SchemaError("operators", e.what());
      }
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    throw SchemaError("permutations", e.what());
  }

  Projection P = projection_from_json(member(j, "P", ""), dim, "P");
  Projection Q = projection_from_json(member(j, "Q", ""), dim, "Q");
  try {
    return CondenserProblem(std::move(*tuple), std::move(P), std::move(Q), objective,
                            std::isinf(p) ? SchattenNorm::infinity() : SchattenNorm(p));
  } catch (const ValidationError& e) {
    throw SchemaError("problem", e.what());
  }
}

json certificate_to_json(const DualCertificate& cert) {
  json X = json::array();
  for (const auto& x : cert.X) X.push_back(matrix_to_json(x));
  return json{{"schema", kSchema}, {"X", X}};
}

DualCertificate certificate_from_json(const json& j) {
  check_schema(j);
  const json& xs = member(j, "X", "");
  if (!xs.is_array() || xs.empty()) throw SchemaError("X", "expected a nonempty array of matrices");
  DualCertificate cert;
  for (std::size_t i = 0; i < xs.size(); ++i) cert.X.push_back(matrix_from_json(xs[i], "X[" + std::to_string(i) + "]"));
  return cert;
}

json shift_spec_to_json(const ShiftCondenserSpec& spec) {
  return json{{"schema", kSchema}, {"M", spec.M}, {"N", spec.N}, {"p", spec.p}, {"window", spec.window}, {"pin", spec.pin}};
}

ShiftStudyInput shift_spec_from_json(const json& j) {
  check_schema(j);
  ShiftStudyInput in;
  in.spec.M = int_list(member(j, "M", ""), "M");
  in.spec.N = int_list(member(j, "N", ""), "N");
  if (auto it = j.find("pin"); it != j.end()) {
    if (!it->is_boolean()) throw SchemaError("pin", "expected true or false");
    in.spec.pin = it->get<bool>();
  }
  const json& p = member(j, "p", "");
  if (p.is_array()) {
    for (std::size_t i = 0; i < p.size(); ++i) in.p_list.push_back(exponent_from_json(p[i], "p[" + std::to_string(i) + "]"));
  } else {
    in.p_list.push_back(exponent_from_json(p, "p"));
  }
  for (double v : in.p_list)
    if (std::isinf(v)) throw SchemaError("p", "shift studies need finite p");
  if (in.p_list.empty()) throw SchemaError("p", "empty list");
  const json& w = member(j, "window", "");
  if (w.is_array()) in.windows = int_list(w, "window");
  else if (w.is_number_integer()) in.windows.push_back(w.get<int>());
  else throw SchemaError("window", "expected an integer or a list of integers");
  if (in.windows.empty()) throw SchemaError("window", "empty list");
  in.spec.p = in.p_list.front();
  in.spec.window = in.windows.back();
  try {
    in.spec.validate();
    for (int win : in.windows) {
      ShiftCondenserSpec s = in.spec;
      s.window = win;
      s.validate();
    }
  } catch (const ValidationError& e) {
    throw SchemaError("spec", e.what());
  }
  return in;
}

json stationarity_to_json(const StationarityReport& r) {
  return json{{"residual_norm", r.residual_norm},
              {"interior_residual", r.interior_residual},
              {"neg_check", r.neg_check},
              {"pos_check", r.pos_check},
              {"nesting_ok", r.nesting_ok},
              {"ambiguous_clusters", r.ambiguous_clusters},
              {"advisory", r.advisory}};
}

json solve_report_to_json(const SolveReport& r) {
  json j;
  j["schema"] = kSchema;
  j["primal_value"] = r.primal_value;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["best_restart"] = r.best_restart;
  json restarts = json::array();
  for (const auto& rr : r.restarts)
    restarts.push_back({{"value", rr.value}, {"iterations", rr.iterations}, {"converged", rr.converged}});
  j["restarts"] = restarts;
  j["minimizer"] = matrix_to_json(r.minimizer);
  if (r.stationarity) j["stationarity"] = stationarity_to_json(*r.stationarity);
  if (r.dual_bound) j["dual_bound"] = *r.dual_bound;
  if (auto b = r.bracket()) j["bracket"] = *b;
  return j;
}

json dual_bound_to_json(const DualBound& b) {
  return json{{"bound", b.bound}, {"trace_pyp", b.trace_pyp}, {"trace_negative", b.trace_negative}};
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os << "iter,value,step,grad_norm\n" << std::setprecision(12);
  for (const auto& t : trace) os << t.iter << ',' << t.value << ',' << t.step << ',' << t.grad_norm << '\n';
  return os.str();
}

json RunManifest::to_json() const {
  json j{{"command", command}, {"input", input}, {"overrides", overrides},
         {"seed", seed},       {"outputs", outputs}, {"version", version}};
  if (wall_seconds) j["wall_seconds"] = *wall_seconds;
  return j;
}

void apply_solver_overrides(SolverConfig& c, const json& o) {
  if (!o.is_object()) throw SchemaError("config", "expected an object");
  for (auto it = o.begin(); it != o.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    const std::string f = "config." + k;
    if (k == "max_iters" || k == "restarts" || k == "value_window") {
      if (!v.is_number_integer()) throw SchemaError(f, "expected an integer");
      (k == "max_iters" ? c.max_iters : k == "restarts" ? c.restarts : c.value_window) = v.get<int>();
    } else if (k == "tol_grad" || k == "tol") {
      c.tol_grad = number_at(v, f);
    } else if (k == "tol_value") {
      c.tol_value = number_at(v, f);
    } else if (k == "eta") {
      c.eta = number_at(v, f);
    } else if (k == "seed") {
      if (!v.is_number_unsigned()) throw SchemaError(f, "expected a nonnegative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (k == "step_rule") {
      if (!v.is_string()) throw SchemaError(f, "expected a string");
      const std::string s = v.get<std::string>();
      if (s == "automatic") c.step_rule = StepRule::Automatic;
      else if (s == "fixed") c.step_rule = StepRule::Fixed;
      else if (s == "diminishing") c.step_rule = StepRule::Diminishing;
      else if (s == "backtracking") c.step_rule = StepRule::Backtracking;
      else throw SchemaError(f, "expected automatic|fixed|diminishing|backtracking");
    } else if (k == "schema" || k == "variant" || k == "p") {
      // handled by the caller
    } else {
      throw SchemaError(f, "unknown option");
    }
  }
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw SchemaError("config", e.what());
  }
}

}  // namespace qcmod::io
