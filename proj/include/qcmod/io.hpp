// JSON documents under the "qcmod/1" schema.
//
// Matrices are {dim, entries} with entries row-major [re, im] pairs; arrays of
// rows (entries a number or a [re, im] pair) are accepted on input.
// Projections are either an index list (coordinate projection) or a matrix.
// Exponents are numbers or the string "inf".

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "qcmod/condenser_model.hpp"
#include "qcmod/duality.hpp"
#include "qcmod/shift_bench.hpp"
#include "qcmod/solver.hpp"

namespace qcmod::io {

using nlohmann::json;

inline constexpr const char* kSchema = "qcmod/1";
inline constexpr const char* kVersion = "0.1.0";

/// Input error with the offending field path, e.g. "P: not idempotent".
class SchemaError : public ValidationError {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : ValidationError(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parses a file; syntax errors report line and column.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& field);

json exponent_to_json(double p);
double exponent_from_json(const json& j, const std::string& field);

json problem_to_json(const CondenserProblem& problem);
CondenserProblem problem_from_json(const json& j);

json certificate_to_json(const DualCertificate& cert);
DualCertificate certificate_from_json(const json& j);

/// A spec document may carry lists for "p" and "window" (study sweeps).
struct ShiftStudyInput {
  ShiftCondenserSpec spec;
  std::vector<double> p_list;
  std::vector<int> windows;
};
json shift_spec_to_json(const ShiftCondenserSpec& spec);
ShiftStudyInput shift_spec_from_json(const json& j);

json solve_report_to_json(const SolveReport& report);
json stationarity_to_json(const StationarityReport& report);
json dual_bound_to_json(const DualBound& bound);

std::string trace_csv(const std::vector<TraceRow>& trace);

struct RunManifest {
  std::string command;
  std::string input;
  json overrides = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::string version = kVersion;
  std::optional<double> wall_seconds;  // only when explicitly requested

  json to_json() const;
};

/// Overrides read from a config file or flags, applied onto a SolverConfig.
void apply_solver_overrides(SolverConfig& config, const json& overrides);

}  // namespace qcmod::io
