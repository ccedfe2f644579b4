// Projected (sub)gradient descent for I^p over C_PQ.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcmod/condenser_model.hpp"
#include "qcmod/stationarity.hpp"

namespace qcmod {

enum class StepRule {
  Automatic,     // backtracking when smooth, diminishing for p = 1, p = inf, or a true max
  Fixed,         // x - eta g
  Diminishing,   // x - eta0 / sqrt(t) * g / |g|, best iterate kept
  Backtracking,  // Armijo c = 1e-4, shrink 0.5
};

struct SolverConfig {
  int max_iters = 5000;
  StepRule step_rule = StepRule::Automatic;
  /// Fixed step, the initial trial step for backtracking (default 1), or eta0
  /// for the diminishing rule (default 0.1 / sqrt(dim)).
  std::optional<double> eta;
  int restarts = 4;
  double tol_grad = 1e-7;
  double tol_value = 1e-9;
  int value_window = 50;
  std::uint64_t seed = 0;
  bool record_trace = false;

  void validate() const;
};

struct TraceRow {
  int iter;
  double value;
  double step;
  double grad_norm;
};

struct RestartResult {
  double value = 0.0;  // I(X)
  Matrix minimizer;
  int iterations = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
};

struct SolveReport {
  double primal_value = 0.0;
  Matrix minimizer;
  int iterations = 0;
  bool converged = false;
  int best_restart = 0;
  std::vector<RestartResult> restarts;
  std::vector<TraceRow> trace;  // best restart, when requested

  std::optional<StationarityReport> stationarity;
  std::optional<double> dual_bound;

  /// primal - dual, when a dual bound is attached.
  std::optional<double> bracket() const;
};

/// Minimize I over C_PQ. Permutation tuples are searched over the diagonal.
SolveReport solve(const CondenserProblem& problem, const SolverConfig& config = {});

/// Grid minimum of I over the free diagonal entries of a permutation problem.
/// At most 4 free entries; `grid` points per axis, at least 101.
double brute_force_commutative(const CondenserProblem& problem, int grid);

struct ContinuityProbe {
  double k_original = 0.0;
  double k_perturbed = 0.0;
  double trace_distance = 0.0;  // |P1 - P2|_1
  double bound = 0.0;           // 4 C phi(6 eps), phi(t) = t^{1/p}
  bool holds = false;
  bool vacuous = false;         // bound already exceeds both values
};

/// Rotates P by a small unitary with |P1 - P2|_1 <= eps and compares the two
/// solved moduli against the continuity bound.
ContinuityProbe continuity_probe(const CondenserProblem& problem, double eps,
                                 const SolverConfig& config = {}, double solver_tol = 1e-4);

}  // namespace qcmod
