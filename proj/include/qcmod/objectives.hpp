// The six I-functionals (max / column / Dirac, for commutator and automorphism
// tuples) and the gradients of their p-th powers.
//
// Block conventions, j = 1..n:
//   selfadjoint   C_j = [X, T_j]
//   unitary       C_j = [X, U_j]
//   automorphism  C_j = U_j X U_j* - X        (also permutation tuples)
// max    : I(X) = max_j |C_j|_p
// column : I(X) = |(sum_j C_j* C_j)^{1/2}|_p
// dirac  : I(X) = |sum_j C_j (x) e_j|_p      with Clifford matrices e_j

#pragma once

#include <optional>
#include <vector>

#include "qcmod/condenser_model.hpp"

namespace qcmod {

/// The boundary map of X: n blocks for max/column, one block for dirac.
struct BoundaryMap {
  std::vector<Matrix> blocks;
};

BoundaryMap boundary_map(const CondenserProblem& problem, const Matrix& X);

/// Norm of a boundary map under the problem's objective kind.
double boundary_norm(const CondenserProblem& problem, const BoundaryMap& d);

/// |d1 - d2| in the Schatten class of `norm`, blockwise stacked as a column.
double boundary_distance(const BoundaryMap& a, const BoundaryMap& b, const SchattenNorm& norm);

/// I(X). Accepts any square matrix of the ambient dimension.
double evaluate(const CondenserProblem& problem, const Matrix& X);

/// Commutative fast path: X = D(f) for a permutation tuple.
double evaluate_diagonal(const CondenserProblem& problem, const RealVector& f);

struct GradientReport {
  double value = 0.0;        // I(X)
  double power_value = 0.0;  // I(X)^p, or I(X) when p = inf
  Matrix gradient;           // gradient of power_value w.r.t. Hermitian X
  bool exact = true;         // false for subgradients / regularized directions
  std::optional<int> active_index;  // max variant only
  bool tie = false;                 // max variant: several blocks attain the max
};

/// Gradient of I^p at Hermitian X (p >= 2 smooth; p < 2 and p = inf flagged inexact).
GradientReport gradient(const CondenserProblem& problem, const Matrix& X);

struct DiagonalGradient {
  double value = 0.0;
  double power_value = 0.0;
  RealVector gradient;  // w.r.t. all diagonal entries
  bool exact = true;
  std::optional<int> active_index;
  bool tie = false;
};

/// Gradient of I^p along diagonal directions at X = D(f) (permutation tuples).
DiagonalGradient gradient_diagonal(const CondenserProblem& problem, const RealVector& f);

/// Hilbert-Schmidt adjoint of B -> C_j(B) applied to Z.
Matrix block_adjoint(const OperatorTuple& tuple, int j, const Matrix& Z);
/// The linear map B -> C_j(B).
Matrix block_apply(const OperatorTuple& tuple, int j, const Matrix& B);

/// Constant C with I(X) <= C |X|_p for this problem's objective.
double seminorm_constant(const CondenserProblem& problem);

}  // namespace qcmod
