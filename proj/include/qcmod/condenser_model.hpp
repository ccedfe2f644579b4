// Condenser problem instances and the feasible set
//   C_PQ = { X : 0 <= X <= I, XP = P, XQ = 0 },
// parametrized as X = P + V W V* where the columns of V span ran(I - P - Q)
// and 0 <= W <= I.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcmod/operator_core.hpp"

namespace qcmod {

enum class TupleKind {
  SelfAdjoint,   // commutators [X, T_j] with T_j = T_j*
  Unitary,       // commutators [X, U_j]
  Automorphism,  // Ad U_j(X) - X
  Permutation,   // Ad of permutation unitaries, diagonal search space
};

enum class ObjectiveKind { Max, Column, Dirac };

std::string to_string(TupleKind kind);
std::string to_string(ObjectiveKind kind);
TupleKind tuple_kind_from_string(const std::string& s);
ObjectiveKind objective_kind_from_string(const std::string& s);

/// A tuple of n operators of a common dimension.
///
/// Permutations sigma_j are stored as index maps and lifted to unitaries
/// U_j e_i = e_{sigma_j^{-1}(i)}, so that Ad U_j(D(f)) = D(f o sigma_j) and
/// the diagonal of Ad U_j(D(f)) - D(f) is f(sigma_j(i)) - f(i).
class OperatorTuple {
 public:
  static OperatorTuple self_adjoint(std::vector<Matrix> ops);
  static OperatorTuple unitary(std::vector<Matrix> ops);
  static OperatorTuple automorphism(std::vector<Matrix> ops);
  static OperatorTuple permutation(int dim, std::vector<std::vector<int>> perms);

  TupleKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(ops_.size()); }

  /// T_j for self-adjoint tuples, U_j otherwise (lifted for permutations).
  const Matrix& op(int j) const { return ops_.at(j); }
  const std::vector<Matrix>& ops() const { return ops_; }
  const std::vector<std::vector<int>>& permutations() const { return perms_; }

  bool is_unitary_kind() const { return kind_ != TupleKind::SelfAdjoint; }
  /// Same operators viewed as inner automorphisms (dense counterpart of Permutation).
  OperatorTuple as_automorphism() const;

  /// max_j ||T_j|| for self-adjoint tuples, 1 for unitary kinds.
  double operator_bound() const;

 private:
  OperatorTuple(TupleKind kind, int dim, std::vector<Matrix> ops,
                std::vector<std::vector<int>> perms);

  TupleKind kind_;
  int dim_;
  std::vector<Matrix> ops_;
  std::vector<std::vector<int>> perms_;
};

/// Orthogonal projection, optionally remembered as a coordinate projection.
class Projection {
 public:
  static Projection from_matrix(const Matrix& m);
  static Projection coordinate(int dim, std::vector<int> indices);
  static Projection zero(int dim) { return coordinate(dim, {}); }

  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  int rank() const { return rank_; }
  /// Basis indices when this is a coordinate projection.
  const std::optional<std::vector<int>>& coordinates() const { return coords_; }

 private:
  Projection(Matrix m, int rank, std::optional<std::vector<int>> coords)
      : m_(std::move(m)), rank_(rank), coords_(std::move(coords)) {}

  Matrix m_;
  int rank_;
  std::optional<std::vector<int>> coords_;
};

class CondenserProblem {
 public:
  CondenserProblem(OperatorTuple tuple, Projection p, Projection q, ObjectiveKind objective,
                   SchattenNorm norm);

  const OperatorTuple& tuple() const { return tuple_; }
  const Projection& P() const { return p_; }
  const Projection& Q() const { return q_; }
  ObjectiveKind objective() const { return objective_; }
  const SchattenNorm& norm() const { return norm_; }
  int dim() const { return tuple_.dim(); }

  /// Columns span ran(I - P - Q).
  const Matrix& free_basis() const { return free_basis_; }
  int free_dim() const { return static_cast<int>(free_basis_.cols()); }

  /// True when the search space is the diagonal (permutation tuples).
  bool commutative() const { return tuple_.kind() == TupleKind::Permutation; }
  /// For coordinate P and Q: indices outside both.
  const std::vector<int>& free_indices() const { return free_indices_; }

  CondenserProblem with_objective(ObjectiveKind kind) const;
  CondenserProblem with_norm(SchattenNorm norm) const;
  CondenserProblem with_projections(Projection p, Projection q) const;
  /// Dense automorphism version of a permutation problem.
  CondenserProblem lifted() const;

 private:
  OperatorTuple tuple_;
  Projection p_;
  Projection q_;
  ObjectiveKind objective_;
  SchattenNorm norm_;
  Matrix free_basis_;
  std::vector<int> free_indices_;
};

/// A point of C_PQ: the compression W and the assembled ambient X.
struct FeasiblePoint {
  Matrix W;
  Matrix X;
};

/// X = P + V W V*; W must satisfy 0 <= W <= I within 1e-8.
FeasiblePoint assemble(const CondenserProblem& problem, const Matrix& W);

/// Frobenius-nearest feasible point: clip the spectrum of V* Xfree V to [0, 1].
FeasiblePoint project_feasible(const Matrix& Xfree, const CondenserProblem& problem);

/// Diagonal feasible point from values on the free indices (commutative path).
Matrix assemble_diagonal(const CondenserProblem& problem, const RealVector& free_values);

/// Exchange P and Q.
CondenserProblem swap_condenser(const CondenserProblem& problem);

struct FeasibilityReport {
  double xp_defect = 0.0;  // ||XP - P||
  double xq_defect = 0.0;  // ||XQ||
  double min_eig = 0.0;
  double max_eig = 0.0;
  bool ok(double tol = 1e-10, double spec_tol = 1e-8) const {
    return xp_defect <= tol && xq_defect <= tol && min_eig >= -spec_tol && max_eig <= 1 + spec_tol;
  }
};

FeasibilityReport check_feasible(const CondenserProblem& problem, const Matrix& X);

}  // namespace qcmod
