#include "qcmod/condenser_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qcmod {

std::string to_string(TupleKind kind) {
  switch (kind) {
    case TupleKind::SelfAdjoint: return "selfadjoint";
    case TupleKind::Unitary: return "unitary";
    case TupleKind::Automorphism: return "automorphism";
    case TupleKind::Permutation: return "permutation";
  }
  return "?";
}

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::Max: return "max";
    case ObjectiveKind::Column: return "column";
    case ObjectiveKind::Dirac: return "dirac";
  }
  return "?";
}

TupleKind tuple_kind_from_string(const std::string& s) {
  if (s == "selfadjoint") return TupleKind::SelfAdjoint;
  if (s == "unitary") return TupleKind::Unitary;
  if (s == "automorphism") return TupleKind::Automorphism;
  if (s == "permutation") return TupleKind::Permutation;
  throw ValidationError("unknown tuple kind '" + s +
                        "' (expected selfadjoint|unitary|automorphism|permutation)");
}

ObjectiveKind objective_kind_from_string(const std::string& s) {
  if (s == "max") return ObjectiveKind::Max;
  if (s == "column") return ObjectiveKind::Column;
  if (s == "dirac") return ObjectiveKind::Dirac;
  throw ValidationError("unknown objective '" + s + "' (expected max|column|dirac)");
}

// ---------------------------------------------------------------------------

namespace {

int common_dim(const std::vector<Matrix>& ops, const std::string& what) {
  if (ops.empty()) throw ValidationError(what + ": tuple must contain at least one operator");
  const auto dim = static_cast<int>(ops.front().rows());
  for (const auto& op : ops) {
    require_square(op, what);
    if (op.rows() != dim) throw ValidationError(what + ": operators have different dimensions");
  }
  return dim;
}

void require_unitary(const Matrix& u, const std::string& what) {
  const Matrix defect = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  if (defect.cwiseAbs().maxCoeff() > 1e-10) throw ValidationError(what + ": operator is not unitary");
}

}  // namespace

OperatorTuple::OperatorTuple(TupleKind kind, int dim, std::vector<Matrix> ops,
                             std::vector<std::vector<int>> perms)
    : kind_(kind), dim_(dim), ops_(std::move(ops)), perms_(std::move(perms)) {}

OperatorTuple OperatorTuple::self_adjoint(std::vector<Matrix> ops) {
  const int dim = common_dim(ops, "selfadjoint tuple");
  for (const auto& t : ops) require_hermitian(t, "selfadjoint tuple");
  for (auto& t : ops) t = hermitian_part(t);
  return OperatorTuple(TupleKind::SelfAdjoint, dim, std::move(ops), {});
}

OperatorTuple OperatorTuple::unitary(std::vector<Matrix> ops) {
  const int dim = common_dim(ops, "unitary tuple");
  for (const auto& u : ops) require_unitary(u, "unitary tuple");
  return OperatorTuple(TupleKind::Unitary, dim, std::move(ops), {});
}

OperatorTuple OperatorTuple::automorphism(std::vector<Matrix> ops) {
  const int dim = common_dim(ops, "automorphism tuple");
  for (const auto& u : ops) require_unitary(u, "automorphism tuple");
  return OperatorTuple(TupleKind::Automorphism, dim, std::move(ops), {});
}

OperatorTuple OperatorTuple::permutation(int dim, std::vector<std::vector<int>> perms) {
  if (dim < 1) throw ValidationError("permutation tuple: dimension must be positive");
  if (perms.empty()) throw ValidationError("permutation tuple: need at least one permutation");
  std::vector<Matrix> lifted;
  for (const auto& sigma : perms) {
    if (static_cast<int>(sigma.size()) != dim)
      throw ValidationError("permutation tuple: permutation length differs from dim");
    std::vector<int> seen(dim, 0);
    for (int v : sigma) {
      if (v < 0 || v >= dim || seen[v]++)
        throw ValidationError("permutation tuple: not a permutation of {0..dim-1}");
    }
    Matrix u = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) u(k, sigma[k]) = 1.0;
    lifted.push_back(std::move(u));
  }
  return OperatorTuple(TupleKind::Permutation, dim, std::move(lifted), std::move(perms));
}

OperatorTuple OperatorTuple::as_automorphism() const {
  if (kind_ == TupleKind::SelfAdjoint)
    throw ValidationError("as_automorphism: self-adjoint tuples have no automorphism form");
  return OperatorTuple(TupleKind::Automorphism, dim_, ops_, {});
}

double OperatorTuple::operator_bound() const {
  if (is_unitary_kind()) return 1.0;
  double c = 0.0;
  for (const auto& t : ops_) c = std::max(c, operator_norm(t));
  return c;
}

// ---------------------------------------------------------------------------

Projection Projection::from_matrix(const Matrix& m) {
  require_hermitian(m, "projection");
  const Matrix h = hermitian_part(m);
  if ((h * h - h).cwiseAbs().maxCoeff() > kProjectionTol)
    throw ValidationError("projection: matrix is not idempotent (P^2 != P)");
  const Eigensystem es = eigh(h);
  int rank = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double l = es.values[i];
    if (std::abs(l - 1.0) <= kProjectionTol) ++rank;
    else if (std::abs(l) > kProjectionTol)
      throw ValidationError("projection: eigenvalue outside {0, 1}");
  }
  // Coordinate projections are recognised so the diagonal fast path applies.
  std::optional<std::vector<int>> coords;
  if ((h - Matrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= kProjectionTol) {
    std::vector<int> idx;
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      if (h(i, i).real() > 0.5) idx.push_back(static_cast<int>(i));
    coords = std::move(idx);
  }
  return Projection(h, rank, std::move(coords));
}

Projection Projection::coordinate(int dim, std::vector<int> indices) {
  if (dim < 1) throw ValidationError("projection: dimension must be positive");
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
    throw ValidationError("projection: repeated index");
  Matrix m = Matrix::Zero(dim, dim);
  for (int i : indices) {
    if (i < 0 || i >= dim) throw ValidationError("projection: index out of range");
    m(i, i) = 1.0;
  }
  const auto rank = static_cast<int>(indices.size());
  return Projection(std::move(m), rank, std::move(indices));
}

// ---------------------------------------------------------------------------

CondenserProblem::CondenserProblem(OperatorTuple tuple, Projection p, Projection q,
                                   ObjectiveKind objective, SchattenNorm norm)
    : tuple_(std::move(tuple)),
      p_(std::move(p)),
      q_(std::move(q)),
      objective_(objective),
      norm_(norm) {
  const int n = tuple_.dim();
  if (p_.dim() != n || q_.dim() != n)
    throw ValidationError("problem: P, Q and the tuple must share one dimension");
  if ((p_.matrix() * q_.matrix()).cwiseAbs().maxCoeff() > kProjectionTol)
    throw ValidationError("problem: PQ != 0 (P and Q must be orthogonal)");

  const Matrix r = Matrix::Identity(n, n) - p_.matrix() - q_.matrix();
  if (p_.coordinates() && q_.coordinates()) {
    std::set<int> fixed(p_.coordinates()->begin(), p_.coordinates()->end());
    fixed.insert(q_.coordinates()->begin(), q_.coordinates()->end());
    for (int i = 0; i < n; ++i)
      if (!fixed.count(i)) free_indices_.push_back(i);
    free_basis_ = Matrix::Zero(n, static_cast<Eigen::Index>(free_indices_.size()));
    for (std::size_t k = 0; k < free_indices_.size(); ++k)
      free_basis_(free_indices_[k], static_cast<Eigen::Index>(k)) = 1.0;
  } else {
    const Eigensystem es = eigh(r);
    int rank = 0;
    while (rank < es.values.size() && es.values[rank] > 0.5) ++rank;
    free_basis_ = es.vectors.leftCols(rank);
  }

  if (commutative() && !(p_.coordinates() && q_.coordinates()))
    throw ValidationError("problem: permutation tuples require coordinate projections P and Q");
}

CondenserProblem CondenserProblem::with_objective(ObjectiveKind kind) const {
  return CondenserProblem(tuple_, p_, q_, kind, norm_);
}

CondenserProblem CondenserProblem::with_norm(SchattenNorm norm) const {
  return CondenserProblem(tuple_, p_, q_, objective_, norm);
}

CondenserProblem CondenserProblem::with_projections(Projection p, Projection q) const {
  return CondenserProblem(tuple_, std::move(p), std::move(q), objective_, norm_);
}

CondenserProblem CondenserProblem::lifted() const {
  if (!commutative()) return *this;
  return CondenserProblem(tuple_.as_automorphism(), p_, q_, objective_, norm_);
}

// ---------------------------------------------------------------------------

FeasiblePoint assemble(const CondenserProblem& problem, const Matrix& W) {
  const int r = problem.free_dim();
  if (W.rows() != r || W.cols() != r)
    throw ValidationError("assemble: W must act on ran(I - P - Q) (size " + std::to_string(r) + ")");
  if (r > 0) {
    require_hermitian(W, "assemble");
    const Eigensystem es = eigh(W);
    if (es.values[0] > 1.0 + 1e-8 || es.values[r - 1] < -1e-8)
      throw ValidationError("assemble: W must satisfy 0 <= W <= I");
  }
  const Matrix& v = problem.free_basis();
  FeasiblePoint pt{hermitian_part(W), problem.P().matrix()};
  if (r > 0) pt.X += v * pt.W * v.adjoint();
  pt.X = hermitian_part(pt.X);
  return pt;
}

FeasiblePoint project_feasible(const Matrix& Xfree, const CondenserProblem& problem) {
  if (Xfree.rows() != problem.dim() || Xfree.cols() != problem.dim())
    throw ValidationError("project_feasible: dimension mismatch");
  const Matrix& v = problem.free_basis();
  const int r = problem.free_dim();
  FeasiblePoint pt{Matrix::Zero(r, r), problem.P().matrix()};
  if (r == 0) return pt;
  const Matrix compressed = hermitian_part(v.adjoint() * hermitian_part(Xfree) * v);
  pt.W = hermitian_part(spectral_apply(eigh(compressed), [](double l) { return std::clamp(l, 0.0, 1.0); }));
  pt.X = hermitian_part(pt.X + v * pt.W * v.adjoint());
  return pt;
}

Matrix assemble_diagonal(const CondenserProblem& problem, const RealVector& free_values) {
  const auto& free = problem.free_indices();
  if (!problem.P().coordinates() || !problem.Q().coordinates())
    throw ValidationError("assemble_diagonal: requires coordinate projections");
  if (free_values.size() != static_cast<Eigen::Index>(free.size()))
    throw ValidationError("assemble_diagonal: wrong number of free values");
  RealVector f = RealVector::Zero(problem.dim());
  for (int i : *problem.P().coordinates()) f[i] = 1.0;
  for (std::size_t k = 0; k < free.size(); ++k) f[free[k]] = free_values[static_cast<Eigen::Index>(k)];
  return f.cast<Complex>().asDiagonal();
}

CondenserProblem swap_condenser(const CondenserProblem& problem) {
  return problem.with_projections(problem.Q(), problem.P());
}

FeasibilityReport check_feasible(const CondenserProblem& problem, const Matrix& X) {
  FeasibilityReport rep;
  const Matrix& p = problem.P().matrix();
  const Matrix& q = problem.Q().matrix();
  rep.xp_defect = operator_norm(X * p - p);
  rep.xq_defect = operator_norm(X * q);
  const Eigensystem es = eigh(hermitian_part(X));
  rep.max_eig = es.values[0];
  rep.min_eig = es.values[es.values.size() - 1];
  return rep;
}

}  // namespace qcmod
