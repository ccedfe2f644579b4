#include "qcmod/stationarity.hpp"

#include <cmath>

#include "qcmod/objectives.hpp"

namespace qcmod {

namespace {

/// G^s with the h^0 = I convention; p < 2 powers act on the support.
/// Rounding can leave G slightly indefinite when the blocks are at noise level
/// relative to X, so eigenvalues above -(1e-12 (1 + |X|))^2 are clipped first.
Matrix gram_power(const Matrix& g, double p, double x_scale) {
  const double noise = std::pow(1e-12 * (1.0 + x_scale), 2);
  try {
    const Eigensystem es = eigh(hermitian_part(g));
    const double top = es.values.cwiseAbs().maxCoeff();
    if (es.values.minCoeff() >= -noise && top <= noise) return matrix_power_psd(Matrix::Zero(g.rows(), g.cols()), p / 2.0 - 1.0);
    return matrix_power_psd(hermitian_part(g), p / 2.0 - 1.0);
  } catch (const ValidationError& e) {
    throw NumericalError(std::string("p-Laplace residual: ") + e.what());
  }
}

void check_inputs(const OperatorTuple& tuple, const Matrix& X, double p) {
  require_hermitian(X, "p-Laplace residual");
  if (X.rows() != tuple.dim()) throw ValidationError("p-Laplace residual: dimension mismatch");
  if (!(p >= 1.0) || std::isinf(p)) throw ValidationError("p-Laplace residual: need finite p >= 1");
}

/// Orthonormal basis of the range of a projection.
Matrix range_basis(const Matrix& proj) {
  const Eigensystem es = eigh(hermitian_part(proj));
  Eigen::Index rank = 0;
  while (rank < es.values.size() && es.values[rank] > 0.5) ++rank;
  return es.vectors.leftCols(rank);
}

double extreme_eig(const Matrix& r, const Matrix& proj, bool want_max) {
  const Matrix v = range_basis(proj);
  if (v.cols() == 0) return 0.0;
  const Eigensystem es = eigh(hermitian_part(v.adjoint() * r * v));
  return want_max ? es.values[0] : es.values[es.values.size() - 1];
}

}  // namespace

Matrix theta_tau(const OperatorTuple& tuple, const Matrix& X, double p) {
  if (tuple.kind() != TupleKind::SelfAdjoint)
    throw ValidationError("theta_tau: requires a self-adjoint tuple");
  check_inputs(tuple, X, p);
  const Matrix x = hermitian_part(X);
  std::vector<Matrix> c;
  Matrix g = Matrix::Zero(x.rows(), x.cols());
  for (const auto& t : tuple.ops()) {
    c.push_back(commutator(x, t));
    g -= c.back() * c.back();
  }
  const Matrix gs = gram_power(g, p, operator_norm(x));
  Matrix theta = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t k = 0; k < c.size(); ++k)
    theta += commutator(tuple.op(static_cast<int>(k)), c[k] * gs + gs * c[k]);
  return theta;
}

Matrix theta_alpha(const OperatorTuple& tuple, const Matrix& X, double p) {
  if (!tuple.is_unitary_kind()) throw ValidationError("theta_alpha: requires unitaries");
  check_inputs(tuple, X, p);
  const Matrix x = hermitian_part(X);
  std::vector<Matrix> e;
  Matrix g = Matrix::Zero(x.rows(), x.cols());
  for (const auto& u : tuple.ops()) {
    e.push_back(u * x * u.adjoint() - x);
    g += e.back() * e.back();
  }
  const Matrix gs = gram_power(g, p, operator_norm(x));
  Matrix theta = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t k = 0; k < e.size(); ++k) {
    const Matrix d = e[k] * gs + gs * e[k];
    const Matrix& u = tuple.op(static_cast<int>(k));
    theta += u.adjoint() * d * u - d;
  }
  return theta;
}

Matrix oriented_residual(const CondenserProblem& problem, const Matrix& X) {
  const auto& tuple = problem.tuple();
  const double p = problem.norm().p();
  const bool column_like = problem.objective() == ObjectiveKind::Column ||
                           (problem.objective() == ObjectiveKind::Max && tuple.size() == 1);
  if (problem.objective() == ObjectiveKind::Max && tuple.size() > 1)
    throw ValidationError("stationarity: the max functional has no Euler equation; use column or dirac");
  if (problem.norm().is_infinite()) throw ValidationError("stationarity: requires finite p");
  if (column_like && tuple.kind() == TupleKind::SelfAdjoint) return -theta_tau(tuple, X, p);
  if (column_like && (tuple.kind() == TupleKind::Automorphism || tuple.kind() == TupleKind::Permutation))
    return theta_alpha(tuple, X, p);
  // Unitary commutators and Dirac functionals: rescaled gradient of I^p.
  return (2.0 / p) * gradient(problem, hermitian_part(X)).gradient;
}

StationarityReport check_compressed(const CondenserProblem& problem, const Matrix& X,
                                    double cluster_tol) {
  require_hermitian(X, "check_compressed");
  StationarityReport rep;
  const Eigen::Index n = X.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix& p = problem.P().matrix();
  const Matrix& q = problem.Q().matrix();

  rep.theta = hermitian_part(oriented_residual(problem, X));
  rep.residual_norm = operator_norm(rep.theta);
  rep.advisory = problem.norm().p() < 2.0;

  const auto p1 = spectral_projection(X, RealSet::singleton(1.0), cluster_tol);
  const auto q1 = spectral_projection(X, RealSet::singleton(0.0), cluster_tol);
  rep.P1 = p1.projection;
  rep.Q1 = q1.projection;
  rep.ambiguous_clusters = p1.ambiguous || q1.ambiguous;

  const double nest_tol = 1e-6;
  rep.nesting_ok = operator_norm(rep.P1 * p - p) <= nest_tol && operator_norm(rep.Q1 * q - q) <= nest_tol &&
                   operator_norm(rep.P1 * rep.Q1) <= nest_tol;

  rep.neg_check = extreme_eig(rep.theta, id - p - rep.Q1, true);
  rep.pos_check = extreme_eig(rep.theta, id - rep.P1 - q, false);
  const Matrix interior = id - rep.P1 - rep.Q1;
  const Matrix v = range_basis(interior);
  rep.interior_residual = v.cols() ? operator_norm(v.adjoint() * rep.theta * v) : 0.0;
  return rep;
}

}  // namespace qcmod
