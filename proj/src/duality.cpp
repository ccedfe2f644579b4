#include "qcmod/duality.hpp"

#include <cmath>

namespace qcmod {

double DualCertificate::normalization(const SchattenNorm& dual_norm) const {
  double total = 0.0;
  for (const auto& x : X) total += schatten_norm(x, dual_norm);
  return total;
}

DualCertificate DualCertificate::normalized(const SchattenNorm& dual_norm) const {
  const double total = normalization(dual_norm);
  if (!(total > 0.0)) throw ValidationError("certificate: cannot normalize the zero certificate");
  DualCertificate out;
  for (const auto& x : X) out.X.push_back(x / total);
  return out;
}

namespace {

void check_shape(const CondenserProblem& problem, const std::vector<Matrix>& X) {
  if (static_cast<int>(X.size()) != problem.tuple().size())
    throw ValidationError("certificate: expected one matrix per operator (" +
                          std::to_string(problem.tuple().size()) + ")");
  for (const auto& x : X) {
    require_hermitian(x, "certificate");
    if (x.rows() != problem.dim()) throw ValidationError("certificate: dimension mismatch");
  }
}

/// Negative spectral projection of RYR, embedded in the ambient space.
Matrix negative_support(const CondenserProblem& problem, const Matrix& y) {
  const Matrix& v = problem.free_basis();
  if (v.cols() == 0) return Matrix::Zero(y.rows(), y.cols());
  const Eigensystem es = eigh(hermitian_part(v.adjoint() * y * v));
  const Matrix pi = spectral_apply(es, [](double l) { return l < 0.0 ? 1.0 : 0.0; });
  return v * pi * v.adjoint();
}

}  // namespace

Matrix dual_operator(const CondenserProblem& problem, const std::vector<Matrix>& X) {
  check_shape(problem, X);
  const auto& tuple = problem.tuple();
  Matrix y = Matrix::Zero(problem.dim(), problem.dim());
  for (int j = 0; j < tuple.size(); ++j) {
    const Matrix& a = tuple.op(j);
    if (tuple.kind() == TupleKind::SelfAdjoint)
      y += Complex(0.0, 1.0) * commutator(a, X[j]);
    else
      y += a * X[j] * a.adjoint() - X[j];
  }
  return hermitian_part(y);
}

Matrix dual_adjoint(const CondenserProblem& problem, int j, const Matrix& A) {
  const auto& tuple = problem.tuple();
  const Matrix& a = tuple.op(j);
  if (tuple.kind() == TupleKind::SelfAdjoint) return hermitian_part(Complex(0.0, 1.0) * commutator(A, a));
  return hermitian_part(a.adjoint() * A * a - A);
}

DualBound dual_bound(const CondenserProblem& problem, const DualCertificate& cert) {
  if (problem.objective() == ObjectiveKind::Dirac && problem.tuple().size() > 1)
    throw ValidationError("dual_bound: no dual bound for the Dirac functional with n > 1");
  check_shape(problem, cert.X);
  const SchattenNorm dual = problem.norm().dual();
  const double total = cert.normalization(dual);
  if (std::abs(total - 1.0) > 1e-10)
    throw ValidationError("dual_bound: certificate is not normalized (sum |X_j|_q = " +
                          std::to_string(total) + ")");
  DualBound out;
  out.Y = dual_operator(problem, cert.X);
  const Matrix& p = problem.P().matrix();
  out.trace_pyp = (p * out.Y * p).trace().real();
  const Matrix& v = problem.free_basis();
  if (v.cols() > 0) {
    const Eigensystem es = eigh(hermitian_part(v.adjoint() * out.Y * v));
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
      if (es.values[i] < 0.0) out.trace_negative -= es.values[i];
  }
  out.bound = out.trace_pyp - out.trace_negative;
  return out;
}

Matrix norming_element(const Matrix& M, const SchattenNorm& norm) {
  const Eigensystem es = eigh(hermitian_part(M));
  const Eigen::Index n = es.values.size();
  const double top = es.values.cwiseAbs().maxCoeff();
  if (top == 0.0) return Matrix::Zero(n, n);
  auto sign = [](double l) { return l > 0.0 ? 1.0 : (l < 0.0 ? -1.0 : 0.0); };
  if (norm.is_infinite()) {
    Eigen::Index arg = 0;
    es.values.cwiseAbs().maxCoeff(&arg);
    return sign(es.values[arg]) * es.vectors.col(arg) * es.vectors.col(arg).adjoint();
  }
  const double p = norm.p();
  if (p == 1.0) return spectral_apply(es, [&](double l) { return std::abs(l) > 1e-14 * top ? sign(l) : 0.0; });
  const double mp = norm.of_values(es.values.cwiseAbs());
  return spectral_apply(es, [&](double l) { return sign(l) * std::pow(std::abs(l) / mp, p - 1.0); });
}

DualAscentResult dual_ascent(const CondenserProblem& problem, const DualAscentConfig& config) {
  if (config.max_iters < 0) throw ValidationError("dual_ascent: max_iters must be nonnegative");
  const auto& tuple = problem.tuple();
  const int n = tuple.size();
  const SchattenNorm& norm = problem.norm();
  const SchattenNorm dual = norm.dual();

  Matrix a0 = problem.P().matrix() + 0.5 * problem.free_basis() * problem.free_basis().adjoint();
  if (config.warm_start) {
    if (config.warm_start->rows() != problem.dim()) throw ValidationError("dual_ascent: warm start dimension");
    a0 = hermitian_part(*config.warm_start);
  }

  // Seed: norming elements of the blocks seen through A0, weighted by block size.
  DualCertificate cert;
  double weight_total = 0.0;
  for (int j = 0; j < n; ++j) {
    const Matrix m = dual_adjoint(problem, j, a0);
    const double w = schatten_norm(m, norm);
    cert.X.push_back(w * norming_element(m, norm));
    weight_total += w;
  }
  if (!(weight_total > 0.0)) {
    // A0 commutes with everything; start from an arbitrary direction.
    for (int j = 0; j < n; ++j) cert.X[j] = norming_element(problem.P().matrix() - problem.Q().matrix(), dual);
    if (cert.normalization(dual) == 0.0) cert.X[0] = Matrix::Identity(problem.dim(), problem.dim());
  }
  cert = cert.normalized(dual);

  DualAscentResult out;
  out.certificate = cert;
  out.bound = dual_bound(problem, cert).bound;
  for (int t = 1; t <= config.max_iters; ++t) {
    const Matrix y = dual_operator(problem, cert.X);
    const Matrix g = problem.P().matrix() + negative_support(problem, y);
    std::vector<Matrix> step(n);
    double gnorm = 0.0, xnorm = 0.0;
    for (int j = 0; j < n; ++j) {
      step[j] = dual_adjoint(problem, j, g);
      gnorm += step[j].squaredNorm();
      xnorm += cert.X[j].squaredNorm();
    }
    gnorm = std::sqrt(gnorm);
    if (gnorm == 0.0) break;
    const double eta = config.eta0 / std::sqrt(static_cast<double>(t)) * std::sqrt(xnorm) / gnorm;
    DualCertificate next;
    for (int j = 0; j < n; ++j) next.X.push_back(hermitian_part(cert.X[j] + eta * step[j]));
    if (!(next.normalization(dual) > 0.0)) break;
    cert = next.normalized(dual);
    out.iterations = t;
    const double b = dual_bound(problem, cert).bound;
    if (b > out.bound) {
      out.bound = b;
      out.certificate = cert;
      out.best_iteration = t;
    }
  }
  return out;
}

DualCertificate shift_dual_certificate(const ShiftCondenserSpec& spec) {
  spec.validate();
  const IntervalDecomposition d = decompose(spec.M, spec.N);
  const int n = spec.window;
  RealVector g = RealVector::Zero(n);
  if (spec.p > 1.0) {
    const SchattenNorm norm(spec.p);
    const double q = norm.q();
    double s = 0.0;
    for (const auto& iv : d.intervals) s += std::pow(static_cast<double>(iv.length()), 1.0 - spec.p);
    const double c = std::pow(s, -1.0 / q);
    for (const auto& iv : d.intervals) {
      const double v = c * iv.sign * std::pow(static_cast<double>(iv.length()), -spec.p / q);
      for (int k = iv.a; k < iv.b; ++k) g[spec.index(k)] = v;
    }
  } else {
    // Tails: -eps(1) left of a, -eps(m) from b on; they meet at the pin.
    const int first = d.intervals.front().sign;
    const int last = d.intervals.back().sign;
    const int pin = spec.pin_index();
    const int span = d.b - d.a;
    for (int i = span; i < pin; ++i) g[i] = -last;
    for (int i = pin; i < n; ++i) g[i] = -first;
    for (const auto& iv : d.intervals)
      for (int k = iv.a; k < iv.b; ++k) g[spec.index(k)] = iv.sign;
  }
  DualCertificate cert;
  cert.X.push_back(g.cast<Complex>().asDiagonal());
  return cert;
}

}  // namespace qcmod
