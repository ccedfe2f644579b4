#include "qcmod/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qcmod {

double scale_of(const Matrix& x) {
  return 1.0 + (x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff());
}

bool is_finite(const Matrix& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Complex z = x.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

bool is_hermitian(const Matrix& x, double rel_tol) {
  if (x.rows() != x.cols()) return false;
  if (x.size() == 0) return true;
  return (x - x.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale_of(x);
}

void require_square(const Matrix& x, const std::string& what) {
  if (x.rows() != x.cols() || x.rows() == 0)
    throw ValidationError(what + ": expected a nonempty square matrix");
  if (!is_finite(x)) throw ValidationError(what + ": entries must be finite");
}

void require_hermitian(const Matrix& x, const std::string& what) {
  require_square(x, what);
  if (!is_hermitian(x)) throw ValidationError(what + ": matrix is not self-adjoint");
}

Matrix hermitian_part(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

Matrix commutator(const Matrix& x, const Matrix& y) { return x * y - y * x; }

double operator_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  const RealVector s = singular_value_vector(x);
  return s.size() ? s[0] : 0.0;
}

double real_inner(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

// ---------------------------------------------------------------------------

SchattenNorm::SchattenNorm(double p) : p_(p) {
  if (std::isnan(p) || p < 1.0) throw ValidationError("Schatten exponent must satisfy p >= 1");
}

SchattenNorm SchattenNorm::infinity() {
  return SchattenNorm(std::numeric_limits<double>::infinity());
}

bool SchattenNorm::is_infinite() const { return std::isinf(p_); }

double SchattenNorm::q() const {
  if (is_infinite()) return 1.0;
  if (p_ == 1.0) return std::numeric_limits<double>::infinity();
  return p_ / (p_ - 1.0);
}

double SchattenNorm::of_values(const RealVector& sigma) const {
  if (sigma.size() == 0) return 0.0;
  const double top = sigma.cwiseAbs().maxCoeff();
  if (is_infinite() || top == 0.0) return top;
  // Scale by the largest value to keep sigma^p in range for large p.
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) acc += std::pow(std::abs(sigma[i]) / top, p_);
  return top * std::pow(acc, 1.0 / p_);
}

// ---------------------------------------------------------------------------

Eigensystem eigh(const Matrix& h) {
  require_hermitian(h, "eigh");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigh: self-adjoint eigensolver did not converge (dim " +
                         std::to_string(h.rows()) + ")");
  // Eigen returns ascending order.
  const Eigen::Index n = h.rows();
  Eigensystem es{RealVector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    es.values[i] = solver.eigenvalues()[n - 1 - i];
    es.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return es;
}

RealVector singular_value_vector(const Matrix& x) {
  if (!is_finite(x)) throw ValidationError("singular_values: entries must be finite");
  if (x.size() == 0) return RealVector();
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues();  // already nonincreasing
}

SingularValueProfile singular_values(const Matrix& x) {
  const RealVector s = singular_value_vector(x);
  SingularValueProfile profile;
  profile.values.assign(s.data(), s.data() + s.size());
  return profile;
}

double SingularValueProfile::mu(double t) const {
  if (t <= 0.0) throw ValidationError("mu(t, x) is defined for t > 0");
  const auto k = static_cast<std::size_t>(std::ceil(t)) - 1;
  return k < values.size() ? values[k] : 0.0;
}

double schatten_norm(const Matrix& x, const SchattenNorm& norm) {
  return norm.of_values(singular_value_vector(x));
}

Matrix positive_part(const Matrix& h) {
  return spectral_apply(eigh(h), [](double l) { return l > 0.0 ? l : 0.0; });
}

Matrix negative_part(const Matrix& h) {
  return spectral_apply(eigh(h), [](double l) { return l < 0.0 ? -l : 0.0; });
}

// ---------------------------------------------------------------------------

bool RealSet::contains(double x, double tol) const {
  // Closed endpoints are fattened outward, open ones pulled inward.
  const bool above = lower_closed ? x >= lower - tol : x > lower + tol;
  const bool below = upper_closed ? x <= upper + tol : x < upper - tol;
  return above && below;
}

SpectralProjectionResult spectral_projection(const Matrix& h, const RealSet& set, double tol) {
  if (!(tol > 0.0)) throw ValidationError("spectral_projection: tol must be positive");
  const Eigensystem es = eigh(h);
  const Eigen::Index n = h.rows();
  SpectralProjectionResult out{Matrix::Zero(n, n), 0, false};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = es.values[i];
    const bool in = set.contains(l, tol);
    if (in != set.contains(l, 10.0 * tol) || in != set.contains(l, 0.1 * tol)) out.ambiguous = true;
    if (in) {
      out.projection += es.vectors.col(i) * es.vectors.col(i).adjoint();
      ++out.rank;
    }
  }
  return out;
}

Matrix matrix_power_psd(const Matrix& h, double s) {
  const Eigensystem es = eigh(h);
  const double norm = es.values.size() ? std::max(std::abs(es.values[0]),
                                                  std::abs(es.values[es.values.size() - 1]))
                                       : 0.0;
  if (es.values.size() && es.values[es.values.size() - 1] < -1e-8 * std::max(norm, 1e-300))
    throw ValidationError("matrix_power_psd: matrix has a negative eigenvalue " +
                          std::to_string(es.values[es.values.size() - 1]));
  if (s == 0.0) return Matrix::Identity(h.rows(), h.cols());
  const double rank_tol = 1e-10 * norm;
  return spectral_apply(es, [&](double l) {
    if (l <= rank_tol) return 0.0;
    return std::pow(l, s);
  });
}

Matrix pinch(const Matrix& x, const std::vector<std::vector<int>>& blocks) {
  require_square(x, "pinch");
  const auto n = static_cast<int>(x.rows());
  std::vector<int> owner(n, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int i : blocks[b]) {
      if (i < 0 || i >= n) throw ValidationError("pinch: block index out of range");
      if (owner[i] != -1) throw ValidationError("pinch: blocks overlap at index " + std::to_string(i));
      owner[i] = static_cast<int>(b);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end())
    throw ValidationError("pinch: blocks do not cover the index set");
  Matrix out = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (owner[i] == owner[j]) out(i, j) = x(i, j);
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

int clifford_dimension(int n) {
  if (n < 1) throw ValidationError("clifford_matrices: need at least one generator");
  return 1 << ((n + 1) / 2);
}

std::vector<Matrix> clifford_matrices(int n) {
  const int qubits = (n + 1) / 2;
  clifford_dimension(n);  // validates n
  Matrix id = Matrix::Identity(2, 2);
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;

  std::vector<Matrix> out;
  out.reserve(n);
  for (int k = 0; k < qubits && static_cast<int>(out.size()) < n; ++k) {
    for (const Matrix* pauli : {&sx, &sy}) {
      if (static_cast<int>(out.size()) == n) break;
      Matrix e = Matrix::Identity(1, 1);
      for (int site = 0; site < qubits; ++site) {
        const Matrix& factor = site < k ? sz : (site == k ? *pauli : id);
        e = kron(e, factor);
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace qcmod
