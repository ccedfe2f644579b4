// Spectral calculus on small dense complex matrices.
//
// Everything here is a pure function of its arguments. Tolerances are
// relative to scale(x) = 1 + max |entry| unless stated otherwise.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcmod {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Raised for malformed inputs (shape, symmetry, idempotence, domain).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine fails to produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kProjectionTol = 1e-10;

double scale_of(const Matrix& x);
bool is_finite(const Matrix& x);
bool is_hermitian(const Matrix& x, double rel_tol = kHermitianTol);
void require_hermitian(const Matrix& x, const std::string& what);
void require_square(const Matrix& x, const std::string& what);

/// (x + x*) / 2
Matrix hermitian_part(const Matrix& x);
/// xy - yx
Matrix commutator(const Matrix& x, const Matrix& y);
/// Largest singular value.
double operator_norm(const Matrix& x);

/// Schatten exponent p in [1, inf] together with its conjugate q.
class SchattenNorm {
 public:
  explicit SchattenNorm(double p);

  static SchattenNorm infinity();

  double p() const { return p_; }
  /// Conjugate exponent, 1/p + 1/q = 1.
  double q() const;
  bool is_infinite() const;
  SchattenNorm dual() const { return SchattenNorm(q()); }

  /// |x|_p as a function of the singular values.
  double of_values(const RealVector& sigma) const;

 private:
  double p_;
};

struct Eigensystem {
  RealVector values;  // nonincreasing
  Matrix vectors;     // columns are orthonormal eigenvectors
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues nonincreasing.
Eigensystem eigh(const Matrix& h);

/// Rebuilds U diag(f(lambda)) U* from an eigensystem.
template <typename F>
Matrix spectral_apply(const Eigensystem& es, F&& f) {
  RealVector mapped(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) mapped[i] = f(es.values[i]);
  return es.vectors * mapped.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

/// Nonincreasing singular values; mu(t, x) is values[k] on (k, k+1].
struct SingularValueProfile {
  std::vector<double> values;

  /// Step function mu(t, x) for t > 0; zero past the last value.
  double mu(double t) const;
};

SingularValueProfile singular_values(const Matrix& x);
RealVector singular_value_vector(const Matrix& x);

double schatten_norm(const Matrix& x, const SchattenNorm& norm);
inline double schatten_norm(const Matrix& x, double p) { return schatten_norm(x, SchattenNorm(p)); }

Matrix positive_part(const Matrix& h);
Matrix negative_part(const Matrix& h);

/// A set of reals: a closed singleton {value} or an interval with
/// independently open/closed endpoints. Infinite endpoints are allowed.
struct RealSet {
  double lower;
  double upper;
  bool lower_closed = true;
  bool upper_closed = true;

  static RealSet singleton(double v) { return {v, v, true, true}; }
  static RealSet open(double a, double b) { return {a, b, false, false}; }
  static RealSet closed(double a, double b) { return {a, b, true, true}; }

  /// Membership after fattening the set by tol.
  bool contains(double x, double tol) const;
};

struct SpectralProjectionResult {
  Matrix projection;
  int rank = 0;
  /// Set when an eigenvalue sits within [tol, 10 tol] of the fattened set.
  bool ambiguous = false;
};

/// E(h; S): projection onto eigenvectors of h with eigenvalue in S (fattened by tol).
SpectralProjectionResult spectral_projection(const Matrix& h, const RealSet& set, double tol);

/// h^s for PSD h. 0^s := 0 for s != 0 and 0^0 := 1, so h^0 = I. Negative s acts
/// on the support; eigenvalues below rank_tol = 1e-10 ||h|| count as zero.
Matrix matrix_power_psd(const Matrix& h, double s);

/// Block-diagonal compression (conditional expectation onto the block algebra).
/// `blocks` must partition {0, ..., dim-1}.
Matrix pinch(const Matrix& x, const std::vector<std::vector<int>>& blocks);

/// n anticommuting Hermitian unitaries of size 2^ceil(n/2) built from Pauli
/// strings (Jordan-Wigner): e_j e_k + e_k e_j = 2 delta_jk I.
std::vector<Matrix> clifford_matrices(int n);

/// Dimension of the Clifford representation used for n generators.
int clifford_dimension(int n);

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Hilbert-Schmidt inner product Re Tr(a* b).
double real_inner(const Matrix& a, const Matrix& b);

}  // namespace qcmod
