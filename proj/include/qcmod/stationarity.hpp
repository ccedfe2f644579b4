// Noncommutative p-Laplace residuals and the compressed one-sided stationarity
// conditions satisfied by minimizers of the column functionals.
//
// For G = -sum_j [X, T_j]^2 and s = p/2 - 1,
//   theta_tau   = sum_k [T_k, [X, T_k] G^s + G^s [X, T_k]]
// and for E_k = alpha_k(X) - X, G = sum_j E_j^2,
//   D_k         = E_k G^s + G^s E_k
//   theta_alpha = sum_k (alpha_k^{-1}(D_k) - D_k).
// The directional derivatives of I^p are
//   d/de I^p(X + eB) = -(p/2) Tr(B theta_tau)   (commutator tuples)
//   d/de I^p(X + eB) = +(p/2) Tr(B theta_alpha) (automorphism tuples)
// so the compressed checks are run on the oriented residual R with
// d/de I^p(X + eB) = (p/2) Tr(B R), i.e. R = -theta_tau or R = theta_alpha.

#pragma once

#include "qcmod/condenser_model.hpp"

namespace qcmod {

Matrix theta_tau(const OperatorTuple& tuple, const Matrix& X, double p);
Matrix theta_alpha(const OperatorTuple& tuple, const Matrix& X, double p);

/// R with d/de I^p(X + eB)|_0 = (p/2) Tr(B R) for the problem's column functional.
Matrix oriented_residual(const CondenserProblem& problem, const Matrix& X);

struct StationarityReport {
  double residual_norm = 0.0;    // ||R||
  double interior_residual = 0.0;  // ||R|| compressed to ran(I - P1 - Q1)
  Matrix theta;                  // oriented residual R
  Matrix P1;                     // E(X; {1})
  Matrix Q1;                     // E(X; {0})
  double neg_check = 0.0;        // max eig of (I-P-Q1) R (I-P-Q1) on its range
  double pos_check = 0.0;        // min eig of (I-P1-Q) R (I-P1-Q) on its range
  bool nesting_ok = true;        // P <= P1, Q <= Q1, P1 Q1 = 0
  bool ambiguous_clusters = false;
  bool advisory = false;         // p < 2: regularized powers, conditions not guaranteed

  bool passes(double tol) const { return neg_check <= tol && pos_check >= -tol; }
};

inline constexpr double kClusterTol = 1e-6;

StationarityReport check_compressed(const CondenserProblem& problem, const Matrix& X,
                                    double cluster_tol = kClusterTol);

}  // namespace qcmod
