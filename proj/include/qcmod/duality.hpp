// Lower bounds for the condenser modulus from dual certificates.
//
// A certificate is a tuple of Hermitian X_j with sum_j |X_j|_q = 1. With
//   Y = i sum_j [T_j, X_j]              (commutator tuples)
//   Y = sum_j (U_j X_j U_j* - X_j)      (unitary / automorphism tuples)
// and R = I - P - Q, every feasible A satisfies
//   Tr(PYP) - Tr((RYR)_-) <= Tr(AY) <= max_j |C_j(A)|_p.

#pragma once

#include <optional>
#include <vector>

#include "qcmod/condenser_model.hpp"
#include "qcmod/shift_geometry.hpp"

namespace qcmod {

struct DualCertificate {
  std::vector<Matrix> X;

  /// sum_j |X_j|_q
  double normalization(const SchattenNorm& dual_norm) const;
  /// Rescaled copy with normalization 1; throws on the zero certificate.
  DualCertificate normalized(const SchattenNorm& dual_norm) const;
};

struct DualBound {
  Matrix Y;
  double bound = 0.0;
  double trace_pyp = 0.0;       // Tr(PYP)
  double trace_negative = 0.0;  // Tr((RYR)_-)
};

/// Y for the certificate, before any normalization check.
Matrix dual_operator(const CondenserProblem& problem, const std::vector<Matrix>& X);

/// Hilbert-Schmidt adjoint of X_j -> Y_j(X_j), applied to A.
Matrix dual_adjoint(const CondenserProblem& problem, int j, const Matrix& A);

/// Evaluates the bound. The certificate must be normalized to 1e-10 and the
/// objective must dominate the max functional (max, column, or n = 1).
DualBound dual_bound(const CondenserProblem& problem, const DualCertificate& cert);

struct DualAscentConfig {
  int max_iters = 400;
  double eta0 = 0.5;
  /// Feasible point used to seed the certificate (defaults to P + R/2).
  std::optional<Matrix> warm_start;
};

struct DualAscentResult {
  DualCertificate certificate;
  double bound = 0.0;
  int iterations = 0;
  int best_iteration = 0;
};

/// Projected supergradient ascent of the bound on the sphere sum_j |X_j|_q = 1.
DualAscentResult dual_ascent(const CondenserProblem& problem, const DualAscentConfig& config = {});

/// Element X with |X|_q = 1 and Tr(MX) = |M|_p for Hermitian M.
Matrix norming_element(const Matrix& M, const SchattenNorm& norm);

/// Explicit diagonal certificate for a shift condenser on its cyclic window.
/// p > 1: g = c sum_j eps_j l_j^{-p/q} on [a_j, b_j); p = 1: +-1 pattern with tails.
DualCertificate shift_dual_certificate(const ShiftCondenserSpec& spec);

}  // namespace qcmod
