// Random instances and small independent oracles shared by the test binaries.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qcmod/condenser_model.hpp"
#include "qcmod/shift_geometry.hpp"

namespace testing {

using qcmod::Complex;
using qcmod::Matrix;
using qcmod::RealVector;

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
  double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }

  Matrix general(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) m(i, k) = Complex(normal(), normal());
    return m;
  }
  Matrix hermitian(int n) {
    const Matrix g = general(n);
    return 0.5 * (g + g.adjoint());
  }
  Matrix unitary(int n) {
    Eigen::HouseholderQR<Matrix> qr(general(n));
    return qr.householderQ() * Matrix::Identity(n, n);
  }
  /// Hermitian W with spectrum uniform in [0, 1].
  Matrix contraction(int n) {
    const Matrix u = unitary(n);
    RealVector d(n);
    for (int i = 0; i < n; ++i) d[i] = uniform();
    return u * d.cast<Complex>().asDiagonal() * u.adjoint();
  }
  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), gen);
    return p;
  }
};

/// Random problem of the given kind with coordinate P and Q built from a random
/// split of the basis (|P|, |Q| >= 1 and at least one free index).
inline qcmod::CondenserProblem random_problem(Rng& rng, qcmod::TupleKind kind, int dim, int n,
                                              qcmod::ObjectiveKind objective, double p) {
  using namespace qcmod;
  std::vector<int> order = rng.permutation(dim);
  const int np = rng.integer(1, std::max(1, (dim - 1) / 2));
  const int nq = rng.integer(1, std::max(1, dim - np - 1));
  std::vector<int> pi(order.begin(), order.begin() + np);
  std::vector<int> qi(order.begin() + np, order.begin() + np + nq);
  std::vector<Matrix> ops;
  std::vector<std::vector<int>> perms;
  for (int j = 0; j < n; ++j) {
    if (kind == TupleKind::SelfAdjoint) ops.push_back(rng.hermitian(dim));
    else if (kind == TupleKind::Permutation) perms.push_back(rng.permutation(dim));
    else ops.push_back(rng.unitary(dim));
  }
  OperatorTuple tuple = kind == TupleKind::SelfAdjoint  ? OperatorTuple::self_adjoint(ops)
                        : kind == TupleKind::Unitary    ? OperatorTuple::unitary(ops)
                        : kind == TupleKind::Automorphism ? OperatorTuple::automorphism(ops)
                                                          : OperatorTuple::permutation(dim, perms);
  return CondenserProblem(std::move(tuple), Projection::coordinate(dim, pi), Projection::coordinate(dim, qi),
                          objective, SchattenNorm(p));
}

inline qcmod::FeasiblePoint random_feasible(Rng& rng, const qcmod::CondenserProblem& problem) {
  return qcmod::assemble(problem, rng.contraction(problem.free_dim()));
}

/// Z_3 instance: sigma(i) = i - 1 mod 3, P = e0, Q = e2.
inline qcmod::CondenserProblem z3_problem(double p, qcmod::TupleKind kind = qcmod::TupleKind::Permutation,
                                          qcmod::ObjectiveKind objective = qcmod::ObjectiveKind::Max) {
  using namespace qcmod;
  OperatorTuple t = OperatorTuple::permutation(3, {{2, 0, 1}});
  if (kind == TupleKind::Automorphism) t = t.as_automorphism();
  else if (kind == TupleKind::Unitary) t = OperatorTuple::unitary(t.ops());
  return CondenserProblem(t, Projection::coordinate(3, {0}), Projection::coordinate(3, {2}), objective,
                          SchattenNorm(p));
}

/// Minimum over w of the Z_3 vector objective |1-w|^p + |w|^p + 1 on a fine grid.
inline double z3_oracle(double p, int grid = 100001) {
  double best = INFINITY;
  for (int i = 0; i < grid; ++i) {
    const double w = static_cast<double>(i) / (grid - 1);
    const double v = std::pow(std::abs(1.0 - w), p) + std::pow(w, p) + 1.0;
    best = std::min(best, v);
  }
  return std::pow(best, 1.0 / p);
}

/// Discrete Dirichlet energy minimum on a cycle with f = 1 on `ones`, f = 0 on
/// `zeros` (p = 2): solve the graph Laplace equation on the free sites.
inline double cycle_dirichlet_p2(int n, const std::vector<int>& ones, const std::vector<int>& zeros) {
  std::vector<int> fixed(n, -1);
  for (int k : ones) fixed[k] = 1;
  for (int k : zeros) fixed[k] = 0;
  std::vector<int> free_idx, pos(n, -1);
  for (int k = 0; k < n; ++k)
    if (fixed[k] < 0) {
      pos[k] = static_cast<int>(free_idx.size());
      free_idx.push_back(k);
    }
  const int m = static_cast<int>(free_idx.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (int r = 0; r < m; ++r) {
    const int k = free_idx[r];
    L(r, r) = 2.0;
    for (int nb : {(k + 1) % n, (k + n - 1) % n}) {
      if (fixed[nb] >= 0) rhs[r] += fixed[nb];
      else L(r, pos[nb]) -= 1.0;
    }
  }
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd sol = m > 0 ? Eigen::VectorXd(L.ldlt().solve(rhs)) : Eigen::VectorXd();
  for (int k = 0; k < n; ++k) f[k] = fixed[k] >= 0 ? fixed[k] : sol[pos[k]];
  double energy = 0.0;
  for (int k = 0; k < n; ++k) energy += std::pow(f[(k + 1) % n] - f[k], 2);
  return std::sqrt(energy);
}

}  // namespace testing
