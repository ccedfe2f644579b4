#include "qcmod/objectives.hpp"

#include <algorithm>
#include <cmath>

namespace qcmod {

namespace {

constexpr double kTieTol = 1e-9;

bool is_real_diagonal(const Matrix& x) {
  const Eigen::Index n = x.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x(i, i).imag() != 0.0) return false;
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && x(i, j) != Complex(0.0)) return false;
  }
  return true;
}

/// Partial trace against e: W_ki = Tr(e Z_ki) over d x d blocks.
Matrix partial_trace_against(const Matrix& z, const Matrix& e) {
  const Eigen::Index d = e.rows();
  const Eigen::Index n = z.rows() / d;
  Matrix w(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i) w(k, i) = (e * z.block(k * d, i * d, d, d)).trace();
  return w;
}

Matrix stacked_gram(const std::vector<Matrix>& blocks) {
  Matrix g = Matrix::Zero(blocks.front().cols(), blocks.front().cols());
  for (const auto& c : blocks) g += c.adjoint() * c;
  return hermitian_part(g);
}

double gram_norm(const Matrix& g, const SchattenNorm& norm) {
  const Eigensystem es = eigh(g);
  RealVector sigma(es.values.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) sigma[i] = std::sqrt(std::max(es.values[i], 0.0));
  return norm.of_values(sigma);
}

struct StackGradient {
  double value = 0.0;
  double power_value = 0.0;
  Matrix direction;  // gradient, ambient dim
  bool exact = true;
};

/// Gradient of |col(C_j)|_p^p for a stack of blocks C_j = L_j(X); the adjoint
/// maps L_j^dagger are supplied by `adjoint(j, Z)`.
template <typename Adjoint>
StackGradient stack_gradient(const std::vector<Matrix>& blocks, const SchattenNorm& norm,
                             Adjoint&& adjoint, Eigen::Index ambient) {
  StackGradient out;
  const Matrix g = stacked_gram(blocks);
  const Eigensystem es = eigh(g);
  const double gmax = std::max(es.values[0], 0.0);
  const double p = norm.p();

  Matrix weight;  // Z_j = C_j * weight
  double factor = 1.0;
  if (norm.is_infinite()) {
    out.value = std::sqrt(gmax);
    out.power_value = out.value;
    out.exact = false;
    if (out.value == 0.0) {
      out.direction = Matrix::Zero(ambient, ambient);
      return out;
    }
    weight = es.vectors.col(0) * es.vectors.col(0).adjoint();
    factor = 1.0 / out.value;
  } else {
    RealVector sigma(es.values.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      sigma[i] = std::sqrt(std::max(es.values[i], 0.0));
      acc += std::pow(sigma[i], p);
    }
    out.power_value = acc;
    out.value = std::pow(acc, 1.0 / p);
    const double s = p / 2.0 - 1.0;
    if (s >= 0.0) {
      weight = spectral_apply(es, [&](double l) { return s == 0.0 ? 1.0 : std::pow(std::max(l, 0.0), s); });
    } else {
      const double reg = 1e-10 * (1.0 + gmax);
      weight = spectral_apply(es, [&](double l) { return std::pow(std::max(l, 0.0) + reg, s); });
      out.exact = false;
    }
    factor = p;
  }

  Matrix acc = Matrix::Zero(ambient, ambient);
  for (std::size_t j = 0; j < blocks.size(); ++j)
    acc += adjoint(static_cast<int>(j), blocks[j] * weight);
  out.direction = factor * hermitian_part(acc);
  return out;
}

}  // namespace

Matrix block_apply(const OperatorTuple& tuple, int j, const Matrix& B) {
  const Matrix& a = tuple.op(j);
  switch (tuple.kind()) {
    case TupleKind::SelfAdjoint:
    case TupleKind::Unitary:
      return B * a - a * B;
    case TupleKind::Automorphism:
    case TupleKind::Permutation:
      return a * B * a.adjoint() - B;
  }
  return {};
}

Matrix block_adjoint(const OperatorTuple& tuple, int j, const Matrix& Z) {
  const Matrix& a = tuple.op(j);
  switch (tuple.kind()) {
    case TupleKind::SelfAdjoint:
    case TupleKind::Unitary:
      return Z * a.adjoint() - a.adjoint() * Z;
    case TupleKind::Automorphism:
    case TupleKind::Permutation:
      return a.adjoint() * Z * a - Z;
  }
  return {};
}

BoundaryMap boundary_map(const CondenserProblem& problem, const Matrix& X) {
  require_square(X, "boundary_map");
  if (X.rows() != problem.dim()) throw ValidationError("boundary_map: dimension mismatch");
  const auto& tuple = problem.tuple();
  const int n = tuple.size();
  BoundaryMap d;
  if (problem.objective() == ObjectiveKind::Dirac) {
    const auto e = clifford_matrices(n);
    Matrix sum = Matrix::Zero(X.rows() * e.front().rows(), X.cols() * e.front().cols());
    for (int j = 0; j < n; ++j) sum += kron(block_apply(tuple, j, X), e[j]);
    d.blocks.push_back(std::move(sum));
  } else {
    for (int j = 0; j < n; ++j) d.blocks.push_back(block_apply(tuple, j, X));
  }
  return d;
}

double boundary_norm(const CondenserProblem& problem, const BoundaryMap& d) {
  const SchattenNorm& norm = problem.norm();
  if (problem.objective() == ObjectiveKind::Max) {
    double best = 0.0;
    for (const auto& c : d.blocks) best = std::max(best, schatten_norm(c, norm));
    return best;
  }
  if (d.blocks.size() == 1) return schatten_norm(d.blocks.front(), norm);
  return gram_norm(stacked_gram(d.blocks), norm);
}

double boundary_distance(const BoundaryMap& a, const BoundaryMap& b, const SchattenNorm& norm) {
  if (a.blocks.size() != b.blocks.size()) throw ValidationError("boundary_distance: shape mismatch");
  std::vector<Matrix> diff;
  for (std::size_t j = 0; j < a.blocks.size(); ++j) diff.push_back(a.blocks[j] - b.blocks[j]);
  return gram_norm(stacked_gram(diff), norm);
}

double evaluate(const CondenserProblem& problem, const Matrix& X) {
  if (problem.commutative() && X.rows() == problem.dim() && is_real_diagonal(X))
    return evaluate_diagonal(problem, X.diagonal().real());
  return boundary_norm(problem, boundary_map(problem, X));
}

// ---------------------------------------------------------------------------
// Commutative fast path. d_j(i) = f(sigma_j(i)) - f(i) is the diagonal of
// Ad U_j(D(f)) - D(f). For real f the Dirac sum satisfies
// (sum_j d_j(i) e_j)^2 = sum_j d_j(i)^2 I, so its singular values are the
// column values with multiplicity clifford_dimension(n).

namespace {

struct DiagonalDiffs {
  std::vector<RealVector> d;  // one vector per generator
};

DiagonalDiffs diagonal_diffs(const CondenserProblem& problem, const RealVector& f) {
  const auto& perms = problem.tuple().permutations();
  DiagonalDiffs out;
  for (const auto& sigma : perms) {
    RealVector d(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) d[i] = f[sigma[i]] - f[i];
    out.d.push_back(std::move(d));
  }
  return out;
}

void require_commutative(const CondenserProblem& problem, const RealVector& f) {
  if (!problem.commutative())
    throw ValidationError("diagonal evaluation requires a permutation tuple");
  if (f.size() != problem.dim()) throw ValidationError("diagonal evaluation: dimension mismatch");
}

}  // namespace

double evaluate_diagonal(const CondenserProblem& problem, const RealVector& f) {
  require_commutative(problem, f);
  const auto diffs = diagonal_diffs(problem, f);
  const SchattenNorm& norm = problem.norm();
  if (problem.objective() == ObjectiveKind::Max) {
    double best = 0.0;
    for (const auto& d : diffs.d) best = std::max(best, norm.of_values(d.cwiseAbs()));
    return best;
  }
  RealVector g = RealVector::Zero(f.size());
  for (const auto& d : diffs.d) g += d.cwiseAbs2();
  const RealVector sigma = g.cwiseSqrt();
  double value = norm.of_values(sigma);
  if (problem.objective() == ObjectiveKind::Dirac && !norm.is_infinite())
    value *= std::pow(static_cast<double>(clifford_dimension(problem.tuple().size())), 1.0 / norm.p());
  return value;
}

DiagonalGradient gradient_diagonal(const CondenserProblem& problem, const RealVector& f) {
  require_commutative(problem, f);
  const auto diffs = diagonal_diffs(problem, f);
  const auto& perms = problem.tuple().permutations();
  const SchattenNorm& norm = problem.norm();
  const double p = norm.p();
  const Eigen::Index dim = f.size();

  // Gradient of sum_i phi(G_i) with G_i = sum_{j in active} d_j(i)^2.
  auto stack = [&](const std::vector<int>& active, double multiplicity, DiagonalGradient& out) {
    RealVector g = RealVector::Zero(dim);
    for (int j : active) g += diffs.d[j].cwiseAbs2();
    RealVector weight(dim);
    if (norm.is_infinite()) {
      Eigen::Index arg = 0;
      const double gmax = g.maxCoeff(&arg);
      out.value = std::sqrt(gmax);
      out.power_value = out.value;
      out.exact = false;
      weight.setZero();
      if (out.value > 0.0) weight[arg] = 1.0 / out.value;  // d sqrt(G) = dG / (2 sqrt G)
      weight *= 0.5;
    } else {
      const double s = p / 2.0 - 1.0;
      const double reg = s < 0.0 ? 1e-10 * (1.0 + g.maxCoeff()) : 0.0;
      if (s < 0.0) out.exact = false;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        acc += std::pow(std::max(g[i], 0.0), p / 2.0);
        weight[i] = s == 0.0 ? 1.0 : std::pow(std::max(g[i], 0.0) + reg, s);
      }
      out.power_value = multiplicity * acc;
      out.value = std::pow(out.power_value, 1.0 / p);
      weight *= 0.5 * p * multiplicity;
    }
    // dG_i/df = 2 d_j(i) (e_{sigma_j(i)} - e_i)
    out.gradient = RealVector::Zero(dim);
    for (int j : active) {
      const auto& d = diffs.d[j];
      const auto& sigma = perms[j];
      for (Eigen::Index i = 0; i < dim; ++i) {
        const double c = 2.0 * weight[i] * d[i];
        out.gradient[sigma[i]] += c;
        out.gradient[i] -= c;
      }
    }
  };

  DiagonalGradient out;
  const int n = static_cast<int>(diffs.d.size());
  if (problem.objective() == ObjectiveKind::Max) {
    std::vector<double> values(n);
    for (int j = 0; j < n; ++j) values[j] = norm.of_values(diffs.d[j].cwiseAbs());
    const int arg = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
    std::vector<int> ties;
    for (int j = 0; j < n; ++j)
      if (values[j] >= values[arg] - kTieTol) ties.push_back(j);
    RealVector sum = RealVector::Zero(dim);
    for (int j : ties) {
      DiagonalGradient part;
      stack({j}, 1.0, part);
      sum += part.gradient;
      out.exact = out.exact && part.exact;
      if (j == arg) {
        out.value = part.value;
        out.power_value = part.power_value;
      }
    }
    out.gradient = sum / static_cast<double>(ties.size());
    out.active_index = arg;
    out.tie = ties.size() > 1;
    if (out.tie) out.exact = false;
    return out;
  }
  std::vector<int> all(n);
  for (int j = 0; j < n; ++j) all[j] = j;
  const double mult = problem.objective() == ObjectiveKind::Dirac && !norm.is_infinite()
                          ? static_cast<double>(clifford_dimension(n))
                          : 1.0;
  stack(all, mult, out);
  return out;
}

// ---------------------------------------------------------------------------

GradientReport gradient(const CondenserProblem& problem, const Matrix& X) {
  require_hermitian(X, "gradient");
  if (X.rows() != problem.dim()) throw ValidationError("gradient: dimension mismatch");
  const auto& tuple = problem.tuple();
  const int n = tuple.size();
  const Eigen::Index dim = X.rows();
  const SchattenNorm& norm = problem.norm();
  const BoundaryMap d = boundary_map(problem, X);
  GradientReport out;

  if (problem.objective() == ObjectiveKind::Dirac) {
    const auto e = clifford_matrices(n);
    auto adjoint = [&](int, const Matrix& z) {
      Matrix acc = Matrix::Zero(dim, dim);
      for (int j = 0; j < n; ++j) acc += block_adjoint(tuple, j, partial_trace_against(z, e[j]));
      return acc;
    };
    const auto sg = stack_gradient(d.blocks, norm, adjoint, dim);
    out.value = sg.value;
    out.power_value = sg.power_value;
    out.gradient = sg.direction;
    out.exact = sg.exact;
    return out;
  }

  if (problem.objective() == ObjectiveKind::Column) {
    auto adjoint = [&](int j, const Matrix& z) { return block_adjoint(tuple, j, z); };
    const auto sg = stack_gradient(d.blocks, norm, adjoint, dim);
    out.value = sg.value;
    out.power_value = sg.power_value;
    out.gradient = sg.direction;
    out.exact = sg.exact;
    return out;
  }

  // Max variant: gradient of the active block, averaged over ties.
  std::vector<double> values(n);
  for (int j = 0; j < n; ++j) values[j] = schatten_norm(d.blocks[j], norm);
  const int arg = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
  std::vector<int> ties;
  for (int j = 0; j < n; ++j)
    if (values[j] >= values[arg] - kTieTol) ties.push_back(j);
  Matrix sum = Matrix::Zero(dim, dim);
  bool exact = true;
  for (int j : ties) {
    auto adjoint = [&](int, const Matrix& z) { return block_adjoint(tuple, j, z); };
    const auto sg = stack_gradient({d.blocks[j]}, norm, adjoint, dim);
    sum += sg.direction;
    exact = exact && sg.exact;
    if (j == arg) {
      out.value = sg.value;
      out.power_value = sg.power_value;
    }
  }
  out.gradient = sum / static_cast<double>(ties.size());
  out.active_index = arg;
  out.tie = ties.size() > 1;
  out.exact = exact && !out.tie;
  return out;
}

double seminorm_constant(const CondenserProblem& problem) {
  const auto& tuple = problem.tuple();
  const double per_block = 2.0 * tuple.operator_bound();
  const auto n = static_cast<double>(tuple.size());
  switch (problem.objective()) {
    case ObjectiveKind::Max: return per_block;
    case ObjectiveKind::Column: return n * per_block;
    case ObjectiveKind::Dirac: {
      const SchattenNorm& norm = problem.norm();
      const double mult = norm.is_infinite()
                              ? 1.0
                              : std::pow(static_cast<double>(clifford_dimension(tuple.size())), 1.0 / norm.p());
      return n * mult * per_block;
    }
  }
  return per_block;
}

}  // namespace qcmod
