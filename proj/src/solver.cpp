#include "qcmod/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "qcmod/objectives.hpp"

namespace qcmod {

void SolverConfig::validate() const {
  if (max_iters <= 0) throw ValidationError("solver: max_iters must be positive");
  if (restarts <= 0) throw ValidationError("solver: restarts must be positive");
  if (!(tol_grad > 0.0) || !(tol_value > 0.0)) throw ValidationError("solver: tolerances must be positive");
  if (value_window <= 0) throw ValidationError("solver: value_window must be positive");
  if (step_rule == StepRule::Fixed && !eta) throw ValidationError("solver: fixed step needs eta");
  if (eta && !(*eta > 0.0)) throw ValidationError("solver: eta must be positive");
}

std::optional<double> SolveReport::bracket() const {
  if (!dual_bound) return std::nullopt;
  return primal_value - *dual_bound;
}

namespace {

// Search over W (dense Hermitian compression).
struct DenseDomain {
  using Point = Matrix;
  const CondenserProblem& problem;

  Matrix ambient(const Point& w) const {
    Matrix x = problem.P().matrix();
    if (w.size()) x += problem.free_basis() * w * problem.free_basis().adjoint();
    return hermitian_part(x);
  }
  double value(const Point& w) const {
    const double v = evaluate(problem, ambient(w));
    return problem.norm().is_infinite() ? v : std::pow(v, problem.norm().p());
  }
  std::pair<double, Point> value_and_gradient(const Point& w) const {
    const auto g = gradient(problem, ambient(w));
    const Matrix& v = problem.free_basis();
    return {g.power_value, hermitian_part(v.adjoint() * g.gradient * v)};
  }
  Point project(const Point& w) const {
    if (w.size() == 0) return w;
    return hermitian_part(spectral_apply(eigh(hermitian_part(w)), [](double l) { return std::clamp(l, 0.0, 1.0); }));
  }
  static double inner(const Point& a, const Point& b) { return real_inner(a, b); }
  Point scaled_identity(double c) const {
    return Matrix::Identity(problem.free_dim(), problem.free_dim()) * Complex(c);
  }
  Point random(std::mt19937_64& rng) const {
    const int r = problem.free_dim();
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Matrix g(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix u = qr.householderQ() * Matrix::Identity(r, r);
    RealVector lambda(r);
    for (int i = 0; i < r; ++i) lambda[i] = uniform(rng);
    return hermitian_part(u * lambda.cast<Complex>().asDiagonal() * u.adjoint());
  }
};

// Search over the free diagonal entries (permutation tuples).
struct DiagonalDomain {
  using Point = RealVector;
  const CondenserProblem& problem;

  RealVector full(const Point& w) const {
    return assemble_diagonal(problem, w).diagonal().real();
  }
  Matrix ambient(const Point& w) const { return assemble_diagonal(problem, w); }
  double value(const Point& w) const {
    const double v = evaluate_diagonal(problem, full(w));
    return problem.norm().is_infinite() ? v : std::pow(v, problem.norm().p());
  }
  std::pair<double, Point> value_and_gradient(const Point& w) const {
    const auto g = gradient_diagonal(problem, full(w));
    const auto& free = problem.free_indices();
    Point out(static_cast<Eigen::Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) out[static_cast<Eigen::Index>(k)] = g.gradient[free[k]];
    return {g.power_value, out};
  }
  Point project(const Point& w) const { return w.cwiseMax(0.0).cwiseMin(1.0); }
  static double inner(const Point& a, const Point& b) { return a.dot(b); }
  Point scaled_identity(double c) const {
    return Point::Constant(static_cast<Eigen::Index>(problem.free_indices().size()), c);
  }
  Point random(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Point w(static_cast<Eigen::Index>(problem.free_indices().size()));
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = uniform(rng);
    return w;
  }
};

StepRule resolve_rule(const CondenserProblem& problem, StepRule requested) {
  if (requested != StepRule::Automatic) return requested;
  const bool nonsmooth = problem.norm().p() == 1.0 || problem.norm().is_infinite() ||
                         (problem.objective() == ObjectiveKind::Max && problem.tuple().size() > 1);
  return nonsmooth ? StepRule::Diminishing : StepRule::Backtracking;
}

template <typename Domain>
RestartResult descend(const Domain& domain, typename Domain::Point x, const SolverConfig& config,
                      StepRule rule) {
  using Point = typename Domain::Point;
  constexpr double kArmijo = 1e-4;
  constexpr double kShrink = 0.5;
  const double p = domain.problem.norm().p();
  const double dim = std::max(1, domain.problem.dim());

  RestartResult out;
  x = domain.project(x);
  auto [f, g] = domain.value_and_gradient(x);
  Point best = x;
  double best_f = f;
  std::deque<double> window{f};
  double eta = config.eta.value_or(rule == StepRule::Diminishing ? 0.1 / std::sqrt(dim) : 1.0);

  auto finish = [&](int iters, bool converged) {
    out.iterations = iters;
    out.converged = converged;
    out.minimizer = domain.ambient(best);
    out.value = domain.problem.norm().is_infinite() ? best_f : std::pow(std::max(best_f, 0.0), 1.0 / p);
    return out;
  };

  for (int t = 1; t <= config.max_iters; ++t) {
    // Projected-gradient norm with unit step.
    const Point mapped = domain.project(x - g);
    const double pg = std::sqrt(std::max(Domain::inner(x - mapped, x - mapped), 0.0));
    if (f <= 0.0 || pg < config.tol_grad) {
      if (config.record_trace) out.trace.push_back({t, f, 0.0, pg});
      return finish(t, true);
    }

    double step = 0.0;
    Point next;
    double next_f = f;
    if (rule == StepRule::Backtracking) {
      bool accepted = false;
      while (eta > 1e-18) {
        next = domain.project(x - g * eta);
        next_f = domain.value(next);
        if (next_f <= f + kArmijo * Domain::inner(g, next - x)) {
          accepted = true;
          break;
        }
        eta *= kShrink;
      }
      if (!accepted) {
        if (config.record_trace) out.trace.push_back({t, f, 0.0, pg});
        return finish(t, true);  // no descent direction left at machine precision
      }
      step = eta;
      eta = std::min(eta * 2.0, 1e6);
    } else if (rule == StepRule::Fixed) {
      step = eta;
      next = domain.project(x - g * eta);
      next_f = domain.value(next);
    } else {
      const double gnorm = std::sqrt(std::max(Domain::inner(g, g), 0.0));
      step = eta / std::sqrt(static_cast<double>(t));
      next = domain.project(x - g * (step / std::max(gnorm, 1e-300)));
      next_f = domain.value(next);
    }

    x = std::move(next);
    std::tie(f, g) = domain.value_and_gradient(x);
    if (f < best_f) {
      best_f = f;
      best = x;
    }
    if (config.record_trace) out.trace.push_back({t, f, step, pg});

    const double tracked = rule == StepRule::Diminishing ? best_f : f;
    window.push_back(tracked);
    if (static_cast<int>(window.size()) > config.value_window + 1) window.pop_front();
    if (static_cast<int>(window.size()) == config.value_window + 1) {
      const double change = std::abs(window.front() - window.back());
      if (change <= config.tol_value * std::max(std::abs(tracked), 1e-300)) return finish(t, true);
    }
  }
  return finish(config.max_iters, false);
}

template <typename Domain>
SolveReport run_restarts(const Domain& domain, const SolverConfig& config) {
  const StepRule rule = resolve_rule(domain.problem, config.step_rule);
  SolveReport report;
  for (int r = 0; r < config.restarts; ++r) {
    std::mt19937_64 rng(config.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(r));
    typename Domain::Point start;
    switch (r) {
      case 0: start = domain.scaled_identity(0.5); break;
      case 2: start = domain.scaled_identity(0.0); break;
      case 3: start = domain.scaled_identity(1.0); break;
      default: start = domain.random(rng); break;
    }
    report.restarts.push_back(descend(domain, start, config, rule));
  }
  // Lowest value wins; ties go to the lowest restart index.
  int best = 0;
  for (int r = 1; r < static_cast<int>(report.restarts.size()); ++r)
    if (report.restarts[r].value < report.restarts[best].value) best = r;
  const auto& winner = report.restarts[best];
  report.best_restart = best;
  report.primal_value = winner.value;
  report.minimizer = winner.minimizer;
  report.iterations = winner.iterations;
  report.converged = winner.converged;
  report.trace = winner.trace;
  return report;
}

}  // namespace

SolveReport solve(const CondenserProblem& problem, const SolverConfig& config) {
  config.validate();
  if (problem.commutative()) return run_restarts(DiagonalDomain{problem}, config);
  return run_restarts(DenseDomain{problem}, config);
}

double brute_force_commutative(const CondenserProblem& problem, int grid) {
  if (!problem.commutative())
    throw ValidationError("brute_force_commutative: requires a permutation tuple");
  const auto free = static_cast<int>(problem.free_indices().size());
  if (free > 4) throw ValidationError("brute_force_commutative: more than 4 free entries");
  if (grid < 101) throw ValidationError("brute_force_commutative: grid resolution must be >= 101");

  // Self-contained evaluation: power sums over the edges i -> sigma_j(i).
  const int dim = problem.dim();
  const auto& perms = problem.tuple().permutations();
  const int n = static_cast<int>(perms.size());
  const SchattenNorm& norm = problem.norm();
  const double p = norm.p();
  const bool inf = norm.is_infinite();
  auto power = [&](double sq) {  // |d|^p from d^2
    if (p == 2.0) return sq;
    if (p == 1.0) return std::sqrt(sq);
    return std::pow(sq, 0.5 * p);
  };

  std::vector<double> f = [&] {
    const RealVector base = assemble_diagonal(problem, RealVector::Zero(free)).diagonal().real();
    return std::vector<double>(base.data(), base.data() + dim);
  }();
  const auto& idx = problem.free_indices();
  std::vector<double> g(dim);
  std::vector<int> counter(free, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (int k = 0; k < free; ++k) f[idx[k]] = static_cast<double>(counter[k]) / (grid - 1);
    double value = 0.0;
    if (problem.objective() == ObjectiveKind::Max) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
          const double d = f[perms[j][i]] - f[i];
          s = inf ? std::max(s, std::abs(d)) : s + power(d * d);
        }
        value = std::max(value, s);
      }
    } else {
      std::fill(g.begin(), g.end(), 0.0);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < dim; ++i) {
          const double d = f[perms[j][i]] - f[i];
          g[i] += d * d;
        }
      for (int i = 0; i < dim; ++i) value = inf ? std::max(value, std::sqrt(g[i])) : value + power(g[i]);
    }
    best = std::min(best, value);
    int k = 0;
    while (k < free && ++counter[k] == grid) counter[k++] = 0;
    if (k == free) break;
  }
  if (!inf) best = std::pow(best, 1.0 / p);
  if (problem.objective() == ObjectiveKind::Dirac && !inf)
    best *= std::pow(static_cast<double>(clifford_dimension(n)), 1.0 / p);
  return best;
}

ContinuityProbe continuity_probe(const CondenserProblem& problem, double eps,
                                 const SolverConfig& config, double solver_tol) {
  if (eps < 0.0) throw ValidationError("continuity_probe: eps must be nonnegative");
  const CondenserProblem base = problem.lifted();
  if (base.P().rank() == 0 || base.free_dim() == 0)
    throw ValidationError("continuity_probe: need rank(P) >= 1 and a nonempty free space");

  // Rotate one vector of ran(P) towards one vector of ran(I - P - Q).
  const Eigensystem ep = eigh(base.P().matrix());
  const Eigen::VectorXcd vp = ep.vectors.col(0);
  const Eigen::VectorXcd vr = base.free_basis().col(0);
  const double theta = std::asin(std::min(eps / 2.0, 1.0));
  const Eigen::Index n = base.dim();
  const Matrix rot = Matrix::Identity(n, n) + (std::cos(theta) - 1.0) * (vp * vp.adjoint() + vr * vr.adjoint()) +
                     std::sin(theta) * (vr * vp.adjoint() - vp * vr.adjoint());
  const Projection p2 = Projection::from_matrix(hermitian_part(rot * base.P().matrix() * rot.adjoint()));
  const CondenserProblem moved = base.with_projections(p2, base.Q());

  ContinuityProbe out;
  out.trace_distance = schatten_norm(base.P().matrix() - p2.matrix(), 1.0);
  out.k_original = solve(base, config).primal_value;
  out.k_perturbed = solve(moved, config).primal_value;
  const double c = base.tuple().operator_bound();
  const double p = base.norm().p();
  const double phi = base.norm().is_infinite() ? 1.0 : std::pow(6.0 * eps, 1.0 / p);
  out.bound = 4.0 * c * phi;
  out.vacuous = out.bound >= std::max(out.k_original, out.k_perturbed);
  out.holds = std::abs(out.k_original - out.k_perturbed) <= out.bound + solver_tol;
  return out;
}

}  // namespace qcmod
