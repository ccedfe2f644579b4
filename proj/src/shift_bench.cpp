#include "qcmod/shift_bench.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "qcmod/duality.hpp"
#include "qcmod/objectives.hpp"

namespace qcmod {

double closed_form(const ShiftCondenserSpec& spec) {
  if (!(spec.p >= 1.0) || std::isinf(spec.p)) throw ValidationError("closed_form: need finite p >= 1");
  const IntervalDecomposition d = decompose(spec.M, spec.N);
  if (spec.p == 1.0) return d.m() + d.boundary_hits;
  double s = 0.0;
  for (const auto& iv : d.intervals) s += std::pow(static_cast<double>(iv.length()), 1.0 - spec.p);
  return std::pow(s, 1.0 / spec.p);
}

CondenserProblem build_instance(const ShiftCondenserSpec& spec, TupleKind kind, ObjectiveKind objective) {
  spec.validate();
  const int n = spec.window;
  std::vector<int> m_idx, n_idx;
  for (int k : spec.M) m_idx.push_back(spec.index(k));
  for (int k : spec.N) n_idx.push_back(spec.index(k));
  if (spec.pin) n_idx.push_back(spec.pin_index());

  // sigma(k) = k - 1 lifts to U e_k = e_{k+1}.
  std::vector<int> sigma(n);
  for (int k = 0; k < n; ++k) sigma[k] = (k - 1 + n) % n;
  OperatorTuple tuple = OperatorTuple::permutation(n, {sigma});
  if (kind == TupleKind::Automorphism) tuple = tuple.as_automorphism();
  else if (kind == TupleKind::Unitary) tuple = OperatorTuple::unitary(tuple.ops());
  else if (kind == TupleKind::SelfAdjoint)
    throw ValidationError("build_instance: the shift is not self-adjoint");

  return CondenserProblem(std::move(tuple), Projection::coordinate(n, m_idx), Projection::coordinate(n, n_idx),
                          objective, SchattenNorm(spec.p));
}

RealVector primal_witness_values(const ShiftCondenserSpec& spec, int h) {
  spec.validate();
  if (h < 1) throw ValidationError("primal_witness: ramp length must be >= 1");
  const int n = spec.window;
  const int span = spec.b() - spec.a();
  const int pin = spec.pin_index();
  // Ramps occupy [span, span + h] and [n - h, n]; both must stay clear of the pin.
  if (span + h > pin || n - h < pin)
    throw ValidationError("primal_witness: window too small for ramp length " + std::to_string(h));

  std::vector<std::pair<int, double>> pts;
  for (int k : spec.M) pts.emplace_back(k, 1.0);
  for (int k : spec.N) pts.emplace_back(k, 0.0);
  std::sort(pts.begin(), pts.end());

  RealVector f = RealVector::Zero(n);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto [k0, v0] = pts[i];
    const auto [k1, v1] = pts[i + 1];
    for (int k = k0; k <= k1; ++k) f[spec.index(k)] = v0 + (v1 - v0) * (k - k0) / static_cast<double>(k1 - k0);
  }
  if (pts.size() == 1) f[spec.index(pts[0].first)] = pts[0].second;
  const double fa = pts.front().second;
  const double fb = pts.back().second;
  for (int s = 1; s < h; ++s) {
    f[spec.index(spec.a() - s)] = fa * (h - s) / static_cast<double>(h);
    f[spec.index(spec.b() + s)] = fb * (h - s) / static_cast<double>(h);
  }
  return f;
}

FeasiblePoint primal_witness(const ShiftCondenserSpec& spec, int h) {
  const RealVector f = primal_witness_values(spec, h);
  const CondenserProblem problem = build_instance(spec);
  RealVector w(static_cast<Eigen::Index>(problem.free_indices().size()));
  for (std::size_t k = 0; k < problem.free_indices().size(); ++k)
    w[static_cast<Eigen::Index>(k)] = f[problem.free_indices()[k]];
  return assemble(problem, Matrix(w.cast<Complex>().asDiagonal()));
}

double witness_power_value(const ShiftCondenserSpec& spec, int h) {
  const IntervalDecomposition d = decompose(spec.M, spec.N);
  double s = 0.0;
  for (const auto& iv : d.intervals) s += std::pow(static_cast<double>(iv.length()), 1.0 - spec.p);
  return s + std::pow(static_cast<double>(h), 1.0 - spec.p) * d.boundary_hits;
}

std::vector<StudyRow> convergence_study(const ShiftCondenserSpec& spec, const std::vector<int>& windows,
                                        const std::vector<double>& p_list, const SolverConfig& config) {
  if (!std::is_sorted(windows.begin(), windows.end()) ||
      std::adjacent_find(windows.begin(), windows.end()) != windows.end())
    throw ValidationError("convergence_study: windows must be strictly increasing");
  std::vector<StudyRow> rows;
  for (double p : p_list) {
    for (int window : windows) {
      ShiftCondenserSpec s = spec;
      s.p = p;
      s.window = window;
      const CondenserProblem problem = build_instance(s);
      const SolveReport rep = solve(problem, config);
      const double dual = dual_bound(problem, shift_dual_certificate(s)).bound;
      const double cf = closed_form(s);
      rows.push_back({p, window, rep.primal_value, dual, cf, (rep.primal_value - cf) / cf, (cf - dual) / cf,
                      rep.converged});
    }
  }
  return rows;
}

std::string study_csv(const std::vector<StudyRow>& rows) {
  std::ostringstream os;
  os << "p,window,primal,dual_bound,closed_form,primal_gap,dual_gap\n";
  os << std::setprecision(12);
  for (const auto& r : rows)
    os << r.p << ',' << r.window << ',' << r.primal << ',' << r.dual_bound << ',' << r.closed_form << ','
       << r.primal_gap << ',' << r.dual_gap << '\n';
  return os.str();
}

}  // namespace qcmod
