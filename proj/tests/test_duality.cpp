#include "doctest.h"
#include "qcmod/duality.hpp"
#include "qcmod/objectives.hpp"
#include "qcmod/shift_bench.hpp"
#include "qcmod/solver.hpp"
#include "support.hpp"

using namespace qcmod;
using testing::Rng;

namespace {

DualCertificate random_certificate(Rng& rng, const CondenserProblem& problem) {
  DualCertificate c;
  for (int j = 0; j < problem.tuple().size(); ++j) c.X.push_back(rng.hermitian(problem.dim()));
  return c.normalized(problem.norm().dual());
}

}  // namespace

TEST_CASE("normalization") {
  Rng rng(1);
  const auto problem = testing::random_problem(rng, TupleKind::SelfAdjoint, 4, 2, ObjectiveKind::Max, 3);
  DualCertificate raw;
  raw.X = {rng.hermitian(4), rng.hermitian(4)};
  CHECK_THROWS_AS(dual_bound(problem, raw), ValidationError);
  const auto q = problem.norm().dual();
  const auto c = raw.normalized(q);
  CHECK(c.normalization(q) == doctest::Approx(1).epsilon(1e-12));

  DualCertificate scaled;
  for (const auto& x : raw.X) scaled.X.push_back(3.7 * x);
  CHECK(dual_bound(problem, scaled.normalized(q)).bound == doctest::Approx(dual_bound(problem, c).bound).epsilon(1e-12));

  DualCertificate zero;
  zero.X = {Matrix::Zero(4, 4), Matrix::Zero(4, 4)};
  CHECK_THROWS_AS(zero.normalized(q), ValidationError);

  DualCertificate wrong;
  wrong.X = {rng.hermitian(4)};
  CHECK_THROWS_AS(dual_bound(problem, wrong.normalized(q)), ValidationError);
}

TEST_CASE("bound components") {
  // Y = 0 on P and RYR >= 0 gives bound 0: take X commuting with T.
  Rng rng(2);
  const Matrix t = rng.hermitian(4);
  const CondenserProblem problem(OperatorTuple::self_adjoint({t}), Projection::coordinate(4, {0}),
                                 Projection::coordinate(4, {3}), ObjectiveKind::Max, SchattenNorm(2));
  DualCertificate c;
  c.X = {t};
  const auto b = dual_bound(problem, c.normalized(SchattenNorm(2)));
  CHECK(std::abs(b.bound) < 1e-12);

  const auto r = dual_bound(problem, random_certificate(rng, problem));
  CHECK(r.bound == doctest::Approx(r.trace_pyp - r.trace_negative));
  CHECK(r.trace_negative >= 0);
}

TEST_CASE("weak duality on random instances") {
  Rng rng(3);
  for (auto kind : {TupleKind::SelfAdjoint, TupleKind::Unitary, TupleKind::Automorphism})
    for (double p : {1.0, 2.0, 3.0})
      for (int t = 0; t < 3; ++t) {
        const auto problem = testing::random_problem(rng, kind, 5, 2, ObjectiveKind::Max, p);
        const double bound = dual_bound(problem, random_certificate(rng, problem)).bound;
        for (int k = 0; k < 20; ++k)
          CHECK(bound <= evaluate(problem, testing::random_feasible(rng, problem).X) + 1e-8);
        CHECK(bound <= evaluate(problem.with_objective(ObjectiveKind::Column),
                                testing::random_feasible(rng, problem).X) + 1e-8);
      }
}

TEST_CASE("Dirac with several operators has no bound") {
  Rng rng(4);
  const auto problem = testing::random_problem(rng, TupleKind::SelfAdjoint, 4, 2, ObjectiveKind::Dirac, 2);
  CHECK_THROWS_AS(dual_bound(problem, random_certificate(rng, problem)), ValidationError);
}

TEST_CASE("norming elements") {
  Rng rng(5);
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    const SchattenNorm norm(p);
    const Matrix m = rng.hermitian(5);
    const Matrix x = norming_element(m, norm);
    CHECK(schatten_norm(x, norm.dual()) == doctest::Approx(1).epsilon(1e-10));
    CHECK(real_inner(m, x) == doctest::Approx(schatten_norm(m, norm)).epsilon(1e-10));
  }
  const Matrix m = rng.hermitian(5);
  const Matrix x = norming_element(m, SchattenNorm::infinity());
  CHECK(schatten_norm(x, 1) == doctest::Approx(1));
  CHECK(real_inner(m, x) == doctest::Approx(operator_norm(m)));
}

TEST_CASE("dual ascent") {
  Rng rng(6);
  const Matrix t = rng.hermitian(4);
  const CondenserProblem q0(OperatorTuple::self_adjoint({t}), Projection::coordinate(4, {0}), Projection::zero(4),
                            ObjectiveKind::Max, SchattenNorm(2));
  CHECK(dual_ascent(q0).bound <= 1e-8);

  const auto z3 = testing::z3_problem(2).lifted();
  const double primal = solve(z3).primal_value;
  const auto asc = dual_ascent(z3);
  CHECK(asc.bound >= 0.99 * primal);
  CHECK(asc.bound <= primal + 1e-8);

  // Shift benchmark at window 64.
  ShiftCondenserSpec spec{{0, 7}, {3, 10}, 2.0, 64, true};
  DualAscentConfig dc;
  dc.max_iters = 2000;
  const auto shift = dual_ascent(build_instance(spec), dc);
  CHECK(shift.bound >= 0.95 * closed_form(spec));
}

TEST_CASE("shift certificate reproduces the closed form") {
  ShiftCondenserSpec s2{{0, 7}, {3, 10}, 2.0, 40, true};
  const auto c2 = shift_dual_certificate(s2);
  CHECK(c2.normalization(SchattenNorm(2).dual()) == doctest::Approx(1).epsilon(1e-12));
  CHECK(std::abs(dual_bound(build_instance(s2), c2).bound - std::sqrt(11.0 / 12)) < 1e-12);

  ShiftCondenserSpec s1{{0}, {5}, 1.0, 20, true};
  CHECK(std::abs(dual_bound(build_instance(s1), shift_dual_certificate(s1)).bound - 2.0) < 1e-12);

  // Adjacent points: every interval contributes 1.
  for (double p : {1.5, 2.0, 3.0}) {
    ShiftCondenserSpec adj{{0, 2}, {1, 3}, p, 20, true};
    CHECK(std::abs(dual_bound(build_instance(adj), shift_dual_certificate(adj)).bound -
                   std::pow(3.0, 1 / p)) < 1e-12);
  }

  // Random specs: exact on the window for all p.
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    ShiftCondenserSpec s;
    std::vector<int> pts = rng.permutation(12);
    const int k = rng.integer(2, 6);
    for (int i = 0; i < k; ++i) (i % 2 == 0 ? s.M : s.N).push_back(pts[i] - 4);
    s.p = t % 3 == 0 ? 1.0 : rng.uniform(1.2, 4);
    s.window = minimum_window(s) + rng.integer(0, 10);
    CHECK(std::abs(dual_bound(build_instance(s), shift_dual_certificate(s)).bound - closed_form(s)) <
          1e-12 * (1 + closed_form(s)));
  }
}
