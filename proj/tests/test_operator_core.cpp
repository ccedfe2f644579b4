#include "doctest.h"
#include "qcmod/operator_core.hpp"
#include "support.hpp"

using namespace qcmod;
using testing::Rng;

namespace {

Matrix diag(std::initializer_list<double> v) {
  RealVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d[i++] = x;
  return d.cast<Complex>().asDiagonal();
}

}  // namespace

TEST_CASE("eigh sorts eigenvalues and reconstructs") {
  const Eigensystem es = eigh(diag({3, 1, 2}));
  CHECK(es.values[0] == doctest::Approx(3));
  CHECK(es.values[1] == doctest::Approx(2));
  CHECK(es.values[2] == doctest::Approx(1));

  const Eigensystem id = eigh(Matrix::Identity(4, 4));
  for (int i = 0; i < 4; ++i) CHECK(id.values[i] == doctest::Approx(1));

  Rng rng(11);
  const Matrix h = rng.hermitian(8);
  const Eigensystem r = eigh(h);
  const Matrix back = r.vectors * r.values.cast<Complex>().asDiagonal() * r.vectors.adjoint();
  CHECK((back - h).norm() <= 1e-10 * (1 + operator_norm(h)));
  for (int i = 1; i < 8; ++i) CHECK(r.values[i - 1] >= r.values[i]);
}

TEST_CASE("eigh rejects non-Hermitian input") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(eigh(m), ValidationError);
}

TEST_CASE("singular values") {
  const auto s = singular_values(diag({3, 1, 2})).values;
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(3));
  CHECK(s[1] == doctest::Approx(2));
  CHECK(s[2] == doctest::Approx(1));

  Rng rng(3);
  Eigen::VectorXcd u = rng.general(4).col(0).normalized();
  Eigen::VectorXcd v = rng.general(4).col(1).normalized();
  const auto r1 = singular_values(u * v.adjoint()).values;
  CHECK(r1[0] == doctest::Approx(1));
  for (std::size_t i = 1; i < r1.size(); ++i) CHECK(std::abs(r1[i]) < 1e-12);

  Matrix jordan = Matrix::Zero(3, 3);
  jordan(0, 1) = 1.0;
  jordan(1, 2) = 1.0;
  const auto sj = singular_values(jordan);
  CHECK(sj.values[0] == doctest::Approx(1));
  CHECK(sj.values[1] == doctest::Approx(1));
  CHECK(std::abs(sj.values[2]) < 1e-12);
  CHECK(sj.mu(0.5) == doctest::Approx(1));
  CHECK(sj.mu(2.5) == doctest::Approx(0).epsilon(1e-12));
  CHECK(sj.mu(10) == 0.0);

  // Oracle: square roots of the eigenvalues of x* x.
  const Matrix x = rng.general(5);
  Eigen::SelfAdjointEigenSolver<Matrix> oracle(x.adjoint() * x);
  const RealVector ev = oracle.eigenvalues();
  const auto sv = singular_values(x).values;
  for (int i = 0; i < 5; ++i) CHECK(sv[i] == doctest::Approx(std::sqrt(std::max(0.0, ev[4 - i]))));
}

TEST_CASE("Schatten norms") {
  for (double p : {1.0, 2.0, 3.5}) CHECK(schatten_norm(Matrix::Identity(5, 5), p) == doctest::Approx(std::pow(5.0, 1 / p)));
  CHECK(schatten_norm(Matrix::Identity(5, 5), SchattenNorm::infinity()) == doctest::Approx(1));
  CHECK(schatten_norm(diag({3, 4}), 2) == doctest::Approx(5));
  CHECK_THROWS_AS(SchattenNorm(0.5), ValidationError);
  CHECK(SchattenNorm(1).q() == INFINITY);
  CHECK(SchattenNorm::infinity().q() == 1.0);
  CHECK(SchattenNorm(3).q() == doctest::Approx(1.5));

  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const double p = rng.uniform(1, 6);
    const Matrix x = rng.general(6), u = rng.unitary(6), v = rng.unitary(6);
    CHECK(std::abs(schatten_norm(u * x * v, p) - schatten_norm(x, p)) <= 1e-10 * schatten_norm(x, p));
  }
}

TEST_CASE("Schatten norm conditions on random data") {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const double p = rng.uniform(1, 5);
    const Matrix x = rng.general(5);
    const double n1 = schatten_norm(x, 1), ninf = operator_norm(x), np = schatten_norm(x, p);
    CHECK(std::min(n1, ninf) <= np + 1e-10);
    CHECK(np <= n1 + ninf + 1e-10);
    CHECK(np <= std::pow(n1, 1 / p) * std::pow(ninf, 1 - 1 / p) * (1 + 1e-10));

    const Matrix a = rng.general(5), b = rng.general(5);
    CHECK(schatten_norm(a * x * b, p) <= operator_norm(a) * np * operator_norm(b) * (1 + 1e-10));

    RealVector d1(4), d2(4);
    for (int i = 0; i < 4; ++i) {
      d1[i] = rng.uniform();
      d2[i] = d1[i] + rng.uniform();
    }
    CHECK(schatten_norm(Matrix(d1.cast<Complex>().asDiagonal()), p) <=
          schatten_norm(Matrix(d2.cast<Complex>().asDiagonal()), p) + 1e-12);
  }
}

TEST_CASE("positive and negative parts") {
  const Matrix h = diag({2, -3});
  CHECK((positive_part(h) - diag({2, 0})).norm() < 1e-12);
  CHECK((negative_part(h) - diag({0, 3})).norm() < 1e-12);

  Rng rng(2);
  const Matrix psd = rng.contraction(4);
  CHECK(negative_part(psd).norm() < 1e-12);

  const Matrix r = rng.hermitian(6);
  const Matrix pp = positive_part(r), nn = negative_part(r);
  CHECK((pp - nn - r).norm() < 1e-10);
  CHECK((pp * nn).norm() < 1e-10);
  CHECK(eigh(pp).values.minCoeff() > -1e-10);
  CHECK(eigh(nn).values.minCoeff() > -1e-10);
}

TEST_CASE("spectral projections") {
  auto e1 = spectral_projection(diag({1, 0.5, 0}), RealSet::singleton(1), 1e-6);
  CHECK(e1.rank == 1);
  CHECK((e1.projection - diag({1, 0, 0})).norm() < 1e-12);
  CHECK_FALSE(e1.ambiguous);

  Rng rng(4);
  const Matrix h = rng.contraction(4) + Matrix::Identity(4, 4) * 0.1;
  auto pos = spectral_projection(h, RealSet::open(0, INFINITY), 1e-9);
  CHECK(pos.rank == 4);
  CHECK((pos.projection - Matrix::Identity(4, 4)).norm() < 1e-10);

  auto e2 = spectral_projection(diag({1, 1 - 1e-9, 0}), RealSet::singleton(1), 1e-6);
  CHECK(e2.rank == 2);

  auto amb = spectral_projection(diag({1, 1 - 5e-6, 0}), RealSet::singleton(1), 1e-6);
  CHECK(amb.ambiguous);
}

TEST_CASE("PSD powers") {
  CHECK((matrix_power_psd(diag({4, 9}), 0.5) - diag({2, 3})).norm() < 1e-12);
  CHECK((matrix_power_psd(diag({4, 0}), 0.0) - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((matrix_power_psd(diag({4, 0}), -0.5) - diag({0.5, 0})).norm() < 1e-12);
  CHECK_THROWS_AS(matrix_power_psd(diag({4, -1}), 0.5), ValidationError);
  // tiny negative rounding is tolerated
  CHECK_NOTHROW(matrix_power_psd(diag({4, -1e-12}), 0.5));
}

TEST_CASE("pinching") {
  Rng rng(9);
  const Matrix x = rng.hermitian(8);
  std::vector<std::vector<int>> singletons;
  for (int i = 0; i < 8; ++i) singletons.push_back({i});
  const Matrix d = pinch(x, singletons);
  CHECK((d - Matrix(x.diagonal().asDiagonal())).norm() < 1e-14);
  CHECK((pinch(x, {{0, 1, 2, 3, 4, 5, 6, 7}}) - x).norm() < 1e-14);
  CHECK(schatten_norm(d, 2) <= schatten_norm(x, 2) + 1e-12);

  const std::vector<std::vector<int>> two = {{0, 3, 5}, {1, 2, 4, 6, 7}};
  const Matrix e = pinch(x, two);
  CHECK((pinch(e, two) - e).norm() < 1e-14);
  CHECK(std::abs(e.trace() - x.trace()) < 1e-12);
  const Matrix psd = rng.contraction(8);
  CHECK(eigh(pinch(psd, two)).values.minCoeff() > -1e-12);

  CHECK_THROWS_AS(pinch(x, {{0, 1}, {1, 2, 3, 4, 5, 6, 7}}), ValidationError);
  CHECK_THROWS_AS(pinch(x, {{0, 1}}), ValidationError);
}

TEST_CASE("Clifford matrices anticommute") {
  for (int n = 1; n <= 5; ++n) {
    const auto e = clifford_matrices(n);
    REQUIRE(static_cast<int>(e.size()) == n);
    const int d = clifford_dimension(n);
    CHECK(d == (1 << ((n + 1) / 2)));
    for (int j = 0; j < n; ++j) {
      CHECK(e[j].rows() == d);
      CHECK(is_hermitian(e[j]));
      for (int k = 0; k < n; ++k) {
        const Matrix ac = e[j] * e[k] + e[k] * e[j];
        const Matrix expect = (j == k ? 2.0 : 0.0) * Matrix::Identity(d, d);
        CHECK((ac - expect).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
  const auto one = clifford_matrices(1);
  CHECK(std::abs(one[0](0, 1) - Complex(1, 0)) < 1e-15);
}
