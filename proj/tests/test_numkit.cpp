#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include <actlab/errors.hpp>
#include <actlab/numkit.hpp>
#include <actlab/rng.hpp>

#include "test_helpers.hpp"

using namespace actlab;

TEST_CASE("constructors validate shapes") {
  CHECK_THROWS_AS(DenseMatrix(0, 3), InvalidArgument);
  CHECK_THROWS_AS(DenseMatrix(3, 0), InvalidArgument);
  CHECK_THROWS_AS(DenseVector(0), InvalidArgument);
  CHECK_THROWS_AS(DenseMatrix({{1.0, 2.0}, {3.0}}), InvalidArgument);
  const DenseMatrix a({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(a.rows() == 2);
  CHECK(a(1, 0) == 3.0);
}

TEST_CASE("arithmetic checks dimensions") {
  const DenseMatrix a(2, 3, 1.0);
  const DenseMatrix b(3, 2, 1.0);
  CHECK_THROWS_AS(a + b, DimensionMismatch);
  CHECK_THROWS_AS((b * DenseVector{1.0, 2.0, 3.0}), DimensionMismatch);
  const DenseMatrix ab = a * b;
  CHECK(ab.rows() == 2);
  CHECK(ab(0, 0) == 3.0);
}

TEST_CASE("lu_solve identity and diagonal") {
  const DenseVector b{1.0, 2.0, 3.0};
  const DenseVector x = lu_solve(DenseMatrix::identity(3), b);
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 2.0);
  CHECK(x[2] == 3.0);

  const DenseMatrix d({{2.0, 0.0}, {0.0, 4.0}});
  const DenseVector y = lu_solve(d, DenseVector{2.0, 8.0});
  CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(y[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("lu_solve rejects singular input") {
  const DenseMatrix s({{1.0, 1.0}, {1.0, 1.0}});
  CHECK_THROWS_AS(lu_solve(s, DenseVector{1.0, 2.0}), SingularMatrix);
}

TEST_CASE("lu_solve needs pivoting") {
  // Zero leading pivot: no factorization without row exchange.
  const DenseMatrix a({{0.0, 1.0}, {1.0, 0.0}});
  const DenseVector x = lu_solve(a, DenseVector{3.0, 7.0});
  CHECK(x[0] == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("lu_solve round trip on random systems") {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform(0.0, 8.0));
    DenseMatrix a = testkit::random_matrix(rng, n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 3.0;  // keep well-conditioned
    const DenseVector b = testkit::random_vector(rng, n);
    const DenseVector x = lu_solve(a, b);
    const DenseVector r = a * x - b;
    CHECK(norm2(r) <= 1e-9 * (1.0 + norm2(b)));
  }
}

TEST_CASE("lu_solve matrix right-hand side matches columnwise solves") {
  Rng rng(42);
  DenseMatrix a = testkit::random_matrix(rng, 4, 4);
  for (std::size_t i = 0; i < 4; ++i) a(i, i) += 3.0;
  const DenseMatrix b = testkit::random_matrix(rng, 4, 3);
  const DenseMatrix x = lu_solve(a, b);
  for (std::size_t j = 0; j < 3; ++j) {
    DenseVector col(4);
    for (std::size_t i = 0; i < 4; ++i) col[i] = b(i, j);
    const DenseVector xc = lu_solve(a, col);
    for (std::size_t i = 0; i < 4; ++i) CHECK(x(i, j) == xc[i]);
  }
}

TEST_CASE("cholesky_lower examples") {
  const DenseMatrix li = cholesky_lower(DenseMatrix::identity(3));
  CHECK(frobenius_norm(li - DenseMatrix::identity(3)) == 0.0);

  const DenseMatrix a({{4.0, 2.0}, {2.0, 5.0}});
  const DenseMatrix l = cholesky_lower(a);
  CHECK(l(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(l(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(frobenius_norm(l * transpose(l) - a) <= 1e-14);
}

TEST_CASE("cholesky_lower rejects indefinite and asymmetric input") {
  CHECK_THROWS_AS(cholesky_lower(DenseMatrix({{1.0, 2.0}, {2.0, 1.0}})), NotPositiveDefinite);
  CHECK_THROWS_AS(cholesky_lower(DenseMatrix({{1.0, 2.0}, {0.0, 1.0}})), NotSymmetric);
}

TEST_CASE("cholesky_lower reconstructs random SPD matrices") {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform(0.0, 7.0));
    const DenseMatrix a = testkit::random_spd(rng, n);
    const DenseMatrix l = cholesky_lower(a);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(l(i, i) > 0.0);
      for (std::size_t j = i + 1; j < n; ++j) CHECK(l(i, j) == 0.0);
    }
    CHECK(frobenius_norm(l * transpose(l) - a) <= 1e-10 * (1.0 + frobenius_norm(a)));
  }
}

TEST_CASE("sym_eigen on diagonal and permutation matrices") {
  const SymEigenResult d = sym_eigen(DenseMatrix({{1.0, 0.0, 0.0},
                                                  {0.0, 2.0, 0.0},
                                                  {0.0, 0.0, 3.0}}));
  CHECK(d.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(d.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-14));
  // Column 0 pairs with eigenvalue 3 -> +-e3.
  CHECK(std::abs(d.eigenvectors(2, 0)) == doctest::Approx(1.0).epsilon(1e-14));

  const SymEigenResult p = sym_eigen(DenseMatrix({{0.0, 1.0}, {1.0, 0.0}}));
  CHECK(p.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("sym_eigen rejects asymmetric input") {
  CHECK_THROWS_AS(sym_eigen(DenseMatrix({{1.0, 2.0}, {0.0, 1.0}})), NotSymmetric);
}

TEST_CASE("sym_eigen reconstruction, orthogonality, trace") {
  Rng rng(44);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform(0.0, 6.0));
    const DenseMatrix a = testkit::random_spd(rng, n);
    const SymEigenResult e = sym_eigen(a);
    const DenseMatrix v = e.eigenvectors;

    DenseMatrix lam(n, n, 0.0);
    double eig_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lam(i, i) = e.eigenvalues[i];
      eig_sum += e.eigenvalues[i];
      if (i + 1 < n) CHECK(e.eigenvalues[i] >= e.eigenvalues[i + 1]);
      CHECK(e.eigenvalues[i] > 0.0);  // SPD input
    }
    CHECK(frobenius_norm(v * lam * transpose(v) - a) <= 1e-10 * (1.0 + frobenius_norm(a)));
    CHECK(frobenius_norm(transpose(v) * v - DenseMatrix::identity(n)) <= 1e-10);

    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += a(i, i);
    CHECK(std::abs(trace - eig_sum) <= 1e-10 * (1.0 + std::abs(trace)));
  }
}

TEST_CASE("norms and predicates") {
  CHECK(frobenius_norm(DenseMatrix::identity(3)) == doctest::Approx(std::sqrt(3.0)));
  CHECK(frobenius_norm(DenseMatrix(2, 2, 0.0)) == 0.0);
  CHECK(frobenius_norm(DenseMatrix({{3.0, 4.0}, {0.0, 0.0}})) == doctest::Approx(5.0));
  CHECK(norm2(DenseVector{3.0, 4.0}) == doctest::Approx(5.0));
  CHECK(dot(DenseVector{1.0, 2.0}, DenseVector{3.0, -1.0}) == 1.0);
  CHECK(max_abs(DenseMatrix({{-7.0, 2.0}, {3.0, 1.0}})) == 7.0);

  CHECK(is_symmetric(DenseMatrix::identity(4)));
  CHECK_FALSE(is_symmetric(DenseMatrix({{1.0, 2.0}, {0.0, 1.0}})));
  // Within predicate tolerance: asymmetry 1e-13 against unit-scale entries.
  DenseMatrix near(2, 2, 1.0);
  near(0, 1) += 1e-13;
  CHECK(is_symmetric(near));
}

TEST_CASE("format_full round-trips doubles exactly") {
  Rng rng(45);
  for (int trial = 0; trial < 200; ++trial) {
    double v = rng.uniform(-1e3, 1e3);
    if (trial % 3 == 0) v *= 1e-14;
    if (trial % 7 == 0) v = 1.0 / 3.0 * v;
    const std::string s = format_full(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}
