#include "mhd/exact.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace mhd {
namespace {

Scalar q(long n, long d = 1) { return Scalar::fraction(n, d); }
Scalar c(long re, long im) { return Scalar(re, im); }

// Determinant by Laplace expansion; only for tiny matrices.
Scalar laplace_det(const std::vector<std::vector<Scalar>>& a) {
  std::size_t n = a.size();
  if (n == 0) return 1;
  Scalar acc;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Scalar>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Scalar> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) row.push_back(a[i][k]);
      }
      minor.push_back(row);
    }
    Scalar term = a[0][j] * laplace_det(minor);
    if (j % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  return acc;
}

// A Hermitian matrix is PSD iff every elementary symmetric function of its
// eigenvalues is nonnegative, i.e. every sum of principal minors of a fixed
// size is nonnegative.
bool psd_by_principal_minor_sums(const Matrix& m) {
  auto a = m.dense();
  std::size_t n = a.size();
  std::vector<mpq_class> sums(n + 1, 0);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1u << k)) idx.push_back(k);
    }
    std::vector<std::vector<Scalar>> sub;
    for (auto i : idx) {
      std::vector<Scalar> row;
      for (auto j : idx) row.push_back(a[i][j]);
      sub.push_back(row);
    }
    sums[idx.size()] += laplace_det(sub).re();
  }
  for (std::size_t k = 1; k <= n; ++k) {
    if (sgn(sums[k]) < 0) return false;
  }
  return true;
}

TEST(Scalar, FieldOperations) {
  Scalar a = c(1, 2);
  Scalar b = q(3, 4);
  EXPECT_EQ(a * a.inverse(), Scalar(1));
  EXPECT_EQ(a * a.conj(), Scalar(5));
  EXPECT_EQ((a + b) - b, a);
  EXPECT_EQ(Scalar::i() * Scalar::i(), Scalar(-1));
  EXPECT_THROW(Scalar().inverse(), ArithmeticError);
}

TEST(Scalar, CanonicalForm) {
  EXPECT_EQ(Scalar::fraction(2, 4), Scalar::fraction(1, 2));
  EXPECT_EQ(Scalar::fraction(2, -4).str(), "-1/2");
}

TEST(Scalar, TextRoundTrip) {
  for (const char* s : {"0", "3", "-1/2", "i", "-i", "1/2+3/4*i", "1/2-3/4*i", "-5/7*i", "2+i"}) {
    Scalar x = Scalar::parse(s);
    EXPECT_EQ(Scalar::parse(x.str()), x) << s;
  }
  EXPECT_EQ(Scalar::parse("1/2+3/4*i"), Scalar(mpq_class(1, 2), mpq_class(3, 4)));
  EXPECT_EQ(Scalar::parse("-i"), c(0, -1));
  EXPECT_THROW(Scalar::parse("1/0"), ArithmeticError);
  EXPECT_THROW(Scalar::parse("abc"), std::invalid_argument);
}

TEST(Vec, AxpyCancelsToZero) {
  Vec x = Vec::from_dense({1, 0, q(2, 3)});
  Vec y = x;
  y.axpy(-1, x);
  EXPECT_TRUE(y.is_zero());
  EXPECT_EQ(x.kron(Vec::unit(2, 1)).at(5), q(2, 3));
}

TEST(Matrix, KronMatchesIndexFormula) {
  Matrix a = Matrix::from_dense({{1, 2}, {3, 4}});
  Matrix b = Matrix::from_dense({{0, 5}, {6, 7}});
  Matrix k = kron(a, b);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_EQ(k.at(i, j), a.at(i / 2, j / 2) * b.at(i % 2, j % 2));
    }
  }
}

TEST(Matrix, PermuteLegsSwapsTensorFactors) {
  Matrix swap = permute_legs({2, 3}, {1, 0});
  Vec x = Vec::unit(2, 1).kron(Vec::unit(3, 2));
  EXPECT_EQ(swap * x, Vec::unit(3, 2).kron(Vec::unit(2, 1)));
  Matrix cyc = permute_legs({2, 2, 3}, {2, 0, 1});
  Vec y = Vec::unit(2, 0).kron(Vec::unit(2, 1)).kron(Vec::unit(3, 1));
  EXPECT_EQ(cyc * y, Vec::unit(3, 1).kron(Vec::unit(2, 0)).kron(Vec::unit(2, 1)));
}

TEST(LinearAlgebra, SolveWithKernel) {
  // [[1, i], [-i, 1]] has rank one; x + i y = 1 is solved by (1, 0).
  Matrix m = Matrix::from_dense({{1, Scalar::i()}, {-Scalar::i(), 1}});
  Matrix rhs = Matrix::from_dense({{1}, {-Scalar::i()}});
  auto sol = solve_linear(m, rhs);
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->particular, Matrix::from_dense({{1}, {0}}));
  ASSERT_EQ(sol->kernel.size(), 1u);
  EXPECT_TRUE((m * sol->kernel[0]).is_zero());
  EXPECT_EQ(rank(m), 1u);
}

TEST(LinearAlgebra, InconsistentSystemHasNoSolution) {
  Matrix m = Matrix::from_dense({{1, 1}, {1, 1}});
  Matrix rhs = Matrix::from_dense({{0}, {1}});
  EXPECT_FALSE(solve_linear(m, rhs));
  EXPECT_THROW(solve_linear(m, Matrix(3, 1)), DimensionMismatch);
}

TEST(LinearAlgebra, InverseOfHandComputedMatrix) {
  // Inverse of [[2, 1], [1, 1]] is [[1, -1], [-1, 2]].
  auto inv = inverse(Matrix::from_dense({{2, 1}, {1, 1}}));
  ASSERT_TRUE(inv);
  EXPECT_EQ(*inv, Matrix::from_dense({{1, -1}, {-1, 2}}));
  EXPECT_FALSE(inverse(Matrix::from_dense({{1, 2}, {2, 4}})));
  EXPECT_FALSE(is_bijective(Matrix(2, 3)));
}

TEST(LinearAlgebra, RandomSolvePropertyHolds) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t r = 1 + trial % 5;
    std::size_t cc = 1 + (trial / 5) % 5;
    std::vector<std::vector<Scalar>> d(r, std::vector<Scalar>(cc));
    for (auto& row : d) {
      for (auto& x : row) x = coef(rng) == 0 ? Scalar(coef(rng), coef(rng)) : Scalar(coef(rng) % 2);
    }
    Matrix m = Matrix::from_dense(d);
    std::vector<Scalar> xs(cc);
    for (auto& x : xs) x = Scalar(coef(rng), coef(rng));
    Vec b = m * Vec::from_dense(xs);
    auto sol = solve_linear(m, Matrix::column(b));
    ASSERT_TRUE(sol);
    EXPECT_EQ(m * sol->particular.col(0), b);
    for (const auto& k : sol->kernel) EXPECT_TRUE((m * k).is_zero());
    EXPECT_EQ(rank(m) + sol->kernel.size(), cc);
    EXPECT_EQ(rank(m), rank(m.transpose()));
  }
}

TEST(Psd, KnownCases) {
  EXPECT_FALSE(hermitian_psd(Matrix::from_dense({{1, 2}, {2, 1}})));
  EXPECT_TRUE(hermitian_psd(Matrix::from_dense({{1, Scalar::i()}, {-Scalar::i(), 1}})));
  EXPECT_FALSE(hermitian_psd(Matrix::from_dense({{0, 1}, {1, 0}})));
  EXPECT_TRUE(hermitian_psd(Matrix(3, 3)));
  EXPECT_THROW(hermitian_psd(Matrix::from_dense({{1, 2}, {3, 1}})), NotHermitian);
}

TEST(Psd, AgreesWithPrincipalMinorOracle) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coef(-2, 2);
  int disagreements = 0;
  int positives = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + trial % 4;
    std::size_t k = 1 + trial % 3;
    // Either a Gram matrix X X^* (always PSD) or a random Hermitian matrix.
    std::vector<std::vector<Scalar>> x(n, std::vector<Scalar>(k));
    for (auto& row : x) {
      for (auto& v : row) v = Scalar(coef(rng), coef(rng));
    }
    Matrix xm = Matrix::from_dense(x);
    Matrix h = xm * xm.adjoint();
    if (trial % 2 == 1) {
      Matrix noise(n, n);
      std::vector<std::vector<Scalar>> e(n, std::vector<Scalar>(n));
      for (std::size_t i = 0; i < n; ++i) {
        e[i][i] = Scalar(coef(rng));
        for (std::size_t j = i + 1; j < n; ++j) {
          e[i][j] = Scalar(coef(rng), coef(rng));
          e[j][i] = e[i][j].conj();
        }
      }
      h = h + Matrix::from_dense(e);
    }
    bool fast = hermitian_psd(h);
    positives += fast ? 1 : 0;
    if (fast != psd_by_principal_minor_sums(h)) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0);
  EXPECT_GT(positives, 100);
}

TEST(RationalSqrt, PerfectSquaresOnly) {
  EXPECT_EQ(rational_sqrt(q(4, 9)), q(2, 3));
  EXPECT_EQ(rational_sqrt(q(0)), q(0));
  EXPECT_FALSE(rational_sqrt(q(2)));
  EXPECT_FALSE(rational_sqrt(q(-1)));
  EXPECT_FALSE(rational_sqrt(Scalar::i()));
}

}  // namespace
}  // namespace mhd
