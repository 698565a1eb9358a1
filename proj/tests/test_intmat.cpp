#include <gtest/gtest.h>

#include <random>

#include "fqlab/intmat.hpp"
#include "oracles.hpp"

using namespace fqlab;

namespace {

void expect_smith_invariants(const IntMatrix& a, const SmithDecomposition& s) {
  ASSERT_EQ(s.S.rows(), a.rows());
  ASSERT_EQ(s.T.rows(), a.cols());
  EXPECT_EQ(s.S * s.D * s.T, a);
  EXPECT_EQ(std::llabs(determinant(s.S)), 1);
  EXPECT_EQ(std::llabs(determinant(s.T)), 1);
  const std::size_t r = std::min(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) {
        EXPECT_EQ(s.D(i, j), 0);
      }
  for (std::size_t i = 0; i < r; ++i) {
    EXPECT_GE(s.D(i, i), 0);
    if (i + 1 < r) {
      if (s.D(i, i) == 0)
        EXPECT_EQ(s.D(i + 1, i + 1), 0);
      else
        EXPECT_EQ(s.D(i + 1, i + 1) % s.D(i, i), 0);
    }
  }
}

void expect_pullback(const IntMatrix& a, const PullbackCertificate& c) {
  const IntMatrix ab = a * c.B;
  ASSERT_NE(c.d, 0);
  for (std::size_t i = 0; i < ab.rows(); ++i)
    for (std::size_t j = 0; j < ab.cols(); ++j) EXPECT_EQ(ab(i, j), i == j ? c.d : 0);
  EXPECT_EQ(oracle::rank_mod_p(c.B), c.B.rows());
}

}  // namespace

TEST(IntMatrix, DeterminantAnchors) {
  EXPECT_EQ(determinant(IntMatrix::identity(4)), 1);
  EXPECT_EQ(determinant(IntMatrix{{2, 1}, {0, 3}}), 6);
  EXPECT_EQ(determinant(IntMatrix{{1, 2}, {2, 4}}), 0);
  EXPECT_THROW(determinant(IntMatrix{{1, 2}}), DomainError);
}

TEST(IntMatrix, DeterminantMatchesCofactorExpansion) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const IntMatrix a = oracle::random_matrix(rng, n, n, 9);
    EXPECT_EQ(determinant(a), oracle::cofactor_det(oracle::to_rows(a))) << a;
  }
}

TEST(IntMatrix, DeterminantOverflowThrows) {
  IntMatrix a(16, 16);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) a(i, j) = (i == j) ? 1'000'000 : ((i + j) % 3 == 0 ? 999'999 : -999'998);
  EXPECT_THROW(determinant(a), OverflowError);
}

TEST(IntMatrix, AdjugateAnchors) {
  EXPECT_EQ(adjugate(IntMatrix{{3, 5}, {-2, 7}}), (IntMatrix{{7, -5}, {2, 3}}));
  EXPECT_EQ(adjugate(IntMatrix::identity(3)), IntMatrix::identity(3));
}

TEST(IntMatrix, AdjugateIdentity) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const IntMatrix a = oracle::random_matrix(rng, 4, 4, 9);
    const std::int64_t d = determinant(a);
    const IntMatrix prod = a * adjugate(a);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(prod(i, j), i == j ? d : 0);
  }
}

TEST(IntMatrix, SmithAnchors) {
  const auto id = smith_normal_form(IntMatrix::identity(3));
  EXPECT_EQ(id.S, IntMatrix::identity(3));
  EXPECT_EQ(id.D, IntMatrix::identity(3));
  EXPECT_EQ(id.T, IntMatrix::identity(3));
  EXPECT_EQ(smith_normal_form(IntMatrix::diagonal({2, 3})).D, IntMatrix::diagonal({1, 6}));
  EXPECT_EQ(smith_normal_form(IntMatrix{{2, 1}, {0, 3}}).D, IntMatrix::diagonal({1, 6}));
}

TEST(IntMatrix, SmithRandomSuite) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 5, n = 1 + rng() % 5;
    const IntMatrix a = oracle::random_matrix(rng, m, n, 9);
    const auto s = smith_normal_form(a);
    expect_smith_invariants(a, s);
    // Diagonal prefix products equal the determinantal divisors.
    const auto rows = oracle::to_rows(a);
    std::int64_t prod = 1;
    for (std::size_t k = 1; k <= std::min(m, n); ++k) {
      prod *= s.D(k - 1, k - 1);
      EXPECT_EQ(prod, oracle::determinantal_divisor(rows, k)) << a;
    }
    if (m == n) {
      EXPECT_EQ(std::llabs(determinant(s.S * s.D * s.T)), std::llabs(determinant(a)));
    }
  }
}

TEST(IntMatrix, SmithOfZeroAndRankDeficient) {
  expect_smith_invariants(IntMatrix(3, 2), smith_normal_form(IntMatrix(3, 2)));
  const IntMatrix a{{2, 4, 6}, {1, 2, 3}};
  const auto s = smith_normal_form(a);
  expect_smith_invariants(a, s);
  EXPECT_EQ(s.D(0, 0), 1);
  EXPECT_EQ(s.D(1, 1), 0);
}

TEST(IntMatrix, Rank) {
  EXPECT_EQ(rank(IntMatrix{{1, 2}, {2, 4}}), 1u);
  EXPECT_EQ(rank(IntMatrix{{1, 2, 3}}), 1u);
  EXPECT_EQ(rank(IntMatrix(2, 3)), 0u);
  EXPECT_EQ(rank(IntMatrix::identity(5)), 5u);
}

TEST(IntMatrix, PullbackAnchors) {
  const auto row = pullback_certificate(IntMatrix{{1, 2}});
  EXPECT_EQ(row.d, 1);
  EXPECT_EQ(row.B, (IntMatrix{{1, -2}, {0, 1}}));
  expect_pullback(IntMatrix{{1, 2}}, row);

  const auto id = pullback_certificate(IntMatrix::identity(3));
  EXPECT_EQ(id.d, 1);
  EXPECT_EQ(id.B, IntMatrix::identity(3));

  const auto diag = pullback_certificate(IntMatrix::diagonal({2, 3}));
  EXPECT_EQ(diag.d, 6);
  EXPECT_EQ(diag.B, IntMatrix::diagonal({3, 2}));
}

TEST(IntMatrix, PullbackRandomFullRank) {
  std::mt19937_64 rng(24);
  int done = 0;
  while (done < 50) {
    const std::size_t n = 1 + rng() % 5;
    const std::size_t m = 1 + rng() % n;
    const IntMatrix a = oracle::random_matrix(rng, m, n, 9);
    if (rank(a) != m) continue;
    expect_pullback(a, pullback_certificate(a));
    ++done;
  }
}

TEST(IntMatrix, PullbackRejectsRankDeficient) {
  EXPECT_THROW(pullback_certificate(IntMatrix{{1, 2}, {2, 4}}), DomainError);
  EXPECT_THROW(pullback_certificate(IntMatrix{{1}, {2}}), DomainError);
}

TEST(IntMatrix, UnimodularInverse) {
  const IntMatrix a{{2, 1}, {1, 1}};
  EXPECT_EQ(a * inverse_unimodular(a), IntMatrix::identity(2));
  EXPECT_THROW(inverse_unimodular(IntMatrix{{2, 0}, {0, 1}}), DomainError);
}

TEST(IntMatrix, LimitsAreEnforced) {
  IntMatrix big(1, 1);
  big(0, 0) = 2'000'000;
  EXPECT_THROW(validate_limits(big), InputError);
  EXPECT_THROW(validate_limits(IntMatrix(17, 1)), InputError);
}
