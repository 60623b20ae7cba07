#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "rskel/rskel.hpp"

using namespace rskel;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Matrix randn(Index m, Index n, std::uint64_t seed) {
  RngStream r(seed, 7);
  return gen_gaussian(m, n, r);
}

}  // namespace

TEST(Matrix, ColumnMajorLayoutAndLiterals) {
  const Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  ASSERT_EQ(a.rows(), 2);
  ASSERT_EQ(a.cols(), 3);
  EXPECT_EQ(a.data()[1], 4.0);
  EXPECT_EQ(a.data()[2], 2.0);
  EXPECT_EQ(a(1, 2), 6.0);
  EXPECT_THROW(Matrix(2, 2, std::vector<double>(3)), ContractViolation);
}

TEST(Matrix, BlocksSelectionsAndAppend) {
  Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  EXPECT_EQ(a.block(1, 1, 2, 2), Matrix::from_rows({{5, 6}, {8, 9}}));
  const std::vector<Index> r{2, 0};
  EXPECT_EQ(a.select_rows(r), Matrix::from_rows({{7, 8, 9}, {1, 2, 3}}));
  EXPECT_EQ(a.select_cols(r), Matrix::from_rows({{3, 1}, {6, 4}, {9, 7}}));
  a.append_cols(Matrix::from_rows({{0}, {0}, {1}}));
  EXPECT_EQ(a.cols(), 4);
  EXPECT_EQ(a(2, 3), 1.0);
  a.truncate_cols(1);
  EXPECT_EQ(a, Matrix::from_rows({{1}, {4}, {7}}));
  EXPECT_EQ(Matrix::from_rows({{1, 2}, {3, 4}}).transposed(), Matrix::from_rows({{1, 3}, {2, 4}}));
}

TEST(Matrix, FrobeniusNormOfIdentityIsSqrtTwo) {
  EXPECT_DOUBLE_EQ(frobenius_norm(Matrix::identity(2)), std::sqrt(2.0));
}

TEST(Matrix, FrobeniusNormSurvivesExtremeScales) {
  Matrix a(2, 1);
  a(0, 0) = 3e200;
  a(1, 0) = 4e200;
  EXPECT_NEAR(frobenius_norm(a) / 5e200, 1.0, 1e-15);
  a(0, 0) = 3e-200;
  a(1, 0) = 4e-200;
  EXPECT_NEAR(frobenius_norm(a) / 5e-200, 1.0, 1e-15);
}

TEST(Permutation, RoundTripAndValidation) {
  const Matrix a = randn(6, 3, 1);
  const Permutation p(std::vector<Index>{3, 1, 5, 0, 2, 4});
  EXPECT_EQ(row_unpermute(row_permute(a, p), p), a);
  EXPECT_EQ(row_permute(row_permute(a, p), p.inverse()), a);
  EXPECT_TRUE(Permutation(4).is_identity());
  EXPECT_THROW(Permutation(std::vector<Index>{0, 0, 1}), ContractViolation);
  EXPECT_THROW(Permutation(std::vector<Index>{0, 3}), ContractViolation);
}

TEST(Gemm, IdentityTimesB) {
  const Matrix b = randn(3, 4, 2);
  EXPECT_EQ(gemm(Matrix::identity(3), b), b);
}

TEST(Gemm, HandProduct) {
  EXPECT_EQ(gemm(Matrix::from_rows({{1, 2}, {3, 4}}), Matrix::from_rows({{5}, {6}})),
            Matrix::from_rows({{17}, {39}}));
}

TEST(Gemm, ZeroAnnihilates) {
  EXPECT_EQ(gemm(randn(4, 3, 3), Matrix(3, 5)), Matrix(4, 5));
}

TEST(Gemm, MatchesNaiveProductWithTransposes) {
  for (auto [m, n, k] : {std::tuple{1, 1, 1}, {7, 5, 3}, {33, 17, 65}, {130, 70, 260}}) {
    const Matrix a = randn(m, k, 10 + m), b = randn(k, n, 20 + n);
    const Matrix ref = oracle::matmul(a, b);
    const double tol = 1e-14 * k * oracle::fro(a) * oracle::fro(b);
    EXPECT_LE(oracle::diff(gemm(a, b), ref), tol);
    EXPECT_LE(oracle::diff(gemm(a.transposed(), b, Op::Trans), ref), tol);
    EXPECT_LE(oracle::diff(gemm(a, b.transposed(), Op::NoTrans, Op::Trans), ref), tol);
    EXPECT_LE(oracle::diff(gemm(a.transposed(), b.transposed(), Op::Trans, Op::Trans), ref), tol);
  }
}

TEST(Gemm, DimensionMismatchIsContractViolation) {
  EXPECT_THROW(gemm(Matrix(2, 3), Matrix(2, 3)), ContractViolation);
}

TEST(Gemm, Deterministic) {
  const Matrix a = randn(90, 80, 4), b = randn(80, 70, 5);
  EXPECT_EQ(gemm(a, b), gemm(a, b));
}

TEST(TriangularSolve, IdentityReturnsB) {
  const Matrix b = randn(3, 2, 6);
  EXPECT_EQ(triangular_solve(Matrix::identity(3), b, Side::Left, Uplo::Lower), b);
}

TEST(TriangularSolve, ForwardSubstitutionByHand) {
  const Matrix x = triangular_solve(Matrix::from_rows({{2, 0}, {1, 1}}), Matrix::from_rows({{2}, {3}}),
                                    Side::Left, Uplo::Lower);
  EXPECT_EQ(x, Matrix::from_rows({{1}, {2}}));
}

TEST(TriangularSolve, ImplicitUnitDiagonalMatchesExplicit) {
  Matrix t = randn(6, 6, 7);
  Matrix explicit_t = t;
  for (Index j = 0; j < 6; ++j) {
    t(j, j) = 42.0;  // must not be read
    explicit_t(j, j) = 1.0;
    for (Index i = 0; i < j; ++i) explicit_t(i, j) = 0.0;
  }
  const Matrix b = randn(6, 3, 8);
  const Matrix x1 = triangular_solve(t, b, Side::Left, Uplo::Lower, Op::NoTrans, Diag::Unit);
  const Matrix x2 = triangular_solve(explicit_t, b, Side::Left, Uplo::Lower);
  EXPECT_LE(oracle::diff(x1, x2), 1e-12 * oracle::fro(x2));
}

TEST(TriangularSolve, AllVariantsSatisfyTheirEquation) {
  Matrix t = randn(7, 7, 9);
  for (Index j = 0; j < 7; ++j) t(j, j) += 4.0;
  for (Uplo uplo : {Uplo::Lower, Uplo::Upper}) {
    Matrix tri = t;
    for (Index j = 0; j < 7; ++j)
      for (Index i = 0; i < 7; ++i)
        if ((uplo == Uplo::Lower && i < j) || (uplo == Uplo::Upper && i > j)) tri(i, j) = 0.0;
    for (Op op : {Op::NoTrans, Op::Trans}) {
      const Matrix opt = op == Op::Trans ? oracle::transpose(tri) : tri;
      const Matrix bl = randn(7, 3, 11);
      const Matrix xl = triangular_solve(t, bl, Side::Left, uplo, op);
      EXPECT_LE(oracle::diff(oracle::matmul(opt, xl), bl), 1e-12 * oracle::fro(bl));
      const Matrix br = randn(4, 7, 12);
      const Matrix xr = triangular_solve(t, br, Side::Right, uplo, op);
      EXPECT_LE(oracle::diff(oracle::matmul(xr, opt), br), 1e-12 * oracle::fro(br));
    }
  }
}

TEST(TriangularSolve, ZeroDiagonalRaisesSingularWithIndex) {
  const Matrix t = Matrix::from_rows({{1, 0, 0}, {2, 0, 0}, {3, 4, 5}});
  try {
    (void)triangular_solve(t, Matrix::from_rows({{1}, {1}, {1}}), Side::Left, Uplo::Lower);
    FAIL() << "expected Singular";
  } catch (const Singular& e) {
    EXPECT_EQ(e.index(), 1);
  }
}

TEST(Lupp, IdentityFactorsTrivially) {
  const LUFactors f = lupp(Matrix::identity(3));
  EXPECT_EQ(f.L, Matrix::identity(3));
  EXPECT_EQ(f.U, Matrix::identity(3));
  EXPECT_TRUE(f.perm.is_identity());
}

TEST(Lupp, HandEliminationTwoByTwo) {
  const LUFactors f = lupp(Matrix::from_rows({{1, 2}, {3, 4}}));
  EXPECT_EQ(f.perm.indices(), (std::vector<Index>{1, 0}));
  EXPECT_DOUBLE_EQ(f.L(1, 0), 1.0 / 3.0);
  EXPECT_EQ(f.L(0, 0), 1.0);
  EXPECT_EQ(f.L(0, 1), 0.0);
  EXPECT_EQ(f.U(0, 0), 3.0);
  EXPECT_EQ(f.U(0, 1), 4.0);
  EXPECT_EQ(f.U(1, 0), 0.0);
  EXPECT_NEAR(f.U(1, 1), 2.0 / 3.0, 1e-15);
}

TEST(Lupp, DuplicatedColumnRaisesRankDeficientAtDependentStep) {
  const Matrix a = Matrix::from_rows({{1, 2, 1}, {4, 1, 4}, {0, 5, 0}, {2, 2, 2}});
  ASSERT_EQ(oracle::rank_of(a), 2);
  try {
    (void)lupp(a);
    FAIL() << "expected RankDeficient";
  } catch (const RankDeficient& e) {
    EXPECT_EQ(e.step(), 2);
  }
  const PartialLU p = lupp_partial(a);
  EXPECT_EQ(p.steps(), 2);
  EXPECT_FALSE(p.complete());
}

TEST(Lupp, TiesGoToTheLowestRow) {
  const LUFactors f = lupp(Matrix::from_rows({{-2, 1}, {2, 0}, {2, 5}}));
  EXPECT_EQ(f.perm[0], 0);
}

TEST(Lupp, RejectsWideAndNonFinite) {
  EXPECT_THROW(lupp(Matrix(2, 3)), ContractViolation);
  Matrix a = Matrix::identity(2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(lupp(a), ContractViolation);
}

TEST(Lupp, ReconstructionBoundsAndOracleAgreement) {
  for (auto [m, k] : {std::pair{20, 10}, {100, 60}, {300, 100}, {65, 65}}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Matrix a = randn(m, k, 100 + seed * 7 + m);
      const LUFactors f = lupp(a);
      EXPECT_LE(oracle::diff(row_permute(a, f.perm), oracle::matmul(f.L, f.U)), 1e-12 * oracle::fro(a) * m);
      for (Index j = 0; j < k; ++j) {
        EXPECT_EQ(f.L(j, j), 1.0);
        for (Index i = 0; i < j; ++i) EXPECT_EQ(f.L(i, j), 0.0);
        for (Index i = j + 1; i < m; ++i) EXPECT_LE(std::fabs(f.L(i, j)), 1.0 + 16 * kEps);
        for (Index i = j + 1; i < k; ++i) EXPECT_EQ(f.U(i, j), 0.0);
      }
      const oracle::GeResult g = oracle::gaussian_elimination(a);
      EXPECT_EQ(f.perm.indices(), g.perm);
    }
  }
}

TEST(Lupp, BlockedStepFromEmptyStateEqualsLupp) {
  const Matrix y = randn(30, 5, 13);
  const LUFactors f = lupp_blocked_step(LUFactors{}, y);
  const LUFactors g = lupp(y);
  EXPECT_EQ(f.perm, g.perm);
  EXPECT_EQ(f.L, g.L);
  EXPECT_EQ(f.U, g.U);
}

namespace {

void expect_blocked_matches(const Matrix& y, const std::vector<Index>& widths) {
  const LUFactors one = lupp(y);
  LUFactors f;
  Index c0 = 0;
  for (Index w : widths) {
    f = lupp_blocked_step(std::move(f), y.block(0, c0, y.rows(), w));
    c0 += w;
  }
  ASSERT_EQ(c0, y.cols());
  EXPECT_EQ(f.perm, one.perm);
  const double lscale = oracle::fro(one.L), uscale = oracle::fro(one.U);
  EXPECT_LE(oracle::diff(f.L, one.L), 1e-12 * lscale);
  EXPECT_LE(oracle::diff(f.U, one.U), 1e-12 * uscale);
}

}  // namespace

TEST(Lupp, TwoBlocksOfFourMatchOneShot) { expect_blocked_matches(randn(64, 8, 14), {4, 4}); }

TEST(Lupp, ThreeBlocksOfTwoMatchOneShot) { expect_blocked_matches(randn(32, 6, 15), {2, 2, 2}); }

TEST(Lupp, UnevenBlocksMatchOneShot) { expect_blocked_matches(randn(200, 90, 16), {1, 33, 40, 16}); }

TEST(Lupp, BlockedStepReportsRankDeficiencyAtGlobalStep) {
  // Dyadic entries keep the elimination exact, so the dependent column
  // reduces to exact zeros.
  Matrix y = Matrix::from_rows({{1, 0, 0, 0},
                                {0, 1, 0, 0},
                                {0, 0, 1, 0},
                                {0.5, -0.5, 0.25, 0},
                                {-1, 0.5, 0, 0},
                                {0.25, 1, -0.5, 0}});
  for (Index i = 0; i < 6; ++i) y(i, 3) = y(i, 0) + y(i, 1);
  const LUFactors f = lupp(y.block(0, 0, 6, 2));
  try {
    (void)lupp_blocked_step(f, y.block(0, 2, 6, 2));
    FAIL() << "expected RankDeficient";
  } catch (const RankDeficient& e) {
    EXPECT_EQ(e.step(), 3);
  }
}

TEST(Lupp, ChanGrowthIsPowerOfTwo) {
  for (Index n : {1, 2, 5, 10, 20, 30}) {
    const Matrix a = gen_chan(n);
    const LUFactors f = lupp(a);
    EXPECT_TRUE(f.perm.is_identity());
    EXPECT_EQ(growth_factor(f, a), std::ldexp(1.0, static_cast<int>(n - 1))) << n;
  }
}

TEST(Lupp, ConditionEstimateBracketsTheTrueValue) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix a = randn(12, 12, 30 + seed);
    // Exact 1-norm condition number via columns of the inverse.
    const LUFactors f = lupp(a);
    Matrix inv(12, 12);
    for (Index j = 0; j < 12; ++j) {
      Matrix e(12, 1);
      for (Index i = 0; i < 12; ++i) e(i, 0) = f.perm[i] == j ? 1.0 : 0.0;
      Matrix x = triangular_solve(f.L, e, Side::Left, Uplo::Lower, Op::NoTrans, Diag::Unit);
      x = triangular_solve(f.U, x, Side::Left, Uplo::Upper);
      for (Index i = 0; i < 12; ++i) inv(i, j) = x(i, 0);
    }
    auto norm1 = [](const Matrix& m) {
      double b = 0;
      for (Index j = 0; j < m.cols(); ++j) {
        double s = 0;
        for (Index i = 0; i < m.rows(); ++i) s += std::fabs(m(i, j));
        b = std::max(b, s);
      }
      return b;
    };
    const double exact = norm1(a) * norm1(inv);
    const double est = condition_estimate_1norm(a);
    EXPECT_LE(est, exact * (1 + 1e-10));
    EXPECT_GE(est, exact / 10.0);
  }
  EXPECT_TRUE(std::isinf(condition_estimate_1norm(Matrix(3, 3))));
}

TEST(Cpqr, DiagonalAlreadyOrdered) {
  const QRFactors f = cpqr(Matrix::from_rows({{3, 0, 0}, {0, 2, 0}, {0, 0, 1}}));
  EXPECT_TRUE(f.perm.is_identity());
  EXPECT_NEAR(std::fabs(f.R(0, 0)), 3.0, 1e-15);
  EXPECT_NEAR(std::fabs(f.R(1, 1)), 2.0, 1e-15);
  EXPECT_NEAR(std::fabs(f.R(2, 2)), 1.0, 1e-15);
}

TEST(Cpqr, PicksLargestColumnFirst) {
  const QRFactors f = cpqr(Matrix::from_rows({{0, 5}, {0, 0}}));
  EXPECT_EQ(f.perm[0], 1);
  EXPECT_NEAR(std::fabs(f.R(0, 0)), 5.0, 1e-15);
}

TEST(Cpqr, ReconstructionOrthonormalityAndMonotoneDiagonal) {
  for (auto [m, n] : {std::pair{50, 20}, {20, 50}, {100, 60}, {300, 100}}) {
    const Matrix a = randn(m, n, 40 + m + n);
    const QRFactors f = cpqr(a);
    const Index k = std::min(m, n);
    ASSERT_EQ(f.Q.cols(), k);
    ASSERT_EQ(f.R.rows(), k);
    EXPECT_LE(oracle::diff(col_permute(a, f.perm), oracle::matmul(f.Q, f.R)), 1e-12 * oracle::fro(a) * m);
    EXPECT_LE(oracle::diff(oracle::matmul(oracle::transpose(f.Q), f.Q), Matrix::identity(k)), 1e-12 * k);
    for (Index i = 1; i < k; ++i) EXPECT_GE(std::fabs(f.R(i - 1, i - 1)), std::fabs(f.R(i, i)));
    for (Index j = 0; j < n; ++j)
      for (Index i = j + 1; i < k; ++i) EXPECT_EQ(f.R(i, j), 0.0);
  }
}

TEST(Cpqr, PartialFactorizationStopsAtK) {
  const Matrix a = randn(40, 30, 41);
  const QRFactors f = cpqr(a, 7);
  EXPECT_EQ(f.Q.cols(), 7);
  EXPECT_EQ(f.R.rows(), 7);
  EXPECT_EQ(f.R.cols(), 30);
  const QRFactors full = cpqr(a);
  for (Index j = 0; j < 7; ++j) EXPECT_EQ(f.perm[j], full.perm[j]);
  EXPECT_THROW(cpqr(a, 0), ContractViolation);
  EXPECT_THROW(cpqr(a, 31), ContractViolation);
}

TEST(Cpqr, ZeroColumnsArePivotedLast) {
  Matrix a = randn(6, 4, 42);
  for (Index i = 0; i < 6; ++i) a(i, 1) = 0.0;
  const QRFactors f = cpqr(a);
  EXPECT_EQ(f.perm[3], 1);
}

TEST(Cpqr, GradedColumnsKeepAccurateNorms) {
  // Column scales spanning 1e-10 stress the norm downdate.
  Matrix a = randn(60, 30, 43);
  for (Index j = 0; j < 30; ++j)
    for (double& v : a.col(j)) v *= std::pow(10.0, -static_cast<double>(j) / 3.0);
  const QRFactors f = cpqr(a);
  for (Index i = 1; i < 30; ++i) EXPECT_GE(std::fabs(f.R(i - 1, i - 1)), std::fabs(f.R(i, i)));
  EXPECT_LE(oracle::diff(col_permute(a, f.perm), oracle::matmul(f.Q, f.R)), 1e-12 * oracle::fro(a) * 60);
}

TEST(QrUnpivoted, OrthonormalInputGivesSignedIdentityR) {
  const QRFactors g = qr_unpivoted(randn(8, 3, 44));
  const QRFactors f = qr_unpivoted(g.Q);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(std::fabs(f.R(i, i)), 1.0, 1e-14);
  for (Index j = 0; j < 3; ++j) {
    const double s = f.R(j, j) > 0 ? 1.0 : -1.0;
    for (Index i = 0; i < 8; ++i) EXPECT_NEAR(f.Q(i, j), s * g.Q(i, j), 1e-14);
  }
}

TEST(QrUnpivoted, ThreeFourFive) {
  const QRFactors f = qr_unpivoted(Matrix::from_rows({{3}, {4}}));
  const double s = f.R(0, 0) > 0 ? 1.0 : -1.0;
  EXPECT_NEAR(s * f.R(0, 0), 5.0, 1e-15);
  EXPECT_NEAR(s * f.Q(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(s * f.Q(1, 0), 0.8, 1e-15);
  EXPECT_TRUE(f.perm.is_identity());
}

TEST(QrUnpivoted, RankOneTrailingDiagonalVanishes) {
  const Matrix a = gemm(randn(5, 1, 45), randn(1, 3, 46));
  const QRFactors f = qr_unpivoted(a);
  EXPECT_LE(std::fabs(f.R(1, 1)), 1e-12 * oracle::fro(a));
  EXPECT_LE(std::fabs(f.R(2, 2)), 1e-12 * oracle::fro(a));
  EXPECT_LE(oracle::diff(a, oracle::matmul(f.Q, f.R)), 1e-13 * oracle::fro(a));
}

TEST(Svd, DiagonalAndPermutation) {
  EXPECT_EQ(singular_values(Matrix::from_rows({{2, 0}, {0, 1}})), (std::vector<double>{2, 1}));
  const std::vector<double> s = singular_values(Matrix::from_rows({{0, 1}, {1, 0}}));
  EXPECT_NEAR(s[0], 1.0, 1e-15);
  EXPECT_NEAR(s[1], 1.0, 1e-15);
}

TEST(Svd, MatchesGramEigenOracle) {
  for (auto [m, n] : {std::pair{30, 20}, {20, 30}, {50, 50}}) {
    const Matrix a = randn(m, n, 47 + m);
    const SvdFactors f = svd(a);
    const Matrix g = m >= n ? oracle::matmul(oracle::transpose(a), a) : oracle::matmul(a, oracle::transpose(a));
    const std::vector<double> ev = oracle::symmetric_eigenvalues(g);
    ASSERT_EQ(f.sigma.size(), ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) {
      EXPECT_NEAR(f.sigma[i], std::sqrt(std::max(ev[i], 0.0)), 1e-10 * f.sigma[i]) << i;
      if (i) EXPECT_GE(f.sigma[i - 1], f.sigma[i]);
    }
    Matrix us = f.U;
    for (Index j = 0; j < us.cols(); ++j)
      for (double& v : us.col(j)) v *= f.sigma[j];
    EXPECT_LE(oracle::diff(a, oracle::matmul(us, oracle::transpose(f.V))), 1e-10 * oracle::fro(a) * std::max(m, n));
    const Index r = std::min(m, n);
    EXPECT_LE(oracle::diff(oracle::matmul(oracle::transpose(f.U), f.U), Matrix::identity(r)), 1e-12 * r);
    EXPECT_LE(oracle::diff(oracle::matmul(oracle::transpose(f.V), f.V), Matrix::identity(r)), 1e-12 * r);
  }
}

TEST(Svd, TailNorm) {
  const std::vector<double> s{3, 2, 1};
  EXPECT_EQ(svd_tail_norm(s, 3), 0.0);
  EXPECT_DOUBLE_EQ(svd_tail_norm(s, 1), std::sqrt(5.0));
  EXPECT_EQ(svd_tail_norm(std::vector<double>{1}, 0), 1.0);
  EXPECT_THROW(svd_tail_norm(s, 4), ContractViolation);
}

TEST(Svd, PinvApplyTruncatesNullDirections) {
  const Matrix x = pinv_apply(Matrix::from_rows({{2, 0}, {0, 0}}), Matrix::from_rows({{2}, {2}}));
  EXPECT_NEAR(x(0, 0), 1.0, 1e-15);
  EXPECT_EQ(x(1, 0), 0.0);
}

TEST(Svd, PinvApplySolvesLeastSquares) {
  const Matrix a = randn(20, 6, 48), b = randn(20, 2, 49);
  const Matrix x = pinv_apply(a, b);
  // Normal equations Aᵀ (A x - b) = 0.
  const Matrix r = oracle::matmul(oracle::transpose(a), oracle::matmul(a, x) - b);
  EXPECT_LE(oracle::fro(r), 1e-11 * oracle::fro(a) * oracle::fro(b));
}
