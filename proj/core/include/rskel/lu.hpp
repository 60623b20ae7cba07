#pragma once

#include "rskel/matrix.hpp"

namespace rskel {

/// P A = L U for the factored leading columns of an m x k matrix (m >= k).
///
/// L is m x k unit lower trapezoidal, U is k x k upper triangular, and perm
/// maps factored row positions back to rows of A: (P A)(i, :) = A(perm[i], :).
struct LUFactors {
  Matrix L;
  Matrix U;
  Permutation perm;

  Index rank() const noexcept { return U.rows(); }
  Index rows() const noexcept { return L.rows(); }

  /// Leading rank() x rank() block of L.
  Matrix l1() const { return L.block(0, 0, rank(), rank()); }
  /// Trailing (m - rank()) x rank() block of L.
  Matrix l2() const { return L.block(rank(), 0, rows() - rank(), rank()); }
};

/// LU with row-wise partial pivoting. Pivot = largest magnitude in the active
/// column, lowest row index on ties. Throws RankDeficient(step) when every
/// candidate in a pivot column is exactly zero.
LUFactors lupp(const Matrix& a);

/// Like lupp, but stops at the first exactly-zero pivot column and returns
/// the factorization of the leading `steps` columns.
struct PartialLU {
  LUFactors factors;
  Index requested = 0;  // column count of the input
  Index steps() const noexcept { return factors.rank(); }
  bool complete() const noexcept { return factors.rank() == requested; }
};
PartialLU lupp_partial(const Matrix& a);

/// max|U| / max|A|.
double growth_factor(const LUFactors& f, const Matrix& a);

/// Hager-Higham estimate of the 1-norm condition number of a square
/// matrix, using its LUPP factors for the solves. Returns +inf when the
/// matrix has an exactly-zero pivot.
double condition_estimate_1norm(const Matrix& a);

/// Schur complement of new sample columns against an existing factorization.
///
///   U2 = L1^{-1} (P Y)(0:k, :)
///   S  = (P Y)(k:m, :) - L2 U2
struct SchurBlock {
  Matrix u2;
  Matrix schur;
};
SchurBlock schur_complement(const LUFactors& f, const Matrix& new_cols);

/// Factor a Schur block with lupp_partial and re-block f so that it
/// factors [Y_prev | Y_new]. Returns the number of pivots gained
/// (fewer than schur.cols() only when a zero pivot column was met).
Index absorb_schur(LUFactors& f, const SchurBlock& block);

/// One blocked extension step: returns the factorization of [Y_prev | new_cols]
/// given that of Y_prev. Throws RankDeficient like lupp.
LUFactors lupp_blocked_step(LUFactors f, const Matrix& new_cols);

}  // namespace rskel
