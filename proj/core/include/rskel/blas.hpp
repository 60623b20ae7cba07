#pragma once

#include "rskel/matrix.hpp"

namespace rskel {

enum class Side { Left, Right };
enum class Uplo { Lower, Upper };
enum class Op { NoTrans, Trans };
enum class Diag { NonUnit, Unit };

/// op(a) * op(b). Deterministic: the summation order depends only on shapes.
Matrix gemm(const Matrix& a, const Matrix& b, Op op_a = Op::NoTrans, Op op_b = Op::NoTrans);

inline Matrix matmul(const Matrix& a, const Matrix& b) { return gemm(a, b); }

/// Solve op(T) X = B (Side::Left) or X op(T) = B (Side::Right) for X.
///
/// T must be square and triangular; only the triangle named by uplo is read,
/// and with Diag::Unit the diagonal is not read at all. Throws Singular on an
/// exact zero diagonal entry.
Matrix triangular_solve(const Matrix& t, const Matrix& b, Side side, Uplo uplo,
                        Op op = Op::NoTrans, Diag diag = Diag::NonUnit);

namespace kernels {

/// C += alpha * A * B on raw column-major panels.
void gemm_update(Index m, Index n, Index k, double alpha, const double* a, Index lda,
                 const double* b, Index ldb, double* c, Index ldc);

/// B := L^{-1} B for unit lower-triangular L (n x n), B n x nrhs.
void trsm_lower_unit(Index n, Index nrhs, const double* l, Index ldl, double* b, Index ldb);

}  // namespace kernels

}  // namespace rskel
