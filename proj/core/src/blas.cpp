#include "rskel/blas.hpp"

#include <algorithm>
#include <string>

namespace rskel {
namespace kernels {
namespace {

constexpr Index kMr = 8;    // micro-tile rows
constexpr Index kNr = 4;    // micro-tile cols
constexpr Index kKc = 256;  // depth of a packed panel
constexpr Index kNc = 128;  // columns of B kept hot in L2

// Full kMr x kNr tile: accumulate in registers, then add into C.
inline void micro_full(Index kc, double alpha, const double* a, Index lda, const double* b, Index ldb,
                       double* c, Index ldc) {
  double acc[kNr][kMr] = {};
  for (Index p = 0; p < kc; ++p) {
    const double* ap = a + p * lda;
    for (Index q = 0; q < kNr; ++q) {
      const double bv = b[p + q * ldb];
      for (Index r = 0; r < kMr; ++r) acc[q][r] += ap[r] * bv;
    }
  }
  for (Index q = 0; q < kNr; ++q)
    for (Index r = 0; r < kMr; ++r) c[r + q * ldc] += alpha * acc[q][r];
}

inline void micro_edge(Index mr, Index nr, Index kc, double alpha, const double* a, Index lda,
                       const double* b, Index ldb, double* c, Index ldc) {
  double acc[kNr][kMr] = {};
  for (Index p = 0; p < kc; ++p) {
    const double* ap = a + p * lda;
    for (Index q = 0; q < nr; ++q) {
      const double bv = b[p + q * ldb];
      for (Index r = 0; r < mr; ++r) acc[q][r] += ap[r] * bv;
    }
  }
  for (Index q = 0; q < nr; ++q)
    for (Index r = 0; r < mr; ++r) c[r + q * ldc] += alpha * acc[q][r];
}

}  // namespace

void gemm_update(Index m, Index n, Index k, double alpha, const double* a, Index lda,
                 const double* b, Index ldb, double* c, Index ldc) {
  if (m <= 0 || n <= 0 || k <= 0 || alpha == 0.0) return;
  for (Index jc = 0; jc < n; jc += kNc) {
    const Index nc = std::min(kNc, n - jc);
    for (Index pc = 0; pc < k; pc += kKc) {
      const Index kc = std::min(kKc, k - pc);
      for (Index i0 = 0; i0 < m; i0 += kMr) {
        const Index mr = std::min(kMr, m - i0);
        const double* ablk = a + i0 + pc * lda;
        for (Index j0 = jc; j0 < jc + nc; j0 += kNr) {
          const Index nr = std::min(kNr, jc + nc - j0);
          const double* bblk = b + pc + j0 * ldb;
          double* cblk = c + i0 + j0 * ldc;
          if (mr == kMr && nr == kNr)
            micro_full(kc, alpha, ablk, lda, bblk, ldb, cblk, ldc);
          else
            micro_edge(mr, nr, kc, alpha, ablk, lda, bblk, ldb, cblk, ldc);
        }
      }
    }
  }
}

void trsm_lower_unit(Index n, Index nrhs, const double* l, Index ldl, double* b, Index ldb) {
  for (Index j = 0; j < nrhs; ++j) {
    double* x = b + j * ldb;
    for (Index p = 0; p < n; ++p) {
      const double xp = x[p];
      if (xp == 0.0) continue;
      const double* lc = l + p * ldl;
      for (Index i = p + 1; i < n; ++i) x[i] -= xp * lc[i];
    }
  }
}

}  // namespace kernels

Matrix gemm(const Matrix& a, const Matrix& b, Op op_a, Op op_b) {
  // Transposed operands are materialized; the copy is O(size) against O(mnk) work.
  const Matrix at = op_a == Op::Trans ? a.transposed() : Matrix{};
  const Matrix bt = op_b == Op::Trans ? b.transposed() : Matrix{};
  const Matrix& aa = op_a == Op::Trans ? at : a;
  const Matrix& bb = op_b == Op::Trans ? bt : b;
  RSKEL_REQUIRE(aa.cols() == bb.rows(),
                "gemm: inner dimensions disagree (" + std::to_string(aa.rows()) + "x" +
                    std::to_string(aa.cols()) + " times " + std::to_string(bb.rows()) + "x" +
                    std::to_string(bb.cols()) + ")");
  Matrix c(aa.rows(), bb.cols());
  kernels::gemm_update(aa.rows(), bb.cols(), aa.cols(), 1.0, aa.data(), aa.rows(), bb.data(),
                       bb.rows(), c.data(), c.rows());
  return c;
}

namespace {

void check_diag(const Matrix& t, Diag diag) {
  if (diag == Diag::Unit) return;
  for (Index i = 0; i < t.rows(); ++i)
    if (t(i, i) == 0.0)
      throw Singular(i, "triangular_solve: zero diagonal entry at index " + std::to_string(i));
}

// op(T) X = B, X overwrites B column by column.
void solve_left(const Matrix& t, Matrix& x, Uplo uplo, Op op, Diag diag) {
  const Index n = t.rows();
  const bool unit = diag == Diag::Unit;
  // Effective triangle after transposition.
  const bool lower = (uplo == Uplo::Lower) == (op == Op::NoTrans);
  for (Index j = 0; j < x.cols(); ++j) {
    double* xc = x.data() + j * n;
    if (op == Op::NoTrans) {
      // Column-oriented (axpy) substitution, reading columns of T.
      if (lower) {
        for (Index p = 0; p < n; ++p) {
          if (!unit) xc[p] /= t(p, p);
          const double xp = xc[p];
          if (xp == 0.0) continue;
          const double* tc = t.data() + p * n;
          for (Index i = p + 1; i < n; ++i) xc[i] -= xp * tc[i];
        }
      } else {
        for (Index p = n - 1; p >= 0; --p) {
          if (!unit) xc[p] /= t(p, p);
          const double xp = xc[p];
          if (xp == 0.0) continue;
          const double* tc = t.data() + p * n;
          for (Index i = 0; i < p; ++i) xc[i] -= xp * tc[i];
        }
      }
    } else {
      // Row of op(T) = column of T: dot-product substitution.
      if (lower) {  // T upper, Tᵀ lower
        for (Index p = 0; p < n; ++p) {
          const double* tc = t.data() + p * n;
          double s = xc[p];
          for (Index i = 0; i < p; ++i) s -= tc[i] * xc[i];
          xc[p] = unit ? s : s / tc[p];
        }
      } else {  // T lower, Tᵀ upper
        for (Index p = n - 1; p >= 0; --p) {
          const double* tc = t.data() + p * n;
          double s = xc[p];
          for (Index i = p + 1; i < n; ++i) s -= tc[i] * xc[i];
          xc[p] = unit ? s : s / tc[p];
        }
      }
    }
  }
}

// X op(T) = B, solved column by column of X (columns of B are contiguous).
void solve_right(const Matrix& t, Matrix& x, Uplo uplo, Op op, Diag diag) {
  const Index n = t.rows();
  const Index m = x.rows();
  const bool unit = diag == Diag::Unit;
  auto top = [&](Index i, Index j) { return op == Op::NoTrans ? t(i, j) : t(j, i); };
  const bool lower = (uplo == Uplo::Lower) == (op == Op::NoTrans);
  // Column j of B = sum_i X(:, i) * op(T)(i, j).
  if (lower) {
    // op(T)(i, j) nonzero for i >= j: resolve columns from last to first.
    for (Index j = n - 1; j >= 0; --j) {
      double* xj = x.data() + j * m;
      for (Index i = j + 1; i < n; ++i) {
        const double tij = top(i, j);
        if (tij == 0.0) continue;
        const double* xi = x.data() + i * m;
        for (Index r = 0; r < m; ++r) xj[r] -= tij * xi[r];
      }
      if (!unit) {
        const double d = t(j, j);
        for (Index r = 0; r < m; ++r) xj[r] /= d;
      }
    }
  } else {
    for (Index j = 0; j < n; ++j) {
      double* xj = x.data() + j * m;
      for (Index i = 0; i < j; ++i) {
        const double tij = top(i, j);
        if (tij == 0.0) continue;
        const double* xi = x.data() + i * m;
        for (Index r = 0; r < m; ++r) xj[r] -= tij * xi[r];
      }
      if (!unit) {
        const double d = t(j, j);
        for (Index r = 0; r < m; ++r) xj[r] /= d;
      }
    }
  }
}

}  // namespace

Matrix triangular_solve(const Matrix& t, const Matrix& b, Side side, Uplo uplo, Op op, Diag diag) {
  RSKEL_REQUIRE(t.rows() == t.cols(), "triangular_solve: T must be square");
  if (side == Side::Left)
    RSKEL_REQUIRE(b.rows() == t.rows(), "triangular_solve: B rows must match T");
  else
    RSKEL_REQUIRE(b.cols() == t.rows(), "triangular_solve: B cols must match T");
  check_diag(t, diag);
  Matrix x = b;
  if (side == Side::Left)
    solve_left(t, x, uplo, op, diag);
  else
    solve_right(t, x, uplo, op, diag);
  return x;
}

}  // namespace rskel
