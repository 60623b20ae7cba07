#include "rskel/lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rskel/blas.hpp"

namespace rskel {
namespace {

constexpr Index kPanel = 32;

void swap_rows(Matrix& w, Index r1, Index r2) {
  const Index m = w.rows();
  double* p = w.data();
  for (Index j = 0; j < w.cols(); ++j) std::swap(p[r1 + j * m], p[r2 + j * m]);
}

// In-place blocked right-looking LUPP on w. Returns the number of completed
// pivot steps; stops early at an exactly-zero pivot column.
Index factor_in_place(Matrix& w, Permutation& perm) {
  const Index m = w.rows();
  const Index k = w.cols();
  double* base = w.data();
  auto at = [&](Index i, Index j) -> double& { return base[i + j * m]; };

  for (Index j0 = 0; j0 < k; j0 += kPanel) {
    const Index jb = std::min(kPanel, k - j0);
    for (Index t = j0; t < j0 + jb; ++t) {
      Index piv = t;
      double best = std::fabs(at(t, t));
      const double* ct = base + t * m;
      for (Index i = t + 1; i < m; ++i) {
        const double v = std::fabs(ct[i]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best == 0.0) return t;
      if (piv != t) {
        swap_rows(w, t, piv);
        perm.swap(t, piv);
      }
      const double d = at(t, t);
      double* lt = base + t * m;
      for (Index i = t + 1; i < m; ++i) lt[i] /= d;
      // Rank-1 update restricted to the current panel.
      for (Index c = t + 1; c < j0 + jb; ++c) {
        const double f = at(t, c);
        if (f == 0.0) continue;
        double* cc = base + c * m;
        for (Index i = t + 1; i < m; ++i) cc[i] -= lt[i] * f;
      }
    }
    const Index rest = k - j0 - jb;
    if (rest > 0) {
      kernels::trsm_lower_unit(jb, rest, &at(j0, j0), m, &at(j0, j0 + jb), m);
      kernels::gemm_update(m - j0 - jb, rest, jb, -1.0, &at(j0 + jb, j0), m, &at(j0, j0 + jb), m,
                           &at(j0 + jb, j0 + jb), m);
    }
  }
  return k;
}

LUFactors extract(const Matrix& w, Permutation perm, Index steps) {
  const Index m = w.rows();
  LUFactors f{Matrix(m, steps), Matrix(steps, steps), std::move(perm)};
  for (Index j = 0; j < steps; ++j) {
    f.L(j, j) = 1.0;
    for (Index i = j + 1; i < m; ++i) f.L(i, j) = w(i, j);
    for (Index i = 0; i <= j; ++i) f.U(i, j) = w(i, j);
  }
  return f;
}

}  // namespace

PartialLU lupp_partial(const Matrix& a) {
  RSKEL_REQUIRE(a.rows() >= a.cols(), "lupp: requires rows >= cols");
  RSKEL_REQUIRE(all_finite(a), "lupp: input has non-finite entries");
  Matrix w = a;
  Permutation perm(a.rows());
  const Index steps = factor_in_place(w, perm);
  return {extract(w, std::move(perm), steps), a.cols()};
}

LUFactors lupp(const Matrix& a) {
  PartialLU p = lupp_partial(a);
  if (!p.complete())
    throw RankDeficient(p.steps(), "lupp: zero pivot column at step " + std::to_string(p.steps()));
  return std::move(p.factors);
}

double growth_factor(const LUFactors& f, const Matrix& a) {
  const double amax = max_abs(a);
  RSKEL_REQUIRE(amax > 0.0, "growth_factor: zero matrix");
  return max_abs(f.U) / amax;
}

SchurBlock schur_complement(const LUFactors& f, const Matrix& new_cols) {
  const Index m = f.rows();
  const Index k = f.rank();
  RSKEL_REQUIRE(new_cols.rows() == m, "schur_complement: row count mismatch");
  RSKEL_REQUIRE(f.perm.size() == m, "schur_complement: permutation length mismatch");
  const Matrix py = row_permute(new_cols, f.perm);
  const Index b = py.cols();

  Matrix u2 = py.block(0, 0, k, b);
  kernels::trsm_lower_unit(k, b, f.L.data(), m, u2.data(), k);

  Matrix s = py.block(k, 0, m - k, b);
  kernels::gemm_update(m - k, b, k, -1.0, f.L.data() + k, m, u2.data(), k, s.data(), m - k);
  return {std::move(u2), std::move(s)};
}

Index absorb_schur(LUFactors& f, const SchurBlock& block) {
  const Index m = f.rows();
  const Index k = f.rank();
  const Matrix& s = block.schur;
  RSKEL_REQUIRE(s.rows() == m - k, "absorb_schur: Schur block has wrong row count");
  RSKEL_REQUIRE(block.u2.rows() == k && block.u2.cols() == s.cols(),
                "absorb_schur: U2 block has wrong shape");
  PartialLU hat = lupp_partial(s);
  const Index gained = hat.steps();
  const Permutation& ph = hat.factors.perm;

  // Rows k.. of the existing L and of perm follow the new pivoting.
  Matrix l = Matrix(m, k + gained);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < k; ++i) l(i, j) = f.L(i, j);
    for (Index i = 0; i < m - k; ++i) l(k + i, j) = f.L(k + ph[i], j);
  }
  for (Index j = 0; j < gained; ++j)
    for (Index i = 0; i < m - k; ++i) l(k + i, k + j) = hat.factors.L(i, j);

  Matrix u(k + gained, k + gained);
  u.set_block(0, 0, f.U);
  u.set_block(0, k, block.u2.block(0, 0, k, gained));
  u.set_block(k, k, hat.factors.U);

  std::vector<Index> p = f.perm.indices();
  for (Index i = 0; i < m - k; ++i) p[k + i] = f.perm[k + ph[i]];

  f.L = std::move(l);
  f.U = std::move(u);
  f.perm = Permutation(std::move(p));
  return gained;
}

LUFactors lupp_blocked_step(LUFactors f, const Matrix& new_cols) {
  if (f.perm.size() == 0) {
    // Empty state: the step is a plain factorization.
    return lupp(new_cols);
  }
  RSKEL_REQUIRE(f.rank() + new_cols.cols() <= f.rows(), "lupp_blocked_step: more columns than rows");
  const Index k = f.rank();
  const Index gained = absorb_schur(f, schur_complement(f, new_cols));
  if (gained < new_cols.cols())
    throw RankDeficient(k + gained,
                        "lupp_blocked_step: zero pivot column at step " + std::to_string(k + gained));
  return f;
}

namespace {

// x := A^{-1} x  (trans = false) or A^{-T} x (trans = true) with P A = L U.
std::vector<double> lu_solve(const LUFactors& f, std::vector<double> x, bool trans) {
  const Index n = f.rank();
  Matrix b(n, 1);
  if (!trans) {
    for (Index i = 0; i < n; ++i) b(i, 0) = x[f.perm[i]];
    b = triangular_solve(f.L, b, Side::Left, Uplo::Lower, Op::NoTrans, Diag::Unit);
    b = triangular_solve(f.U, b, Side::Left, Uplo::Upper);
    for (Index i = 0; i < n; ++i) x[i] = b(i, 0);
  } else {
    for (Index i = 0; i < n; ++i) b(i, 0) = x[i];
    b = triangular_solve(f.U, b, Side::Left, Uplo::Upper, Op::Trans);
    b = triangular_solve(f.L, b, Side::Left, Uplo::Lower, Op::Trans, Diag::Unit);
    for (Index i = 0; i < n; ++i) x[f.perm[i]] = b(i, 0);
  }
  return x;
}

double one_norm(const Matrix& a) {
  double best = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (double v : a.col(j)) s += std::fabs(v);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

double condition_estimate_1norm(const Matrix& a) {
  RSKEL_REQUIRE(a.rows() == a.cols(), "condition_estimate_1norm: matrix must be square");
  const Index n = a.rows();
  if (n == 0) return 1.0;
  PartialLU p = lupp_partial(a);
  if (!p.complete()) return std::numeric_limits<double>::infinity();
  const LUFactors& f = p.factors;

  std::vector<double> x(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
  double est = 0.0;
  Index last = -1;
  for (int iter = 0; iter < 5; ++iter) {
    const std::vector<double> y = lu_solve(f, x, false);
    double ynorm = 0.0;
    for (double v : y) ynorm += std::fabs(v);
    if (iter > 0 && ynorm <= est) break;
    est = ynorm;
    std::vector<double> xi(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    const std::vector<double> z = lu_solve(f, xi, true);
    Index j = 0;
    double zmax = -1.0, ztx = 0.0;
    for (Index i = 0; i < n; ++i) {
      ztx += z[i] * x[i];
      if (std::fabs(z[i]) > zmax) {
        zmax = std::fabs(z[i]);
        j = i;
      }
    }
    if (zmax <= ztx || j == last) break;
    std::fill(x.begin(), x.end(), 0.0);
    x[j] = 1.0;
    last = j;
  }
  return est * one_norm(a);
}

}  // namespace rskel
