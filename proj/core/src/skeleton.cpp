#include "rskel/skeleton.hpp"

#include <algorithm>
#include <cmath>

#include "rskel/blas.hpp"
#include "rskel/qr.hpp"
#include "rskel/svd.hpp"

namespace rskel {
namespace {

constexpr double kIllConditioned = 1e14;

std::vector<Index> prefix(const Permutation& p, Index k) {
  return {p.indices().begin(), p.indices().begin() + k};
}

void check_rank(const Matrix& a, Index k, const char* who) {
  RSKEL_REQUIRE(k >= 1 && k <= std::min(a.rows(), a.cols()),
                std::string(who) + ": k must lie in [1, min(m, n)]");
}

// Columns chosen by LUPP of R = A(rows, :)ᵀ, and the column interpolation X.
std::pair<std::vector<Index>, Matrix> columns_from_rows(const Matrix& r_rows) {
  const LUFactors f = lupp(r_rows.transposed());
  return {prefix(f.perm, f.rank()), interpolation_from_lu(f).transposed()};
}

}  // namespace

std::string to_string(SkeletonStatus s) {
  switch (s) {
    case SkeletonStatus::Ok: return "ok";
    case SkeletonStatus::NotConverged: return "not-converged";
    case SkeletonStatus::RankExhausted: return "rank-exhausted";
    case SkeletonStatus::IllConditioned: return "ill-conditioned";
  }
  return "unknown";
}

double SkeletonResult::max_interp() const {
  double m = 0.0;
  if (W) m = std::max(m, max_abs(*W));
  if (X) m = std::max(m, max_abs(*X));
  return m;
}

Matrix interpolation_from_lu(const LUFactors& f) {
  const Index m = f.rows();
  const Index k = f.rank();
  const Matrix t = triangular_solve(f.l1(), f.l2(), Side::Right, Uplo::Lower, Op::NoTrans, Diag::Unit);
  Matrix w(m, k);
  for (Index i = 0; i < k; ++i) w(f.perm[i], i) = 1.0;
  for (Index j = 0; j < k; ++j)
    for (Index i = k; i < m; ++i) w(f.perm[i], j) = t(i - k, j);
  return w;
}

SkeletonResult row_id_from_lu(const LUFactors& f) {
  SkeletonResult r;
  r.rank = f.rank();
  r.rows = prefix(f.perm, f.rank());
  r.W = interpolation_from_lu(f);
  r.row_perm = f.perm;
  return r;
}

SkeletonResult row_id_from_sample_cpqr(const Matrix& sample, Index k) {
  const Index m = sample.rows();
  RSKEL_REQUIRE(k >= 1 && k <= std::min(m, sample.cols()), "row_id_from_sample_cpqr: k out of range");
  const QRFactors qr = cpqr(sample.transposed(), k);
  const Matrix r11 = qr.R.block(0, 0, k, k);
  const Matrix r12 = qr.R.block(0, k, k, m - k);
  const Matrix t = triangular_solve(r11, r12, Side::Left, Uplo::Upper);  // k x (m - k)

  Matrix w(m, k);
  for (Index i = 0; i < k; ++i) w(qr.perm[i], i) = 1.0;
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < m - k; ++i) w(qr.perm[k + i], j) = t(j, i);

  SkeletonResult r;
  r.rank = k;
  r.rows = prefix(qr.perm, k);
  r.W = std::move(w);
  r.row_perm = qr.perm;
  return r;
}

SkeletonResult rand_lupp(const Matrix& a, Index k, const SketchSpec& family, RngStream& rng) {
  check_rank(a, k, "rand_lupp");
  return row_id_from_lu(lupp(sketch_right(a, family, k, rng)));
}

SkeletonResult rand_cpqr(const Matrix& a, Index k, const SketchSpec& family, RngStream& rng) {
  check_rank(a, k, "rand_cpqr");
  return row_id_from_sample_cpqr(sketch_right(a, family, k, rng), k);
}

SkeletonResult column_id(const Matrix& a, Index k, const SketchSpec& family, RngStream& rng) {
  check_rank(a, k, "column_id");
  SkeletonResult t = rand_lupp(a.transposed(), k, family, rng);
  SkeletonResult r;
  r.rank = k;
  r.cols = std::move(t.rows);
  r.X = t.W->transposed();
  return r;
}

SkeletonResult two_sided_id(const Matrix& a, Index k, const SketchSpec& family, RngStream& rng) {
  SkeletonResult r = rand_lupp(a, k, family, rng);
  auto [cols, x] = columns_from_rows(a.select_rows(*r.rows));
  r.S = a.select_rows(*r.rows).select_cols(cols);
  r.cols = std::move(cols);
  r.X = std::move(x);
  if (condition_estimate_1norm(*r.S) > kIllConditioned) r.status = SkeletonStatus::IllConditioned;
  return r;
}

CurFactors cur_decompose(const Matrix& a, Index k, const SketchSpec& family, RngStream& rng) {
  const SkeletonResult rows = rand_lupp(a, k, family, rng);
  const Matrix r = a.select_rows(*rows.rows);
  auto [cols, x] = columns_from_rows(r);
  const Matrix c = a.select_cols(cols);

  CurFactors out;
  // Umid = C^+ A R^+: Z = C^+ A, then Umidᵀ = (Rᵀ)^+ Zᵀ.
  const Matrix z = pinv_apply(c, a);
  out.Umid = pinv_apply(r.transposed(), z.transposed()).transposed();
  if (condition_estimate_1norm(r.select_cols(cols)) > kIllConditioned)
    out.status = SkeletonStatus::IllConditioned;
  out.cols = std::move(cols);
  out.rows = *rows.rows;
  return out;
}

double row_id_error(const Matrix& a, const SkeletonResult& r) {
  RSKEL_REQUIRE(r.rows && r.W, "row_id_error: result carries no row skeletons");
  Matrix e = a;
  const Matrix rr = a.select_rows(*r.rows);
  kernels::gemm_update(a.rows(), a.cols(), r.W->cols(), -1.0, r.W->data(), r.W->rows(), rr.data(),
                       rr.rows(), e.data(), e.rows());
  return frobenius_norm(e);
}

double stable_row_id_error(const Matrix& a, std::span<const Index> rows) {
  const Matrix q = qr_unpivoted(a.select_rows(rows).transposed()).Q;  // n x k
  const Matrix aq = gemm(a, q);                                        // m x k
  Matrix e = a;
  const Matrix qt = q.transposed();
  kernels::gemm_update(a.rows(), a.cols(), q.cols(), -1.0, aq.data(), aq.rows(), qt.data(), qt.rows(),
                       e.data(), e.rows());
  return frobenius_norm(e);
}

double stable_row_id_error(const Matrix& a, const SkeletonResult& r) {
  RSKEL_REQUIRE(r.rows.has_value(), "stable_row_id_error: result carries no row skeletons");
  return stable_row_id_error(a, *r.rows);
}

double column_id_error(const Matrix& a, const SkeletonResult& r) {
  RSKEL_REQUIRE(r.cols && r.X, "column_id_error: result carries no column skeletons");
  const Matrix c = a.select_cols(*r.cols);
  Matrix e = a;
  kernels::gemm_update(a.rows(), a.cols(), c.cols(), -1.0, c.data(), c.rows(), r.X->data(), r.X->rows(),
                       e.data(), e.rows());
  return frobenius_norm(e);
}

double two_sided_id_error(const Matrix& a, const SkeletonResult& r) {
  RSKEL_REQUIRE(r.W && r.S && r.X, "two_sided_id_error: result is not a two-sided ID");
  return frobenius_norm(a - gemm(gemm(*r.W, *r.S), *r.X));
}

double cur_error(const Matrix& a, const CurFactors& cur) {
  const Matrix c = a.select_cols(cur.cols);
  const Matrix r = a.select_rows(cur.rows);
  return frobenius_norm(a - gemm(gemm(c, cur.Umid), r));
}

}  // namespace rskel
