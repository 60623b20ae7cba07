#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rskel/lu.hpp"
#include "rskel/matrix.hpp"
#include "rskel/rng.hpp"
#include "rskel/sketch.hpp"

namespace rskel {

enum class SkeletonStatus {
  Ok,
  NotConverged,    // rank cap hit before the tolerance was met
  RankExhausted,   // zero pivot in a Schur block; result truncated
  IllConditioned,  // skeleton cross submatrix has condition estimate > 1e14
};

std::string to_string(SkeletonStatus s);

/// One adaptive iteration: the Schur estimate for the rank-`rank` skeleton
/// set, and optionally the residual-U_r estimates at the same rank.
struct ErrorRecord {
  Index rank = 0;
  double schur = 0.0;
  std::optional<double> est_norm_ur;
  std::optional<double> est_max_ur;
};
using ErrorTrace = std::vector<ErrorRecord>;

/// Output of every skeleton selector.
///
/// Row ID:      A ≈ W A(rows, :),            W(rows, :) = I exactly.
/// Column ID:   A ≈ A(:, cols) X,            X(:, cols) = I exactly.
/// Two-sided:   A ≈ W S X with S = A(rows, cols).
struct SkeletonResult {
  std::optional<std::vector<Index>> rows;
  std::optional<std::vector<Index>> cols;
  std::optional<Matrix> W;
  std::optional<Matrix> X;
  std::optional<Matrix> S;
  std::optional<Permutation> row_perm;  // full pivot order, rows = prefix
  Index rank = 0;
  ErrorTrace trace;
  SkeletonStatus status = SkeletonStatus::Ok;

  /// max |W| or max |X| (whichever is present; both when two-sided).
  double max_interp() const;
};

/// A ≈ C Umid R with C = A(:, cols), R = A(rows, :).
struct CurFactors {
  std::vector<Index> cols;
  std::vector<Index> rows;
  Matrix Umid;
  SkeletonStatus status = SkeletonStatus::Ok;
};

/// Row interpolation matrix from an LUPP factorization of a sample:
/// (P W) = [I; L2 L1^{-1}], computed by a triangular solve.
Matrix interpolation_from_lu(const LUFactors& f);

/// Row ID from a factored sample.
SkeletonResult row_id_from_lu(const LUFactors& f);

/// Row ID from CPQR of a sample's transpose, k pivots:
/// W(P, :) = [I_k, R11^{-1} R12]ᵀ.
SkeletonResult row_id_from_sample_cpqr(const Matrix& sample, Index k);

/// Sketch Y = A Ω (n x k), skeletons from LUPP of Y.
SkeletonResult rand_lupp(const Matrix& a, Index k, const SketchSpec& family, RngStream& rng);
/// Sketch Y = A Ω, skeletons from CPQR of Yᵀ.
SkeletonResult rand_cpqr(const Matrix& a, Index k, const SketchSpec& family, RngStream& rng);

/// randLUPP applied to Aᵀ; fills cols and X.
SkeletonResult column_id(const Matrix& a, Index k, const SketchSpec& family, RngStream& rng);
/// Rows by randLUPP, columns by LUPP of A(rows, :)ᵀ; fills rows, cols, W, X, S.
SkeletonResult two_sided_id(const Matrix& a, Index k, const SketchSpec& family, RngStream& rng);
/// Same skeletons as two_sided_id; Umid = C^+ A R^+ by two least-squares solves.
CurFactors cur_decompose(const Matrix& a, Index k, const SketchSpec& family, RngStream& rng);

/// || A - W A(rows, :) ||_F.
double row_id_error(const Matrix& a, const SkeletonResult& r);
/// || Aᵀ - Q Qᵀ Aᵀ ||_F with Q an orthonormal basis of A(rows, :)ᵀ.
double stable_row_id_error(const Matrix& a, std::span<const Index> rows);
double stable_row_id_error(const Matrix& a, const SkeletonResult& r);
/// || A - A(:, cols) X ||_F.
double column_id_error(const Matrix& a, const SkeletonResult& r);
/// || A - W S X ||_F.
double two_sided_id_error(const Matrix& a, const SkeletonResult& r);
/// || A - C Umid R ||_F.
double cur_error(const Matrix& a, const CurFactors& cur);

}  // namespace rskel
