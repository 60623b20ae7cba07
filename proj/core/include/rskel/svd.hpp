#pragma once

#include <span>
#include <vector>

#include "rskel/matrix.hpp"

namespace rskel {

/// A = U diag(sigma) Vᵀ with r = min(m, n), sigma non-increasing.
struct SvdFactors {
  Matrix U;
  std::vector<double> sigma;
  Matrix V;
};

/// Reference SVD by one-sided Jacobi (after a QR reduction for tall inputs).
/// Intended as an accuracy oracle rather than a fast path. Throws
/// NumericalError if 100 sweeps do not converge.
SvdFactors svd(const Matrix& a);

/// Singular values only (same algorithm, skips accumulating V).
std::vector<double> singular_values(const Matrix& a);

/// (sum_{j > k} sigma_j^2)^{1/2}: the optimal rank-k error in the Frobenius norm.
double svd_tail_norm(std::span<const double> sigma, Index k);

/// Minimum-norm least-squares solution A^+ B, singular values below
/// 1e-12 * sigma_max treated as zero.
Matrix pinv_apply(const Matrix& a, const Matrix& b);

}  // namespace rskel
