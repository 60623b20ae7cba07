#pragma once

#include <optional>

#include "rskel/matrix.hpp"

namespace rskel {

/// A P = Q R (possibly partial). Q is m x k with orthonormal columns, R is
/// k x n upper trapezoidal, perm is a column permutation of length n:
/// (A P)(:, j) = A(:, perm[j]). perm is the identity for unpivoted QR.
struct QRFactors {
  Matrix Q;
  Matrix R;
  Permutation perm;
};

/// Householder QR with column pivoting, stopped after k steps
/// (default min(m, n)). Pivot = residual column of largest norm, lowest
/// index on ties. Column norms are downdated and recomputed when the
/// downdate has cancelled more than half the digits.
QRFactors cpqr(const Matrix& a, std::optional<Index> k = std::nullopt);

/// Householder QR, thin: Q is m x min(m, n), R is min(m, n) x n.
QRFactors qr_unpivoted(const Matrix& a);

}  // namespace rskel
