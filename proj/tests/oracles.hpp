#pragma once

// Reference implementations used only by the tests. They are written in the
// most direct textbook form and share no code with the library kernels.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "rskel/matrix.hpp"

namespace oracle {

using rskel::Index;
using rskel::Matrix;

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j) {
      long double s = 0;
      for (Index p = 0; p < a.cols(); ++p) s += static_cast<long double>(a(i, p)) * b(p, j);
      c(i, j) = static_cast<double>(s);
    }
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline double fro(const Matrix& a) {
  long double s = 0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) s += static_cast<long double>(a(i, j)) * a(i, j);
  return std::sqrt(static_cast<double>(s));
}

inline double diff(const Matrix& a, const Matrix& b) {
  long double s = 0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) {
      const long double d = static_cast<long double>(a(i, j)) - b(i, j);
      s += d * d;
    }
  return std::sqrt(static_cast<double>(s));
}

/// Unblocked Gaussian elimination with partial pivoting on an m x k matrix
/// (strict '>' comparison, so the first maximal entry wins).
struct GeResult {
  std::vector<Index> perm;
  Matrix L, U;
  Index steps = 0;
};
inline GeResult gaussian_elimination(Matrix w) {
  const Index m = w.rows(), k = w.cols();
  GeResult r;
  r.perm.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) r.perm[i] = i;
  Index t = 0;
  for (; t < k; ++t) {
    Index piv = t;
    for (Index i = t + 1; i < m; ++i)
      if (std::fabs(w(i, t)) > std::fabs(w(piv, t))) piv = i;
    if (w(piv, t) == 0.0) break;
    for (Index j = 0; j < k; ++j) std::swap(w(t, j), w(piv, j));
    std::swap(r.perm[t], r.perm[piv]);
    for (Index i = t + 1; i < m; ++i) {
      w(i, t) /= w(t, t);
      for (Index j = t + 1; j < k; ++j) w(i, j) -= w(i, t) * w(t, j);
    }
  }
  r.steps = t;
  r.L = Matrix(m, t);
  r.U = Matrix(t, t);
  for (Index j = 0; j < t; ++j) {
    r.L(j, j) = 1.0;
    for (Index i = j + 1; i < m; ++i) r.L(i, j) = w(i, j);
    for (Index i = 0; i <= j; ++i) r.U(i, j) = w(i, j);
  }
  return r;
}

/// Eigenvalues of a symmetric matrix by the cyclic two-sided Jacobi method,
/// sorted non-increasing.
inline std::vector<double> symmetric_eigenvalues(Matrix s) {
  const Index n = s.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) {
        total += s(i, j) * s(i, j);
        if (i != j) off += s(i, j) * s(i, j);
      }
    if (off <= 1e-30 * total) break;
    for (Index p = 0; p < n - 1; ++p)
      for (Index q = p + 1; q < n; ++q) {
        if (s(p, q) == 0.0) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
        for (Index k = 0; k < n; ++k) {
          const double skp = s(k, p), skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (Index k = 0; k < n; ++k) {
          const double spk = s(p, k), sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
      }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ev[i] = s(i, i);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

/// Numerical rank by Gram-matrix eigenvalues: counts eigenvalues above
/// rel times the largest (singular values above sqrt(rel) times the largest).
inline Index rank_of(const Matrix& a, double rel = 1e-10) {
  const std::vector<double> ev = symmetric_eigenvalues(matmul(transpose(a), a));
  Index r = 0;
  for (double e : ev)
    if (e > rel * ev.front()) ++r;
  return r;
}

}  // namespace oracle
