#include "rskel/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rskel/blas.hpp"
#include "rskel/qr.hpp"

namespace rskel {
namespace {

constexpr int kMaxSweeps = 100;

double dot(const double* x, const double* y, Index n) {
  double s = 0.0;
  for (Index i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void rotate(double* x, double* y, Index n, double c, double s) {
  for (Index i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

// One-sided Jacobi on the columns of g (m >= n). Orthogonalizes g in place
// and accumulates the rotations into v when it is non-null.
void jacobi_sweeps(Matrix& g, Matrix* v) {
  const Index m = g.rows();
  const Index n = g.cols();
  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index i = 0; i < n - 1; ++i) {
      double* gi = g.data() + i * m;
      for (Index j = i + 1; j < n; ++j) {
        double* gj = g.data() + j * m;
        const double alpha = dot(gi, gi, m);
        const double beta = dot(gj, gj, m);
        const double gamma = dot(gi, gj, m);
        if (gamma == 0.0 || std::fabs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(gi, gj, m, c, s);
        if (v) rotate(v->data() + i * v->rows(), v->data() + j * v->rows(), v->rows(), c, s);
        rotated = true;
      }
    }
    if (!rotated) return;
  }
  throw NumericalError("svd: one-sided Jacobi did not converge in 100 sweeps");
}

// Fill zero columns of u (those with sigma == 0) with an orthonormal completion.
void complete_basis(Matrix& u, const std::vector<double>& sigma) {
  const Index m = u.rows();
  Index candidate = 0;
  for (Index j = 0; j < u.cols(); ++j) {
    if (sigma[j] > 0.0) continue;
    double* uj = u.data() + j * m;
    while (candidate < m) {
      std::fill(uj, uj + m, 0.0);
      uj[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (Index q = 0; q < u.cols(); ++q) {
          if (q == j || (sigma[q] == 0.0 && q > j)) continue;
          const double* uq = u.data() + q * m;
          const double h = dot(uq, uj, m);
          for (Index i = 0; i < m; ++i) uj[i] -= h * uq[i];
        }
      }
      const double nrm = std::sqrt(dot(uj, uj, m));
      if (nrm > 0.5) {
        for (Index i = 0; i < m; ++i) uj[i] /= nrm;
        break;
      }
    }
  }
}

SvdFactors svd_tall(const Matrix& a, bool want_vectors) {
  const Index m = a.rows();
  const Index n = a.cols();
  Matrix q;
  Matrix g;
  if (m > n) {
    QRFactors f = qr_unpivoted(a);
    q = std::move(f.Q);
    g = std::move(f.R);
  } else {
    g = a;
  }
  Matrix v = Matrix::identity(n);
  jacobi_sweeps(g, want_vectors ? &v : nullptr);

  std::vector<double> sigma(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) sigma[j] = std::sqrt(dot(g.data() + j * g.rows(), g.data() + j * g.rows(), g.rows()));
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return sigma[x] > sigma[y]; });

  SvdFactors out;
  out.sigma.resize(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) out.sigma[j] = sigma[order[j]];
  if (!want_vectors) return out;

  Matrix ug(g.rows(), n);
  out.V = Matrix(n, n);
  for (Index j = 0; j < n; ++j) {
    const Index src = order[j];
    const double s = out.sigma[j];
    for (Index i = 0; i < g.rows(); ++i) ug(i, j) = s > 0.0 ? g(i, src) / s : 0.0;
    for (Index i = 0; i < n; ++i) out.V(i, j) = v(i, src);
  }
  complete_basis(ug, out.sigma);
  out.U = m > n ? gemm(q, ug) : std::move(ug);
  return out;
}

}  // namespace

SvdFactors svd(const Matrix& a) {
  RSKEL_REQUIRE(all_finite(a), "svd: input has non-finite entries");
  if (a.rows() >= a.cols()) return svd_tall(a, true);
  SvdFactors t = svd_tall(a.transposed(), true);
  std::swap(t.U, t.V);
  return t;
}

std::vector<double> singular_values(const Matrix& a) {
  RSKEL_REQUIRE(all_finite(a), "singular_values: input has non-finite entries");
  if (a.rows() >= a.cols()) return svd_tall(a, false).sigma;
  return svd_tall(a.transposed(), false).sigma;
}

double svd_tail_norm(std::span<const double> sigma, Index k) {
  RSKEL_REQUIRE(k >= 0 && k <= static_cast<Index>(sigma.size()), "svd_tail_norm: k out of range");
  double s = 0.0;
  for (Index j = static_cast<Index>(sigma.size()) - 1; j >= k; --j) s += sigma[j] * sigma[j];
  return std::sqrt(s);
}

Matrix pinv_apply(const Matrix& a, const Matrix& b) {
  RSKEL_REQUIRE(a.rows() == b.rows(), "pinv_apply: row count mismatch");
  const SvdFactors f = svd(a);
  const double cutoff = f.sigma.empty() ? 0.0 : 1e-12 * f.sigma.front();
  Matrix c = gemm(f.U, b, Op::Trans);  // r x p
  for (Index i = 0; i < c.rows(); ++i) {
    const double s = f.sigma[i];
    const double inv = s > cutoff && s > 0.0 ? 1.0 / s : 0.0;
    for (Index j = 0; j < c.cols(); ++j) c(i, j) *= inv;
  }
  return gemm(f.V, c);
}

}  // namespace rskel
