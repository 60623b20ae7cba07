#include "rskel/qr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rskel {
namespace {

double norm2(const double* x, Index n) {
  double s = 0.0;
  for (Index i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

// Householder reflector H = I - tau v vᵀ with v(0) = 1 that maps x to
// (beta, 0, ..., 0). On exit x[0] = beta and x[1:] holds v(1:).
double make_reflector(double* x, Index n) {
  if (n <= 1) return 0.0;
  const double alpha = x[0];
  const double xnorm = norm2(x + 1, n - 1);
  if (xnorm == 0.0) return 0.0;
  const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
  const double tau = (beta - alpha) / beta;
  const double scale = 1.0 / (alpha - beta);
  for (Index i = 1; i < n; ++i) x[i] *= scale;
  x[0] = beta;
  return tau;
}

// c := H c for the reflector stored in v (v(0) implicitly 1).
inline void apply_reflector(const double* v, double tau, double* c, Index n) {
  if (tau == 0.0) return;
  double w = c[0];
  for (Index i = 1; i < n; ++i) w += v[i] * c[i];
  w *= tau;
  c[0] -= w;
  for (Index i = 1; i < n; ++i) c[i] -= w * v[i];
}

Matrix form_q(const Matrix& w, const std::vector<double>& tau, Index k) {
  const Index m = w.rows();
  Matrix q(m, k);
  for (Index j = 0; j < k; ++j) q(j, j) = 1.0;
  for (Index t = k - 1; t >= 0; --t) {
    const double* v = w.data() + t + t * m;
    for (Index j = t; j < k; ++j) apply_reflector(v, tau[t], q.data() + t + j * m, m - t);
  }
  return q;
}

Matrix upper_part(const Matrix& w, Index k) {
  Matrix r(k, w.cols());
  for (Index j = 0; j < w.cols(); ++j)
    for (Index i = 0; i <= std::min(j, k - 1); ++i) r(i, j) = w(i, j);
  return r;
}

}  // namespace

QRFactors cpqr(const Matrix& a, std::optional<Index> k_opt) {
  const Index m = a.rows();
  const Index n = a.cols();
  const Index kmax = std::min(m, n);
  const Index k = k_opt.value_or(kmax);
  RSKEL_REQUIRE(!k_opt || (k >= 1 && k <= kmax), "cpqr: k must lie in [1, min(m, n)]");
  RSKEL_REQUIRE(all_finite(a), "cpqr: input has non-finite entries");

  Matrix w = a;
  Permutation perm(n);
  std::vector<double> tau(static_cast<std::size_t>(k), 0.0);
  std::vector<double> vn1(static_cast<std::size_t>(n)), vn2(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) vn1[j] = vn2[j] = norm2(w.data() + j * m, m);
  const double tol3z = std::sqrt(std::numeric_limits<double>::epsilon());

  for (Index t = 0; t < k; ++t) {
    Index pvt = t;
    for (Index j = t + 1; j < n; ++j)
      if (vn1[j] > vn1[pvt]) pvt = j;
    if (pvt != t) {
      std::swap_ranges(w.data() + t * m, w.data() + (t + 1) * m, w.data() + pvt * m);
      perm.swap(t, pvt);
      std::swap(vn1[t], vn1[pvt]);
      std::swap(vn2[t], vn2[pvt]);
    }
    double* v = w.data() + t + t * m;
    tau[t] = make_reflector(v, m - t);
    for (Index j = t + 1; j < n; ++j) {
      apply_reflector(v, tau[t], w.data() + t + j * m, m - t);
      if (vn1[j] == 0.0) continue;
      double temp = std::fabs(w(t, j)) / vn1[j];
      temp = std::max(0.0, 1.0 - temp * temp);
      const double ratio = vn1[j] / vn2[j];
      if (temp * ratio * ratio <= tol3z) {
        vn1[j] = t + 1 < m ? norm2(w.data() + (t + 1) + j * m, m - t - 1) : 0.0;
        vn2[j] = vn1[j];
      } else {
        vn1[j] *= std::sqrt(temp);
      }
    }
  }
  return {form_q(w, tau, k), upper_part(w, k), std::move(perm)};
}

QRFactors qr_unpivoted(const Matrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  const Index k = std::min(m, n);
  RSKEL_REQUIRE(all_finite(a), "qr_unpivoted: input has non-finite entries");
  Matrix w = a;
  std::vector<double> tau(static_cast<std::size_t>(k), 0.0);
  for (Index t = 0; t < k; ++t) {
    double* v = w.data() + t + t * m;
    tau[t] = make_reflector(v, m - t);
    for (Index j = t + 1; j < n; ++j) apply_reflector(v, tau[t], w.data() + t + j * m, m - t);
  }
  return {form_q(w, tau, k), upper_part(w, k), Permutation(n)};
}

}  // namespace rskel
