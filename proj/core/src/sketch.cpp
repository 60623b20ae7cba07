#include "rskel/sketch.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "rskel/blas.hpp"

namespace rskel {

SketchSpec SketchSpec::sized(Index n_, Index ell_) const {
  SketchSpec s = *this;
  s.n = n_;
  s.ell = ell_;
  s.zeta = std::min(zeta, ell_);
  return s;
}

void SketchSpec::validate() const {
  RSKEL_REQUIRE(n >= 1, "SketchSpec: n must be positive");
  RSKEL_REQUIRE(ell >= 1, "SketchSpec: ell must be positive");
  if (kind == SketchKind::Srtt)
    RSKEL_REQUIRE(ell <= n, "SketchSpec: SRTT requires ell <= n");
  if (kind == SketchKind::SparseSign)
    RSKEL_REQUIRE(zeta >= 1 && zeta <= ell, "SketchSpec: sparse sign requires 1 <= zeta <= ell");
}

std::string to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::Gaussian: return "gaussian";
    case SketchKind::Srtt: return "srtt";
    case SketchKind::SparseSign: return "sparsesign";
  }
  return "unknown";
}

SketchKind parse_sketch_kind(const std::string& name) {
  if (name == "gaussian") return SketchKind::Gaussian;
  if (name == "srtt") return SketchKind::Srtt;
  if (name == "sparsesign" || name == "sparse-sign" || name == "ss") return SketchKind::SparseSign;
  throw ContractViolation("unknown sketch kind '" + name + "'");
}

namespace {

// sqrt(ell) when the caller asked for unit scale, else 1.
double unit_factor(const SketchSpec& spec) {
  return spec.scale == SketchScale::Unit ? std::sqrt(static_cast<double>(spec.ell)) : 1.0;
}

struct FftwFree {
  void operator()(double* p) const { fftw_free(p); }
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Row-wise v -> v T for the orthonormal DCT-II matrix T (n x n), applied to
// every row of the column-major m x n buffer in place.
void rows_times_dct(double* buf, Index m, Index n) {
  if (n == 1) return;
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double sk = 0.5 * std::sqrt(2.0 / static_cast<double>(n));
  for (Index i = 0; i < m; ++i) buf[i] *= s0;
  for (Index i = m; i < m * n; ++i) buf[i] *= sk;
  // REDFT01: Y_j = X_0 + 2 sum_{k>=1} X_k cos(pi k (2j+1) / (2n)).
  int len = static_cast<int>(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_r2r_kind kind = FFTW_REDFT01;
    plan = fftw_plan_many_r2r(1, &len, static_cast<int>(m), buf, nullptr, static_cast<int>(m), 1, buf,
                              nullptr, static_cast<int>(m), 1, &kind, FFTW_ESTIMATE);
  }
  if (!plan) throw NumericalError("srtt: FFTW could not create a DCT plan");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

Matrix apply_srtt(const Matrix& a, const SketchOperator::Srtt& op) {
  const Index m = a.rows();
  const Index n = op.n;
  std::unique_ptr<double, FftwFree> buf(
      static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<std::size_t>(std::max<Index>(1, m * n)))));
  if (!buf) throw std::bad_alloc();
  for (Index j = 0; j < n; ++j) {
    const double* src = a.data() + op.perm[j] * m;
    std::copy(src, src + m, buf.get() + j * m);
  }
  rows_times_dct(buf.get(), m, n);
  Matrix y(m, op.ell);
  for (Index c = 0; c < op.ell; ++c) {
    const Index k = op.cols[c];
    const double f = op.scale * op.sign[k];
    const double* src = buf.get() + k * m;
    double* dst = y.data() + c * m;
    for (Index i = 0; i < m; ++i) dst[i] = f * src[i];
  }
  return y;
}

Matrix apply_sparse_sign(const Matrix& a, const SketchOperator::SparseSign& op) {
  const Index m = a.rows();
  Matrix y(m, op.ell);
  for (Index j = 0; j < op.n; ++j) {
    const double* aj = a.data() + j * m;
    for (Index q = 0; q < op.zeta; ++q) {
      const Index c = op.col[j * op.zeta + q];
      const double f = op.scale * op.sign[j * op.zeta + q];
      double* yc = y.data() + c * m;
      for (Index i = 0; i < m; ++i) yc[i] += f * aj[i];
    }
  }
  return y;
}

Matrix apply_right(const Matrix& a, const SketchOperator& op) {
  RSKEL_REQUIRE(a.cols() == op.rows(), "apply_sketch: A has " + std::to_string(a.cols()) +
                                           " columns but the sketch has " + std::to_string(op.rows()) +
                                           " rows");
  return std::visit(
      [&](const auto& rep) -> Matrix {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, SketchOperator::Dense>)
          return gemm(a, rep.omega);
        else if constexpr (std::is_same_v<T, SketchOperator::Srtt>)
          return apply_srtt(a, rep);
        else
          return apply_sparse_sign(a, rep);
      },
      op.rep());
}

}  // namespace

Index SketchOperator::rows() const {
  return std::visit(
      [](const auto& rep) -> Index {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Dense>)
          return rep.omega.rows();
        else
          return rep.n;
      },
      rep_);
}

Index SketchOperator::cols() const {
  return std::visit(
      [](const auto& rep) -> Index {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Dense>)
          return rep.omega.cols();
        else
          return rep.ell;
      },
      rep_);
}

SketchKind SketchOperator::kind() const {
  if (std::holds_alternative<Dense>(rep_)) return SketchKind::Gaussian;
  if (std::holds_alternative<Srtt>(rep_)) return SketchKind::Srtt;
  return SketchKind::SparseSign;
}

Matrix SketchOperator::dense() const {
  if (const auto* d = std::get_if<Dense>(&rep_)) return d->omega;
  return apply_right(Matrix::identity(rows()), *this);
}

Matrix make_gaussian(const SketchSpec& spec, RngStream& rng) {
  RSKEL_REQUIRE(spec.kind == SketchKind::Gaussian, "make_gaussian: spec kind is not Gaussian");
  spec.validate();
  const double sd = spec.scale == SketchScale::Unit ? 1.0 : 1.0 / std::sqrt(static_cast<double>(spec.ell));
  Matrix omega(spec.n, spec.ell);
  for (double& v : omega.values()) v = sd * rng.normal();
  return omega;
}

SketchOperator make_srtt(const SketchSpec& spec, RngStream& rng) {
  RSKEL_REQUIRE(spec.kind == SketchKind::Srtt, "make_srtt: spec kind is not SRTT");
  spec.validate();
  SketchOperator::Srtt s;
  s.n = spec.n;
  s.ell = spec.ell;
  s.perm = random_permutation(spec.n, rng);
  s.sign.resize(static_cast<std::size_t>(spec.n));
  for (double& v : s.sign) v = rng.rademacher();
  // Uniform subset of ell columns without replacement (partial Fisher-Yates).
  std::vector<Index> pool = random_permutation(spec.n, rng);
  s.cols.assign(pool.begin(), pool.begin() + spec.ell);
  s.scale = std::sqrt(static_cast<double>(spec.n) / static_cast<double>(spec.ell)) * unit_factor(spec);
  return SketchOperator(std::move(s));
}

SketchOperator make_sparse_sign(const SketchSpec& spec, RngStream& rng) {
  RSKEL_REQUIRE(spec.kind == SketchKind::SparseSign, "make_sparse_sign: spec kind is not sparse sign");
  spec.validate();
  SketchOperator::SparseSign s;
  s.n = spec.n;
  s.ell = spec.ell;
  s.zeta = spec.zeta;
  s.col.resize(static_cast<std::size_t>(spec.n * spec.zeta));
  s.sign.resize(s.col.size());
  // The scratch array stays a permutation of 0..ell-1 across rows, so each
  // row's zeta-step partial shuffle picks a uniform set of distinct columns.
  std::vector<Index> scratch(static_cast<std::size_t>(spec.ell));
  for (Index c = 0; c < spec.ell; ++c) scratch[c] = c;
  for (Index j = 0; j < spec.n; ++j) {
    for (Index q = 0; q < spec.zeta; ++q) {
      const Index r = q + rng.uniform_index(spec.ell - q);
      std::swap(scratch[q], scratch[r]);
      s.col[j * spec.zeta + q] = scratch[q];
      s.sign[j * spec.zeta + q] = rng.rademacher();
    }
  }
  s.scale = unit_factor(spec) / std::sqrt(static_cast<double>(spec.zeta));
  return SketchOperator(std::move(s));
}

SketchOperator make_sketch(const SketchSpec& spec, RngStream& rng) {
  switch (spec.kind) {
    case SketchKind::Gaussian: return SketchOperator(SketchOperator::Dense{make_gaussian(spec, rng)});
    case SketchKind::Srtt: return make_srtt(spec, rng);
    case SketchKind::SparseSign: return make_sparse_sign(spec, rng);
  }
  throw ContractViolation("make_sketch: unknown kind");
}

Matrix apply_sketch(const Matrix& a, const SketchOperator& op, SketchSide side) {
  if (side == SketchSide::Right) return apply_right(a, op);
  RSKEL_REQUIRE(a.rows() == op.rows(), "apply_sketch: A has " + std::to_string(a.rows()) +
                                           " rows but the sketch has " + std::to_string(op.rows()) +
                                           " rows");
  return apply_right(a.transposed(), op);
}

Matrix sketch_right(const Matrix& a, const SketchSpec& family, Index ell, RngStream& rng) {
  return apply_sketch(a, make_sketch(family.sized(a.cols(), ell), rng), SketchSide::Right);
}

}  // namespace rskel
