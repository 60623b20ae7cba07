#include "rskel/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rskel {

Matrix::Matrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0.0) {
  RSKEL_REQUIRE(rows >= 0 && cols >= 0, "Matrix: negative dimension");
}

Matrix::Matrix(Index rows, Index cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  RSKEL_REQUIRE(rows >= 0 && cols >= 0, "Matrix: negative dimension");
  RSKEL_REQUIRE(static_cast<Index>(data_.size()) == rows * cols,
                "Matrix: data length must equal rows * cols");
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const Index m = static_cast<Index>(rows.size());
  const Index n = m == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  Matrix a(m, n);
  Index i = 0;
  for (const auto& r : rows) {
    RSKEL_REQUIRE(static_cast<Index>(r.size()) == n, "Matrix::from_rows: ragged rows");
    Index j = 0;
    for (double v : r) a(i, j++) = v;
    ++i;
  }
  return a;
}

Matrix Matrix::identity(Index n) {
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  const auto n = static_cast<Index>(d.size());
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) a(i, i) = d[i];
  return a;
}

Matrix Matrix::block(Index r0, Index c0, Index nr, Index nc) const {
  RSKEL_REQUIRE(r0 >= 0 && c0 >= 0 && nr >= 0 && nc >= 0 && r0 + nr <= rows_ && c0 + nc <= cols_,
                "Matrix::block: out of range");
  Matrix b(nr, nc);
  for (Index j = 0; j < nc; ++j) {
    const double* src = data() + r0 + (c0 + j) * rows_;
    std::copy(src, src + nr, b.data() + j * nr);
  }
  return b;
}

void Matrix::set_block(Index r0, Index c0, const Matrix& b) {
  RSKEL_REQUIRE(r0 >= 0 && c0 >= 0 && r0 + b.rows() <= rows_ && c0 + b.cols() <= cols_,
                "Matrix::set_block: out of range");
  for (Index j = 0; j < b.cols(); ++j) {
    const double* src = b.data() + j * b.rows();
    std::copy(src, src + b.rows(), data() + r0 + (c0 + j) * rows_);
  }
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  constexpr Index kTile = 32;
  for (Index jj = 0; jj < cols_; jj += kTile) {
    for (Index ii = 0; ii < rows_; ii += kTile) {
      const Index je = std::min(cols_, jj + kTile);
      const Index ie = std::min(rows_, ii + kTile);
      for (Index j = jj; j < je; ++j)
        for (Index i = ii; i < ie; ++i) t(j, i) = (*this)(i, j);
    }
  }
  return t;
}

Matrix Matrix::select_rows(std::span<const Index> idx) const {
  const auto k = static_cast<Index>(idx.size());
  Matrix b(k, cols_);
  for (Index i = 0; i < k; ++i)
    RSKEL_REQUIRE(idx[i] >= 0 && idx[i] < rows_, "Matrix::select_rows: index out of range");
  for (Index j = 0; j < cols_; ++j) {
    const double* src = data() + j * rows_;
    double* dst = b.data() + j * k;
    for (Index i = 0; i < k; ++i) dst[i] = src[idx[i]];
  }
  return b;
}

Matrix Matrix::select_cols(std::span<const Index> idx) const {
  const auto k = static_cast<Index>(idx.size());
  Matrix b(rows_, k);
  for (Index j = 0; j < k; ++j) {
    RSKEL_REQUIRE(idx[j] >= 0 && idx[j] < cols_, "Matrix::select_cols: index out of range");
    const double* src = data() + idx[j] * rows_;
    std::copy(src, src + rows_, b.data() + j * rows_);
  }
  return b;
}

void Matrix::append_cols(const Matrix& b) {
  if (size() == 0 && cols_ == 0) rows_ = b.rows();
  RSKEL_REQUIRE(b.rows() == rows_, "Matrix::append_cols: row count mismatch");
  data_.insert(data_.end(), b.data_.begin(), b.data_.end());
  cols_ += b.cols();
}

void Matrix::truncate_cols(Index nc) {
  RSKEL_REQUIRE(nc >= 0 && nc <= cols_, "Matrix::truncate_cols: out of range");
  data_.resize(static_cast<std::size_t>(rows_ * nc));
  cols_ = nc;
}

Matrix& Matrix::operator+=(const Matrix& b) {
  RSKEL_REQUIRE(rows_ == b.rows_ && cols_ == b.cols_, "Matrix +=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += b.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& b) {
  RSKEL_REQUIRE(rows_ == b.rows_ && cols_ == b.cols_, "Matrix -=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= b.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Permutation::Permutation(Index n) : perm_(static_cast<std::size_t>(n)) {
  std::iota(perm_.begin(), perm_.end(), Index{0});
}

Permutation::Permutation(std::vector<Index> perm) : perm_(std::move(perm)) {
  RSKEL_REQUIRE(is_valid(), "Permutation: not a bijection");
}

bool Permutation::is_valid() const {
  std::vector<char> seen(perm_.size(), 0);
  for (Index p : perm_) {
    if (p < 0 || p >= size() || seen[p]) return false;
    seen[p] = 1;
  }
  return true;
}

bool Permutation::is_identity() const {
  for (Index i = 0; i < size(); ++i)
    if (perm_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<Index> inv(perm_.size());
  for (Index i = 0; i < size(); ++i) inv[perm_[i]] = i;
  return Permutation(std::move(inv));
}

Matrix row_permute(const Matrix& a, const Permutation& perm) {
  RSKEL_REQUIRE(perm.size() == a.rows(), "row_permute: permutation length must equal rows");
  return a.select_rows(perm.indices());
}

Matrix row_unpermute(const Matrix& a, const Permutation& perm) {
  return row_permute(a, perm.inverse());
}

Matrix col_permute(const Matrix& a, const Permutation& perm) {
  RSKEL_REQUIRE(perm.size() == a.cols(), "col_permute: permutation length must equal cols");
  return a.select_cols(perm.indices());
}

double frobenius_norm(const Matrix& a) {
  const double big = max_abs(a);
  if (big == 0.0) return 0.0;
  if (big > 1e-140 && big < 1e140) {
    double s = 0.0;
    for (double v : a.values()) s += v * v;
    return std::sqrt(s);
  }
  // Scaled sum of squares so extreme entries neither underflow nor overflow.
  double scale = 0.0, ssq = 1.0;
  for (double v : a.values()) {
    if (v == 0.0) continue;
    const double av = std::fabs(v);
    if (scale < av) {
      ssq = 1.0 + ssq * (scale / av) * (scale / av);
      scale = av;
    } else {
      ssq += (av / scale) * (av / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::fabs(v));
  return m;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.values().begin(), a.values().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace rskel
