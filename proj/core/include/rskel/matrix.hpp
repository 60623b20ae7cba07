#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "rskel/errors.hpp"

namespace rskel {

/// Column-major dense matrix of doubles.
///
/// Entry (i, j) lives at data()[i + j * rows()]. Columns are contiguous,
/// so appending columns is an append to the underlying storage.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Index rows, Index cols);
  Matrix(Index rows, Index cols, std::vector<double> data);

  /// Row-major literal, e.g. Matrix::from_rows({{1, 2}, {3, 4}}).
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix identity(Index n);
  static Matrix diagonal(std::span<const double> d);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index size() const noexcept { return rows_ * cols_; }
  bool empty() const noexcept { return size() == 0; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  double& operator()(Index i, Index j) noexcept { return data_[i + j * rows_]; }
  double operator()(Index i, Index j) const noexcept { return data_[i + j * rows_]; }

  std::span<double> col(Index j) noexcept { return {data_.data() + j * rows_, static_cast<std::size_t>(rows_)}; }
  std::span<const double> col(Index j) const noexcept {
    return {data_.data() + j * rows_, static_cast<std::size_t>(rows_)};
  }

  /// Copy of the nr x nc block starting at (r0, c0).
  Matrix block(Index r0, Index c0, Index nr, Index nc) const;
  void set_block(Index r0, Index c0, const Matrix& b);
  Matrix transposed() const;

  /// Copies of the selected rows / columns, in the given order.
  Matrix select_rows(std::span<const Index> idx) const;
  Matrix select_cols(std::span<const Index> idx) const;

  /// Append the columns of b (b.rows() must match unless *this is empty).
  void append_cols(const Matrix& b);
  /// Keep only the leading nc columns.
  void truncate_cols(Index nc);

  Matrix& operator+=(const Matrix& b);
  Matrix& operator-=(const Matrix& b);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);

/// Row permutation stored as an index vector: (P A)(i, :) = A(perm[i], :).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(Index n);  // identity
  explicit Permutation(std::vector<Index> perm);

  Index size() const noexcept { return static_cast<Index>(perm_.size()); }
  Index operator[](Index i) const noexcept { return perm_[i]; }
  Index& operator[](Index i) noexcept { return perm_[i]; }
  const std::vector<Index>& indices() const noexcept { return perm_; }

  bool is_valid() const;
  bool is_identity() const;
  Permutation inverse() const;
  void swap(Index i, Index j) noexcept { std::swap(perm_[i], perm_[j]); }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Index> perm_;
};

/// (P A): row i of the result is row perm[i] of a.
Matrix row_permute(const Matrix& a, const Permutation& perm);
/// Inverse of row_permute: row perm[i] of the result is row i of a.
Matrix row_unpermute(const Matrix& a, const Permutation& perm);
/// (A P): column j of the result is column perm[j] of a.
Matrix col_permute(const Matrix& a, const Permutation& perm);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);

}  // namespace rskel
