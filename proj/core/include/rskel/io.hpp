#pragma once

#include <span>
#include <string>
#include <vector>

#include "rskel/matrix.hpp"
#include "rskel/skeleton.hpp"
#include "rskel/zoo.hpp"

namespace rskel {

/// Matrix Market, coordinate or array, real/integer/pattern, general or
/// symmetric/skew-symmetric. Coordinate files are densified; duplicates add.
Matrix read_matrix_market(const std::string& path);
Matrix parse_matrix_market(const std::string& text);

/// IDX image file (magic 0x00000803): N images of R x C unsigned bytes,
/// returned as an N x (R C) matrix scaled to [0, 1].
Matrix read_idx_images(const std::string& path);
Matrix parse_idx_images(std::span<const unsigned char> bytes);

/// Column-major little-endian float64 with explicit dimensions.
Matrix read_raw_f64(const std::string& path, Index m, Index n);
void write_raw_f64(const std::string& path, const Matrix& a);

/// Comma-separated values, one matrix row per line, %.17g. With a header,
/// the first line holds column names c0, c1, ...; reading skips a first line
/// that does not parse as numbers, and lines starting with '#'.
void write_csv_matrix(const std::string& path, const Matrix& a, bool header = true);
Matrix read_csv_matrix(const std::string& path);
Matrix parse_csv_matrix(const std::string& text);

/// Trace CSV: k,eSchur,estNormUr,estMaxUr (empty cells when absent).
void write_csv_trace(const std::string& path, const ErrorTrace& trace);

/// Dispatch on format; m and n are used by RawF64 only.
Matrix read_matrix(const std::string& path, MatrixFormat format, Index m = 0, Index n = 0);
void write_matrix(const std::string& path, const Matrix& a, MatrixFormat format);

/// Write one index per line.
void write_indices(const std::string& path, std::span<const Index> idx);

/// Format with %.17g.
std::string format_double(double v);

}  // namespace rskel
