#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rskel/matrix.hpp"
#include "rskel/rng.hpp"

namespace rskel {

enum class MatrixFormat { MatrixMarket, Idx, RawF64, Csv };

std::string to_string(MatrixFormat f);
/// "mtx" / "matrix-market", "idx", "raw" / "f64", "csv".
MatrixFormat parse_matrix_format(const std::string& name);
/// Guess from the file extension; nullopt if unknown.
std::optional<MatrixFormat> format_from_extension(const std::string& path);

/// Test-matrix description. Synthetic kinds ignore path/format; Gaussian
/// and LowRank are extra recipes used by the harness and the tests.
struct MatrixRecipe {
  enum class Kind { FastDecay, Kahan, Chan, FromFile, Gaussian, LowRank };
  Kind kind = Kind::FastDecay;
  Index m = 500;
  Index n = 500;
  double beta = 1e-16;   // FastDecay
  double zeta = 0.99;    // Kahan
  Index rank = 10;       // LowRank
  std::string path;      // FromFile
  std::optional<MatrixFormat> format;

  void validate() const;
};

std::string to_string(MatrixRecipe::Kind k);
/// "fastdecay", "kahan", "chan", "file", "gaussian", "lowrank".
MatrixRecipe::Kind parse_recipe_kind(const std::string& name);

struct FastDecay {
  Matrix a;
  std::vector<double> sigma;
};

/// A = U diag(d) Vᵀ with d_i = beta^{(i-1)/(n-1)} and U (m x n), V (n x n)
/// Haar distributed (QR of a Gaussian, columns sign-fixed so diag(R) > 0).
FastDecay gen_fast_decay(Index m, Index n, double beta, RngStream& rng);

/// Kahan matrix D K: A(i, i) = zeta^i, A(i, j) = -zeta^i phi for j > i,
/// phi = sqrt(1 - zeta^2) (0-based i).
Matrix gen_kahan(Index n, double zeta);

/// Wilkinson-type adversarial matrix for partial pivoting: unit diagonal,
/// -1 strictly below it, last column all ones. No row exchange happens and
/// U(n-1, n-1) = 2^{n-1}.
Matrix gen_chan(Index n);

/// i.i.d. standard normal entries.
Matrix gen_gaussian(Index m, Index n, RngStream& rng);

/// Product of Gaussian m x r and r x n factors (exact rank r almost surely).
Matrix gen_low_rank(Index m, Index n, Index r, RngStream& rng);

/// Materialise a recipe. FromFile reads through the io module.
Matrix make_matrix(const MatrixRecipe& recipe, RngStream& rng);

}  // namespace rskel
