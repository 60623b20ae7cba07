#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rskel/matrix.hpp"
#include "rskel/rng.hpp"

namespace rskel {

enum class SketchKind { Gaussian, Srtt, SparseSign };

/// Normalisation of a sketch Ω (n x ell).
///
///  - InverseSqrtEll: E[Ω Ωᵀ] = I, so E||X Ω||_F^2 = ||X||_F^2. For Gaussian
///    this is variance 1/ell; for SRTT the sqrt(n/ell) factor; for sparse
///    sign the 1/sqrt(zeta) factor.
///  - Unit: sqrt(ell) times the above (unit-variance Gaussian entries).
enum class SketchScale { Unit, InverseSqrtEll };

struct SketchSpec {
  SketchKind kind = SketchKind::Gaussian;
  Index n = 0;    // ambient dimension (rows of Ω)
  Index ell = 0;  // embedding dimension (cols of Ω)
  SketchScale scale = SketchScale::InverseSqrtEll;
  Index zeta = 8;  // nonzeros per row, sparse sign only

  /// Same family, new shape. zeta is capped at ell.
  SketchSpec sized(Index n_, Index ell_) const;
  void validate() const;
};

std::string to_string(SketchKind kind);
SketchKind parse_sketch_kind(const std::string& name);

/// A drawn random embedding Ω. Gaussian sketches are stored densely, SRTT
/// as (permutation, signs, column subset) around a fast DCT, sparse sign in
/// row-compressed form (zeta (column, sign) pairs per row).
class SketchOperator {
 public:
  struct Dense {
    Matrix omega;
  };
  struct Srtt {
    Index n = 0, ell = 0;
    std::vector<Index> perm;   // Π: (x Π)_j = x_{perm[j]}
    std::vector<double> sign;  // Φ: length n
    std::vector<Index> cols;   // Π_{n->ell}: selected output columns
    double scale = 1.0;
  };
  struct SparseSign {
    Index n = 0, ell = 0, zeta = 0;
    std::vector<Index> col;    // n * zeta, row j in [j*zeta, (j+1)*zeta)
    std::vector<double> sign;  // matching ±1
    double scale = 1.0;
  };

  explicit SketchOperator(Dense d) : rep_(std::move(d)) {}
  explicit SketchOperator(Srtt s) : rep_(std::move(s)) {}
  explicit SketchOperator(SparseSign s) : rep_(std::move(s)) {}

  Index rows() const;
  Index cols() const;
  SketchKind kind() const;
  const auto& rep() const noexcept { return rep_; }

  /// Explicit n x ell matrix (tests and small problems only).
  Matrix dense() const;

 private:
  std::variant<Dense, Srtt, SparseSign> rep_;
};

/// i.i.d. normal n x ell matrix with the variance set by spec.scale.
Matrix make_gaussian(const SketchSpec& spec, RngStream& rng);
SketchOperator make_srtt(const SketchSpec& spec, RngStream& rng);
SketchOperator make_sparse_sign(const SketchSpec& spec, RngStream& rng);
/// Dispatch on spec.kind.
SketchOperator make_sketch(const SketchSpec& spec, RngStream& rng);

enum class SketchSide {
  Right,           // A Ω, A is m x n
  TransposedRight  // Aᵀ Γ, rows(A) == rows(Γ)
};

Matrix apply_sketch(const Matrix& a, const SketchOperator& op, SketchSide side = SketchSide::Right);

/// Draw Ω for the given family sized to A and return A Ω.
Matrix sketch_right(const Matrix& a, const SketchSpec& family, Index ell, RngStream& rng);

}  // namespace rskel
