#pragma once

#include <functional>
#include <optional>

#include "rskel/lu.hpp"
#include "rskel/matrix.hpp"
#include "rskel/rng.hpp"
#include "rskel/skeleton.hpp"
#include "rskel/sketch.hpp"

namespace rskel {

/// Growing LUPP factorization of the accumulated sample [Y^0 | ... | Y^{t-1}].
///
/// Block t is drawn from base.child(t), so the sample a state holds depends
/// only on (A, block size, sketch family, base stream) and never on how the
/// steps were interleaved with estimates.
struct BlockedLUState {
  Index block = 0;
  Index t = 0;
  LUFactors lu;
  Matrix sample;  // Ysofar, m x rank()
  RngStream base{0};

  Index rank() const noexcept { return lu.rank(); }
  Index rows() const noexcept { return sample.rows(); }
};

/// Draw block `t` of the sample: A Ω^{(t)} with b columns.
Matrix draw_block(const Matrix& a, Index b, const SketchSpec& family, const RngStream& base, Index t);

/// First block: Y^0 = A Ω^0 factored by lupp. Throws RankDeficient.
BlockedLUState adaptive_init(const Matrix& a, Index b, const SketchSpec& family, const RngStream& rng);

/// Schur block of the next sample against the current factorization, and
/// the estimate of ||A - W A(I_s, :)||_F it yields at the current rank.
struct SchurEstimate {
  SchurBlock block;
  Matrix y;         // the drawn block, appended to the sample on absorb
  double estimate;  // ||S||_F, normalised to the isometric sketch scale
};
SchurEstimate schur_estimate(const BlockedLUState& s, const Matrix& a, const SketchSpec& family);

/// Fold an estimated block into the state. Returns the pivots gained; fewer
/// than the block width means a zero pivot column was met, and the sample is
/// truncated to the factored columns.
Index adaptive_absorb(BlockedLUState& s, SchurEstimate&& est);

/// One full iteration: estimate, then absorb. Throws RankDeficient when the
/// Schur block runs out of pivots (the state is left truncated, not rolled
/// back). Returns nullopt without touching the state when another block
/// would not fit in min(m, n) columns.
std::optional<double> adaptive_step(BlockedLUState& s, const Matrix& a, const SketchSpec& family);

/// Row ID at the state's current rank.
SkeletonResult skeleton_from_state(const BlockedLUState& s);

struct UrEstimates {
  double norm_ur = 0.0;  // ||U_r||_F
  double max_ur = 0.0;   // max |U_r|
  double est_norm = 0.0;
  double est_max = 0.0;
};

/// Residual-triangle estimates from a sample Y_r = A Ω_r reserved for the
/// purpose. U_r is the trailing block of the LU of [Ysofar | Y_r], obtained
/// from the Schur complement of Y_r against the state. With k = rank():
///
///   est_norm = (4 ln k / k) sqrt(m - k) ||U_r||_F   (unit-variance Ω_r)
///
/// and sqrt(p (m - k)) in place of sqrt(m - k) when Ω_r has the isometric
/// scale.
UrEstimates residual_ur_estimates(const BlockedLUState& s, const Matrix& yr, SketchScale scale);

/// Draws Y_r (p columns) from `rng` with the given family, then as above.
/// Requires 1 <= p < block size.
UrEstimates residual_ur_estimates(const BlockedLUState& s, const Matrix& a, Index p,
                                  const SketchSpec& family, RngStream& rng);

/// The scale factor (4 ln k / k) sqrt(m - k) [sqrt(p)] shared by the estimates.
double ur_reference(Index m, Index k, Index p, SketchScale scale);

struct AdaptiveOptions {
  Index block = 50;
  double tau = 0.0;  // absolute Frobenius tolerance, > 0
  SketchSpec sketch;
  std::optional<Index> max_rank;  // default and upper clamp min(m, n) - block
  Index p = 0;                    // > 0: also record U_r estimates (Gaussian unit Ω_r)
};

/// Called once per estimate, before the decision to stop or continue.
using AdaptiveObserver = std::function<void(const BlockedLUState&, const ErrorRecord&)>;

/// Adaptive randomized LUPP row ID.
///
/// Grows the rank one block at a time. Each iteration estimates the error of
/// the current rank-k skeletons from the next block's Schur complement and
/// stops at the first k whose estimate is <= tau; that block is discarded.
/// Status is NotConverged when the rank cap is reached first and
/// RankExhausted when a Schur block runs out of pivots (the result is then
/// truncated to the factored pivots).
SkeletonResult rand_lupp_adaptive(const Matrix& a, const AdaptiveOptions& opts, const RngStream& rng,
                                  const AdaptiveObserver& observer = {});

}  // namespace rskel
