#include "rskel/adaptive.hpp"

#include <algorithm>
#include <cmath>

namespace rskel {
namespace {

// Stream key for the U_r sample, kept apart from the block keys 0, 1, 2, ...
constexpr std::uint64_t kResidualKey = 0x5552'5f73'616d'706cULL;

double isometric_factor(SketchScale scale, Index ell) {
  return scale == SketchScale::Unit ? 1.0 / std::sqrt(static_cast<double>(ell)) : 1.0;
}

}  // namespace

Matrix draw_block(const Matrix& a, Index b, const SketchSpec& family, const RngStream& base, Index t) {
  RngStream r = base.child(static_cast<std::uint64_t>(t));
  return sketch_right(a, family, b, r);
}

BlockedLUState adaptive_init(const Matrix& a, Index b, const SketchSpec& family, const RngStream& rng) {
  RSKEL_REQUIRE(b >= 1 && b <= std::min(a.rows(), a.cols()),
                "adaptive_init: block size must lie in [1, min(m, n)]");
  BlockedLUState s;
  s.block = b;
  s.base = rng;
  s.sample = draw_block(a, b, family, rng, 0);
  s.lu = lupp(s.sample);
  s.t = 1;
  return s;
}

SchurEstimate schur_estimate(const BlockedLUState& s, const Matrix& a, const SketchSpec& family) {
  RSKEL_REQUIRE(a.rows() == s.rows(), "schur_estimate: matrix does not match the state");
  RSKEL_REQUIRE(s.rank() + s.block <= std::min(a.rows(), a.cols()),
                "schur_estimate: no room for another block");
  Matrix y = draw_block(a, s.block, family, s.base, s.t);
  SchurBlock block = schur_complement(s.lu, y);
  const double est = frobenius_norm(block.schur) * isometric_factor(family.scale, s.block);
  return {std::move(block), std::move(y), est};
}

Index adaptive_absorb(BlockedLUState& s, SchurEstimate&& est) {
  const Index gained = absorb_schur(s.lu, est.block);
  if (gained < est.y.cols()) est.y.truncate_cols(gained);
  s.sample.append_cols(est.y);
  ++s.t;
  return gained;
}

std::optional<double> adaptive_step(BlockedLUState& s, const Matrix& a, const SketchSpec& family) {
  if (s.rank() + s.block > std::min(a.rows(), a.cols())) return std::nullopt;
  SchurEstimate est = schur_estimate(s, a, family);
  const double e = est.estimate;
  const Index k = s.rank();
  const Index b = s.block;
  const Index gained = adaptive_absorb(s, std::move(est));
  if (gained < b)
    throw RankDeficient(k + gained, "adaptive_step: zero pivot column at step " + std::to_string(k + gained));
  return e;
}

SkeletonResult skeleton_from_state(const BlockedLUState& s) { return row_id_from_lu(s.lu); }

double ur_reference(Index m, Index k, Index p, SketchScale scale) {
  if (k <= 1) return 0.0;
  const double kd = static_cast<double>(k);
  double f = 4.0 * std::log(kd) / kd * std::sqrt(static_cast<double>(m - k));
  if (scale == SketchScale::InverseSqrtEll) f *= std::sqrt(static_cast<double>(p));
  return f;
}

UrEstimates residual_ur_estimates(const BlockedLUState& s, const Matrix& yr, SketchScale scale) {
  const Index m = s.rows();
  const Index k = s.rank();
  const Index p = yr.cols();
  RSKEL_REQUIRE(yr.rows() == m, "residual_ur_estimates: Y_r row count mismatch");
  RSKEL_REQUIRE(p >= 1 && k + p <= m, "residual_ur_estimates: need 1 <= p <= m - k");
  const SchurBlock sb = schur_complement(s.lu, yr);
  const PartialLU ur = lupp_partial(sb.schur);
  UrEstimates out;
  out.norm_ur = frobenius_norm(ur.factors.U);
  out.max_ur = max_abs(ur.factors.U);
  const double ref = ur_reference(m, k, p, scale);
  out.est_norm = ref * out.norm_ur;
  out.est_max = ref * out.max_ur;
  return out;
}

UrEstimates residual_ur_estimates(const BlockedLUState& s, const Matrix& a, Index p,
                                  const SketchSpec& family, RngStream& rng) {
  RSKEL_REQUIRE(p >= 1 && p < s.block, "residual_ur_estimates: oversampling p must satisfy 1 <= p < b");
  return residual_ur_estimates(s, sketch_right(a, family, p, rng), family.scale);
}

SkeletonResult rand_lupp_adaptive(const Matrix& a, const AdaptiveOptions& opts, const RngStream& rng,
                                  const AdaptiveObserver& observer) {
  const Index m = a.rows();
  const Index n = a.cols();
  const Index b = opts.block;
  const Index full = std::min(m, n);
  RSKEL_REQUIRE(opts.tau > 0.0, "rand_lupp_adaptive: tau must be positive");
  RSKEL_REQUIRE(b >= 1 && b <= full, "rand_lupp_adaptive: block size must lie in [1, min(m, n)]");
  RSKEL_REQUIRE(!opts.max_rank || *opts.max_rank >= 1, "rand_lupp_adaptive: max rank must be positive");
  RSKEL_REQUIRE(opts.p == 0 || opts.p < b, "rand_lupp_adaptive: oversampling p must satisfy p < b");
  const Index cap = std::min(opts.max_rank.value_or(full - b), full - b);

  std::optional<Matrix> yr;
  if (opts.p > 0) {
    RngStream r = rng.child(kResidualKey);
    SketchSpec g;
    g.kind = SketchKind::Gaussian;
    g.scale = SketchScale::Unit;
    yr = sketch_right(a, g, opts.p, r);
  }

  ErrorTrace trace;
  SkeletonStatus status = SkeletonStatus::Ok;
  BlockedLUState s;
  try {
    s = adaptive_init(a, b, opts.sketch, rng);
  } catch (const RankDeficient& e) {
    // The very first sample is rank deficient: keep the factored pivots.
    if (e.step() == 0) throw;
    s.block = b;
    s.base = rng;
    s.sample = draw_block(a, b, opts.sketch, rng, 0);
    PartialLU p = lupp_partial(s.sample);
    s.sample.truncate_cols(p.steps());
    s.lu = std::move(p.factors);
    s.t = 1;
    SkeletonResult r = skeleton_from_state(s);
    r.status = SkeletonStatus::RankExhausted;
    return r;
  }

  for (;;) {
    ErrorRecord rec;
    rec.rank = s.rank();
    std::optional<SchurEstimate> est;
    if (s.rank() + b <= full) {
      est = schur_estimate(s, a, opts.sketch);
      rec.schur = est->estimate;
    } else {
      // The sample spans min(m, n) columns: the skeletons reproduce A.
      rec.schur = 0.0;
    }
    if (yr && s.rank() + opts.p <= m) {
      const UrEstimates u = residual_ur_estimates(s, *yr, SketchScale::Unit);
      rec.est_norm_ur = u.est_norm;
      rec.est_max_ur = u.est_max;
    }
    trace.push_back(rec);
    if (observer) observer(s, rec);

    if (!est || rec.schur <= opts.tau) break;
    if (s.rank() + b > cap) {
      status = SkeletonStatus::NotConverged;
      break;
    }
    if (adaptive_absorb(s, std::move(*est)) < b) {
      status = SkeletonStatus::RankExhausted;
      break;
    }
  }

  SkeletonResult r = skeleton_from_state(s);
  r.trace = std::move(trace);
  r.status = status;
  return r;
}

}  // namespace rskel
