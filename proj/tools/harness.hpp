#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rskel/rskel.hpp"

namespace rskel::harness {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kUsage = 1, kNotConverged = 2, kRankExhausted = 3 };

struct ExperimentConfig {
  MatrixRecipe recipe;
  std::optional<SketchKind> sketch;  // growth runs all kinds when unset
  Index zeta = 8;
  Index b = 50;
  Index p = 10;
  double tau = 0.0;  // 0: no tolerance, run to the rank cap
  bool relative = false;
  int trials = 50;
  std::uint64_t seed = 0;
  std::optional<Index> max_rank;
  std::string out;
  int threads = 1;
  std::vector<Index> grid;  // growth ranks; default 10 points up to min(m, n) / 2
  int runs = 5;             // bench repetitions after the warm-up

  void validate() const;
  SketchSpec sketch_spec(SketchKind kind) const;
};

/// The experiment input in row-ID orientation (rows >= cols), plus exact
/// singular values when the recipe knows them.
struct LoadedMatrix {
  Matrix a;
  bool transposed = false;
  std::optional<std::vector<double>> sigma;
};
LoadedMatrix load_matrix(const ExperimentConfig& cfg, bool orient = true);

/// Singular values of the loaded matrix (exact ones if available).
std::vector<double> spectrum(const LoadedMatrix& m);

struct AccuracyRow {
  int trial = 0;
  Index t = 0;
  Index k = 0;
  double svd_tail = 0, e_schur = 0, id_lupp = 0, sid_lupp = 0, id_cpqr = 0, sid_cpqr = 0;
  std::optional<double> est_norm_ur, est_max_ur;
};
struct AccuracyMean {
  Index k = 0;
  int count = 0;
  double svd_tail = 0, e_schur = 0, id_lupp = 0, sid_lupp = 0, id_cpqr = 0, sid_cpqr = 0;
  std::optional<double> est_norm_ur, est_max_ur;
};
struct AccuracyReport {
  std::vector<AccuracyRow> rows;  // sorted by (trial, t)
  std::vector<AccuracyMean> means;
  std::vector<SkeletonStatus> status;  // per trial
};

/// Runs randLUPPadap `trials` times on the same matrix and evaluates, at
/// every k_t, the adaptive ID against randCPQR on the same sample.
AccuracyReport run_accuracy(const ExperimentConfig& cfg, const LoadedMatrix& m);

struct GrowthRow {
  SketchKind kind = SketchKind::Gaussian;
  Index k = 0;
  double svd_tail = 0;
  double mean_norm_ur = 0, mean_max_ur = 0;
  double ratio_norm = 0, ratio_max = 0;  // svd_tail / mean
  double worst_ratio_norm = 0;           // max over trials of svd_tail / ||U_r||_F
  double reference = 0;                  // (4 ln k / k) sqrt(m - k) [sqrt(p)]
};
std::vector<GrowthRow> run_growth(const ExperimentConfig& cfg, const LoadedMatrix& m);
std::vector<Index> growth_grid(const ExperimentConfig& cfg, Index m, Index n);

struct BenchRow {
  std::string method;
  Index m = 0, n = 0, k = 0, b = 0;
  double seconds = 0;  // median
  int runs = 0;
};
std::vector<BenchRow> run_bench(const ExperimentConfig& cfg, const LoadedMatrix& m);

/// Median wall time of `runs` calls after one discarded warm-up call.
template <class F>
double median_seconds(int runs, F&& f);

struct FactorOutcome {
  SkeletonResult result;
  int exit_code = kOk;
  double tau_abs = 0;
};
/// randLUPPadap on A as given; writes <out>_skeleton.txt, <out>_W.f64 and
/// <out>_trace.csv when cfg.out is non-empty.
FactorOutcome run_factor(const ExperimentConfig& cfg, const Matrix& a);

/// CSV documents. Each opens with "# rskel <command> v1" and a comment
/// line describing the configuration.
std::string accuracy_csv(const ExperimentConfig& cfg, const LoadedMatrix& m, const AccuracyReport& r);
std::string accuracy_means_csv(const ExperimentConfig& cfg, const LoadedMatrix& m, const AccuracyReport& r);
std::string growth_csv(const ExperimentConfig& cfg, const LoadedMatrix& m, const std::vector<GrowthRow>& rows);
std::string bench_csv(const ExperimentConfig& cfg, const LoadedMatrix& m, const std::vector<BenchRow>& rows);

/// foo.csv -> foo_means.csv.
std::string means_path(const std::string& path);
void write_text(const std::string& path, const std::string& text);

std::string describe(const ExperimentConfig& cfg, const LoadedMatrix* m = nullptr, bool all_kinds = false);

}  // namespace rskel::harness

#include "harness_impl.hpp"
