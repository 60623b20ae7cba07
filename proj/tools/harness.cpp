#include "harness.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace rskel::harness {
namespace {

constexpr std::uint64_t kMatrixKey = 0x6d6174;  // "mat"

// Runs body(i) for i in [0, count) on up to `threads` workers. Callers write
// into per-index slots, so the result does not depend on scheduling.
template <class F>
void parallel_for(int count, int threads, F&& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void close_csv(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

double tau_absolute(const ExperimentConfig& cfg, const Matrix& a) {
  if (cfg.tau <= 0.0) return std::numeric_limits<double>::min();
  return cfg.relative ? cfg.tau * frobenius_norm(a) : cfg.tau;
}

AdaptiveOptions adaptive_options(const ExperimentConfig& cfg, const Matrix& a, Index p) {
  AdaptiveOptions o;
  o.block = cfg.b;
  o.tau = tau_absolute(cfg, a);
  o.sketch = cfg.sketch_spec(cfg.sketch.value_or(SketchKind::Gaussian));
  o.max_rank = cfg.max_rank;
  o.p = p;
  return o;
}

}  // namespace

void ExperimentConfig::validate() const {
  recipe.validate();
  RSKEL_REQUIRE(b >= 1, "block size --b must be positive");
  RSKEL_REQUIRE(p >= 0 && p < b, "oversampling --p must satisfy 0 <= p < b");
  RSKEL_REQUIRE(tau >= 0.0 && std::isfinite(tau), "--tau must be a finite non-negative number");
  RSKEL_REQUIRE(trials >= 1, "--trials must be at least 1");
  RSKEL_REQUIRE(!max_rank || *max_rank >= 1, "--max-rank must be positive");
  RSKEL_REQUIRE(threads >= 1, "--threads must be at least 1");
  RSKEL_REQUIRE(runs >= 5, "--runs must be at least 5");
  RSKEL_REQUIRE(zeta >= 1, "--zeta must be positive");
  for (Index k : grid) RSKEL_REQUIRE(k >= 2, "growth grid ranks must be at least 2");
}

SketchSpec ExperimentConfig::sketch_spec(SketchKind kind) const {
  SketchSpec s;
  s.kind = kind;
  s.zeta = zeta;
  return s;
}

LoadedMatrix load_matrix(const ExperimentConfig& cfg, bool orient) {
  LoadedMatrix out;
  RngStream rng = RngStream(cfg.seed).child(kMatrixKey);
  if (cfg.recipe.kind == MatrixRecipe::Kind::FastDecay) {
    cfg.recipe.validate();
    FastDecay fd = gen_fast_decay(cfg.recipe.m, cfg.recipe.n, cfg.recipe.beta, rng);
    out.a = std::move(fd.a);
    out.sigma = std::move(fd.sigma);
  } else {
    out.a = make_matrix(cfg.recipe, rng);
  }
  if (orient && out.a.rows() < out.a.cols()) {
    out.a = out.a.transposed();
    out.transposed = true;
  }
  return out;
}

std::vector<double> spectrum(const LoadedMatrix& m) {
  if (m.sigma) return *m.sigma;
  return singular_values(m.a);
}

AccuracyReport run_accuracy(const ExperimentConfig& cfg, const LoadedMatrix& lm) {
  cfg.validate();
  const Matrix& a = lm.a;
  const std::vector<double> sigma = spectrum(lm);
  const AdaptiveOptions opts = adaptive_options(cfg, a, cfg.p);
  const RngStream base(cfg.seed);

  std::vector<std::vector<AccuracyRow>> per(static_cast<std::size_t>(cfg.trials));
  std::vector<SkeletonStatus> status(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, cfg.threads, [&](int trial) {
    auto& rows = per[static_cast<std::size_t>(trial)];
    auto observe = [&](const BlockedLUState& s, const ErrorRecord& rec) {
      AccuracyRow row;
      row.trial = trial;
      row.t = s.t;
      row.k = rec.rank;
      row.svd_tail = svd_tail_norm(sigma, std::min<Index>(rec.rank, static_cast<Index>(sigma.size())));
      row.e_schur = rec.schur;
      const SkeletonResult lu = skeleton_from_state(s);
      row.id_lupp = row_id_error(a, lu);
      row.sid_lupp = stable_row_id_error(a, lu);
      const SkeletonResult qr = row_id_from_sample_cpqr(s.sample, s.rank());
      row.id_cpqr = row_id_error(a, qr);
      row.sid_cpqr = stable_row_id_error(a, qr);
      row.est_norm_ur = rec.est_norm_ur;
      row.est_max_ur = rec.est_max_ur;
      rows.push_back(row);
    };
    const SkeletonResult r = rand_lupp_adaptive(a, opts, base.child(1 + static_cast<std::uint64_t>(trial)), observe);
    status[static_cast<std::size_t>(trial)] = r.status;
  });

  AccuracyReport rep;
  rep.status = std::move(status);
  std::map<Index, AccuracyMean> acc;
  for (const auto& rows : per) {
    for (const AccuracyRow& r : rows) {
      rep.rows.push_back(r);
      AccuracyMean& m = acc[r.k];
      m.k = r.k;
      ++m.count;
      m.svd_tail += r.svd_tail;
      m.e_schur += r.e_schur;
      m.id_lupp += r.id_lupp;
      m.sid_lupp += r.sid_lupp;
      m.id_cpqr += r.id_cpqr;
      m.sid_cpqr += r.sid_cpqr;
      if (r.est_norm_ur) m.est_norm_ur = m.est_norm_ur.value_or(0.0) + *r.est_norm_ur;
      if (r.est_max_ur) m.est_max_ur = m.est_max_ur.value_or(0.0) + *r.est_max_ur;
    }
  }
  for (auto& [k, m] : acc) {
    const double c = m.count;
    for (double* v : {&m.svd_tail, &m.e_schur, &m.id_lupp, &m.sid_lupp, &m.id_cpqr, &m.sid_cpqr}) *v /= c;
    if (m.est_norm_ur) *m.est_norm_ur /= c;
    if (m.est_max_ur) *m.est_max_ur /= c;
    rep.means.push_back(m);
  }
  return rep;
}

std::vector<Index> growth_grid(const ExperimentConfig& cfg, Index m, Index n) {
  if (!cfg.grid.empty()) return cfg.grid;
  const Index top = std::min(m, n) / 2;
  std::vector<Index> g;
  for (Index i = 1; i <= 10; ++i) g.push_back(std::max<Index>(2, top * i / 10));
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::vector<GrowthRow> run_growth(const ExperimentConfig& cfg, const LoadedMatrix& lm) {
  cfg.validate();
  RSKEL_REQUIRE(cfg.p >= 1, "growth: --p must be at least 1");
  const Matrix& a = lm.a;
  const Index m = a.rows();
  const std::vector<double> sigma = spectrum(lm);
  const std::vector<Index> grid = growth_grid(cfg, m, a.cols());
  for (Index k : grid)
    RSKEL_REQUIRE(k > cfg.p && k <= std::min(m, a.cols()) && k + cfg.p <= m,
                  "growth: grid rank " + std::to_string(k) + " does not fit (need p < k, k + p <= m, k <= n)");

  std::vector<SketchKind> kinds;
  if (cfg.sketch)
    kinds = {*cfg.sketch};
  else
    kinds = {SketchKind::Gaussian, SketchKind::Srtt, SketchKind::SparseSign};

  const RngStream base(cfg.seed);
  std::vector<GrowthRow> out;
  for (SketchKind kind : kinds) {
    const SketchSpec family = cfg.sketch_spec(kind);
    SketchSpec residual = family;
    residual.scale = kind == SketchKind::Gaussian ? SketchScale::Unit : SketchScale::InverseSqrtEll;
    for (Index k : grid) {
      std::vector<double> nu(static_cast<std::size_t>(cfg.trials)), mx(nu.size());
      parallel_for(cfg.trials, cfg.threads, [&](int trial) {
        RngStream rng = base.child(static_cast<std::uint64_t>(kind) + 1)
                            .child(static_cast<std::uint64_t>(k))
                            .child(static_cast<std::uint64_t>(trial));
        BlockedLUState s;
        s.block = k;
        s.t = 1;
        s.sample = sketch_right(a, family, k, rng);
        PartialLU f = lupp_partial(s.sample);
        s.sample.truncate_cols(f.steps());
        s.lu = std::move(f.factors);
        const Matrix yr = sketch_right(a, residual, cfg.p, rng);
        const UrEstimates u = residual_ur_estimates(s, yr, residual.scale);
        nu[static_cast<std::size_t>(trial)] = u.norm_ur;
        mx[static_cast<std::size_t>(trial)] = u.max_ur;
      });
      GrowthRow row;
      row.kind = kind;
      row.k = k;
      row.svd_tail = svd_tail_norm(sigma, std::min<Index>(k, static_cast<Index>(sigma.size())));
      for (std::size_t i = 0; i < nu.size(); ++i) {
        row.mean_norm_ur += nu[i] / cfg.trials;
        row.mean_max_ur += mx[i] / cfg.trials;
        row.worst_ratio_norm = std::max(row.worst_ratio_norm, row.svd_tail / nu[i]);
      }
      row.ratio_norm = row.svd_tail / row.mean_norm_ur;
      row.ratio_max = row.svd_tail / row.mean_max_ur;
      row.reference = ur_reference(m, k, cfg.p, residual.scale);
      out.push_back(row);
    }
  }
  return out;
}

std::vector<BenchRow> run_bench(const ExperimentConfig& cfg, const LoadedMatrix& lm) {
  cfg.validate();
  const Matrix& a = lm.a;
  const Index m = a.rows();
  const Index n = a.cols();
  const SketchSpec family = cfg.sketch_spec(cfg.sketch.value_or(SketchKind::Gaussian));
  const AdaptiveOptions opts = adaptive_options(cfg, a, 0);
  const RngStream base(cfg.seed);
  std::vector<BenchRow> rows;
  auto add = [&](const char* method, Index k, Index b, double s) {
    rows.push_back({method, m, n, k, b, s, cfg.runs});
  };

  add("lupp", n, 0, median_seconds(cfg.runs, [&] { (void)lupp_partial(a); }));
  add("cpqr", std::min(m, n), 0, median_seconds(cfg.runs, [&] { (void)cpqr(a); }));

  Index k = 0;
  const double t_adap = median_seconds(cfg.runs, [&] { k = rand_lupp_adaptive(a, opts, base.child(1)).rank; });
  add("randLUPPadap", k, cfg.b, t_adap);
  add("randLUPP", k, 0, median_seconds(cfg.runs, [&] {
        RngStream r = base.child(2);
        (void)rand_lupp(a, k, family, r);
      }));
  add("randCPQR", k, 0, median_seconds(cfg.runs, [&] {
        RngStream r = base.child(2);
        (void)rand_cpqr(a, k, family, r);
      }));
  return rows;
}

FactorOutcome run_factor(const ExperimentConfig& cfg, const Matrix& a) {
  cfg.validate();
  RSKEL_REQUIRE(cfg.tau > 0.0, "factor: --tau must be positive");
  FactorOutcome o;
  const AdaptiveOptions opts = adaptive_options(cfg, a, cfg.p);
  o.tau_abs = opts.tau;
  o.result = rand_lupp_adaptive(a, opts, RngStream(cfg.seed).child(1));
  switch (o.result.status) {
    case SkeletonStatus::NotConverged: o.exit_code = kNotConverged; break;
    case SkeletonStatus::RankExhausted: o.exit_code = kRankExhausted; break;
    default: o.exit_code = kOk; break;
  }
  if (!cfg.out.empty()) {
    write_indices(cfg.out + "_skeleton.txt", *o.result.rows);
    write_raw_f64(cfg.out + "_W.f64", *o.result.W);
    write_csv_trace(cfg.out + "_trace.csv", o.result.trace);
  }
  return o;
}

std::string describe(const ExperimentConfig& cfg, const LoadedMatrix* m, bool all_kinds) {
  std::ostringstream s;
  const MatrixRecipe& r = cfg.recipe;
  s << "matrix=" << to_string(r.kind);
  if (r.kind == MatrixRecipe::Kind::FromFile)
    s << " path=" << r.path;
  else
    s << " m=" << r.m << " n=" << r.n;
  if (r.kind == MatrixRecipe::Kind::FastDecay) s << " beta=" << format_double(r.beta);
  if (r.kind == MatrixRecipe::Kind::Kahan) s << " zeta=" << format_double(r.zeta);
  if (r.kind == MatrixRecipe::Kind::LowRank) s << " rank=" << r.rank;
  const bool all = all_kinds && !cfg.sketch;
  s << " sketch=" << (all ? std::string("all") : to_string(cfg.sketch.value_or(SketchKind::Gaussian)));
  if (all || cfg.sketch == SketchKind::SparseSign) s << " ss_zeta=" << cfg.zeta;
  s << " b=" << cfg.b << " p=" << cfg.p << " tau=" << format_double(cfg.tau)
    << " relative=" << (cfg.relative ? 1 : 0) << " trials=" << cfg.trials << " seed=" << cfg.seed
    << " max_rank=" << (cfg.max_rank ? std::to_string(*cfg.max_rank) : std::string("auto"));
  if (m) s << " orientation=" << (m->transposed ? "transposed" : "original");
  return s.str();
}

std::string means_path(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "_means";
  return path.substr(0, dot) + "_means" + path.substr(dot);
}

std::string accuracy_csv(const ExperimentConfig& cfg, const LoadedMatrix& m, const AccuracyReport& r) {
  std::ostringstream out;
  out << "# rskel accuracy v1\n# " << describe(cfg, &m) << "\n"
      << "trial,t,k,svdTail,eSchur,idErrLUPP,sIdErrLUPP,idErrCPQR,sIdErrCPQR,estNormUr,estMaxUr\n";
  for (const AccuracyRow& x : r.rows) {
    out << x.trial << ',' << x.t << ',' << x.k << ',' << format_double(x.svd_tail) << ','
        << format_double(x.e_schur) << ',' << format_double(x.id_lupp) << ',' << format_double(x.sid_lupp) << ','
        << format_double(x.id_cpqr) << ',' << format_double(x.sid_cpqr) << ',' << opt(x.est_norm_ur) << ','
        << opt(x.est_max_ur) << '\n';
  }
  return out.str();
}

std::string accuracy_means_csv(const ExperimentConfig& cfg, const LoadedMatrix& m, const AccuracyReport& r) {
  std::ostringstream out;
  out << "# rskel accuracy-means v1\n# " << describe(cfg, &m) << "\n"
      << "k,count,svdTail,eSchur,idErrLUPP,sIdErrLUPP,idErrCPQR,sIdErrCPQR,estNormUr,estMaxUr\n";
  for (const AccuracyMean& x : r.means) {
    out << x.k << ',' << x.count << ',' << format_double(x.svd_tail) << ',' << format_double(x.e_schur) << ','
        << format_double(x.id_lupp) << ',' << format_double(x.sid_lupp) << ',' << format_double(x.id_cpqr) << ','
        << format_double(x.sid_cpqr) << ',' << opt(x.est_norm_ur) << ',' << opt(x.est_max_ur) << '\n';
  }
  return out.str();
}

std::string growth_csv(const ExperimentConfig& cfg, const LoadedMatrix& m, const std::vector<GrowthRow>& rows) {
  std::ostringstream out;
  out << "# rskel growth v1\n# " << describe(cfg, &m, true) << "\n"
      << "sketch,k,svdTail,meanNormUr,meanMaxUr,ratioNormUr,ratioMaxUr,worstRatioNormUr,reference\n";
  for (const GrowthRow& x : rows) {
    out << to_string(x.kind) << ',' << x.k << ',' << format_double(x.svd_tail) << ','
        << format_double(x.mean_norm_ur) << ',' << format_double(x.mean_max_ur) << ','
        << format_double(x.ratio_norm) << ',' << format_double(x.ratio_max) << ','
        << format_double(x.worst_ratio_norm) << ',' << format_double(x.reference) << '\n';
  }
  return out.str();
}

std::string bench_csv(const ExperimentConfig& cfg, const LoadedMatrix& m, const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "# rskel bench v1\n# " << describe(cfg, &m) << " runs=" << cfg.runs << "\n"
      << "method,m,n,k,b,seconds,runs\n";
  for (const BenchRow& x : rows)
    out << x.method << ',' << x.m << ',' << x.n << ',' << x.k << ',' << x.b << ',' << format_double(x.seconds)
        << ',' << x.runs << '\n';
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out = open_csv(path);
  out << text;
  close_csv(out, path);
}

}  // namespace rskel::harness
