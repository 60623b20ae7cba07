// rskel: command-line harness for randomized LUPP skeletonization.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "harness.hpp"

using namespace rskel;
using namespace rskel::harness;

namespace {

struct Flags {
  std::string matrix = "fastdecay";
  std::string format;
  std::string sketch;
  Index nnz = 8;
  Index m = 500, n = 500, rank = 10;
  double beta = 1e-16, zeta = 0.99;
  Index b = 50, p = 10;
  double tau = 0.0;
  bool relative = false;
  int trials = 50;
  std::uint64_t seed = 0;
  Index max_rank = 0;
  std::string out;
  int threads = 1;
  std::vector<Index> grid;
  int runs = 5;
};

void add_common(CLI::App* c, Flags& f) {
  c->add_option("--matrix", f.matrix,
                "fastdecay | kahan | chan | gaussian | lowrank, or a path to a matrix file")
      ->capture_default_str();
  c->add_option("--format", f.format, "file format: mtx | idx | raw | csv (default: from extension)");
  c->add_option("--m", f.m, "rows of a generated matrix")->capture_default_str();
  c->add_option("--n", f.n, "columns of a generated matrix")->capture_default_str();
  c->add_option("--beta", f.beta, "fast decay floor")->capture_default_str();
  c->add_option("--zeta", f.zeta, "Kahan parameter")->capture_default_str();
  c->add_option("--rank", f.rank, "rank of a lowrank matrix")->capture_default_str();
  c->add_option("--seed", f.seed, "base seed")->capture_default_str();
  c->add_option("--out", f.out, "output path (prefix for factor)");
}

void add_sketch(CLI::App* c, Flags& f) {
  c->add_option("--sketch", f.sketch, "gaussian | srtt | sparsesign")
      ->check(CLI::IsMember({"gaussian", "srtt", "sparsesign"}));
  c->add_option("--nnz", f.nnz, "nonzeros per row of a sparse sign sketch")->capture_default_str();
  c->add_option("--b", f.b, "block size")->capture_default_str();
  c->add_option("--p", f.p, "residual oversampling")->capture_default_str();
  c->add_option("--tau", f.tau, "tolerance (0: run to the rank cap)")->capture_default_str();
  c->add_flag("--relative", f.relative, "tau is relative to ||A||_F");
  c->add_option("--max-rank", f.max_rank, "rank cap (default min(m, n) - b)");
  c->add_option("--threads", f.threads, "worker threads for independent trials")->capture_default_str();
}

ExperimentConfig to_config(const Flags& f) {
  ExperimentConfig c;
  MatrixRecipe& r = c.recipe;
  const std::string mk = f.matrix;
  bool is_kind = true;
  try {
    r.kind = parse_recipe_kind(mk);
  } catch (const ContractViolation&) {
    is_kind = false;
  }
  if (!is_kind || r.kind == MatrixRecipe::Kind::FromFile) {
    r.kind = MatrixRecipe::Kind::FromFile;
    r.path = mk;
  }
  if (!f.format.empty()) r.format = parse_matrix_format(f.format);
  r.m = f.m;
  r.n = f.n;
  r.beta = f.beta;
  r.zeta = f.zeta;
  r.rank = f.rank;
  if (!f.sketch.empty()) c.sketch = parse_sketch_kind(f.sketch);
  c.zeta = f.nnz;
  c.b = f.b;
  c.p = f.p;
  c.tau = f.tau;
  c.relative = f.relative;
  c.trials = f.trials;
  c.seed = f.seed;
  if (f.max_rank > 0) c.max_rank = f.max_rank;
  c.out = f.out;
  c.threads = f.threads;
  c.grid = f.grid;
  c.runs = f.runs;
  c.validate();
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_text(path, text);
}

int cmd_accuracy(const Flags& f) {
  const ExperimentConfig c = to_config(f);
  const LoadedMatrix m = load_matrix(c);
  const AccuracyReport r = run_accuracy(c, m);
  if (c.out.empty()) {
    std::cout << accuracy_means_csv(c, m, r);
  } else {
    write_text(c.out, accuracy_csv(c, m, r));
    write_text(means_path(c.out), accuracy_means_csv(c, m, r));
  }
  return kOk;
}

int cmd_growth(const Flags& f) {
  const ExperimentConfig c = to_config(f);
  const LoadedMatrix m = load_matrix(c);
  emit(c.out, growth_csv(c, m, run_growth(c, m)));
  return kOk;
}

int cmd_bench(const Flags& f) {
  const ExperimentConfig c = to_config(f);
  const LoadedMatrix m = load_matrix(c);
  emit(c.out, bench_csv(c, m, run_bench(c, m)));
  return kOk;
}

int cmd_factor(const Flags& f) {
  const ExperimentConfig c = to_config(f);
  const LoadedMatrix m = load_matrix(c, false);
  const FactorOutcome o = run_factor(c, m.a);
  std::fprintf(stderr, "rank %td, status %s, tau %.3g\n", o.result.rank, to_string(o.result.status).c_str(),
               o.tau_abs);
  if (c.out.empty())
    for (Index i : *o.result.rows) std::cout << i << '\n';
  return o.exit_code;
}

int cmd_gen(const Flags& f) {
  const ExperimentConfig c = to_config(f);
  if (c.out.empty()) throw ContractViolation("gen: --out is required");
  const LoadedMatrix m = load_matrix(c, false);
  MatrixFormat fmt = MatrixFormat::Csv;
  if (!f.format.empty())
    fmt = parse_matrix_format(f.format);
  else if (auto e = format_from_extension(c.out))
    fmt = *e;
  write_matrix(c.out, m.a, fmt);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized LUPP skeletonization: experiments, benchmarks and factorizations"};
  app.set_config("--config", "", "flat key=value configuration file");
  app.require_subcommand(1);
  Flags f;

  CLI::App* acc = app.add_subcommand("accuracy", "ID errors and estimates per adaptive iteration");
  add_common(acc, f);
  add_sketch(acc, f);
  acc->add_option("--trials", f.trials, "independent runs")->capture_default_str();

  CLI::App* gro = app.add_subcommand("growth", "SVD tail against the residual triangle U_r");
  add_common(gro, f);
  add_sketch(gro, f);
  gro->add_option("--trials", f.trials, "independent runs per rank")->capture_default_str();
  gro->add_option("--grid", f.grid, "ranks to evaluate (default 10 points up to min(m, n) / 2)")->delimiter(',');

  CLI::App* ben = app.add_subcommand("bench", "median wall time of the selectors");
  add_common(ben, f);
  add_sketch(ben, f);
  ben->add_option("--runs", f.runs, "timed runs after one warm-up (>= 5)")->capture_default_str();

  CLI::App* fac = app.add_subcommand("factor", "adaptive row ID of a matrix");
  add_common(fac, f);
  add_sketch(fac, f);

  CLI::App* gen = app.add_subcommand("gen", "write a generated matrix to a file");
  add_common(gen, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (acc->parsed()) return cmd_accuracy(f);
    if (gro->parsed()) return cmd_growth(f);
    if (ben->parsed()) return cmd_bench(f);
    if (fac->parsed()) return cmd_factor(f);
    if (gen->parsed()) return cmd_gen(f);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rskel: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
