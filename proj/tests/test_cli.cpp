#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "harness.hpp"

using namespace rskel;
using namespace rskel::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rskel_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

int run(const std::string& args) {
  const std::string cmd = std::string(RSKEL_CLI_PATH) + " " + args + " >" +
                          scratch("stdout.txt").string() + " 2>" + scratch("stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ExperimentConfig small_fast_decay() {
  ExperimentConfig c;
  c.recipe.m = 120;
  c.recipe.n = 120;
  c.recipe.beta = 1e-12;
  c.sketch = SketchKind::Gaussian;
  c.b = 10;
  c.p = 5;
  c.trials = 3;
  c.seed = 11;
  c.max_rank = 60;
  return c;
}

}  // namespace

TEST(Harness, AccuracyRowsAreConsistent) {
  const ExperimentConfig c = small_fast_decay();
  const LoadedMatrix m = load_matrix(c);
  const AccuracyReport r = run_accuracy(c, m);
  ASSERT_FALSE(r.rows.empty());
  EXPECT_EQ(r.status.size(), 3u);
  for (const AccuracyRow& row : r.rows) {
    EXPECT_EQ(row.k, 10 * row.t);
    EXPECT_LE(row.svd_tail, row.sid_lupp * (1 + 1e-10) + 1e-12);
    EXPECT_LE(row.svd_tail, row.sid_cpqr * (1 + 1e-10) + 1e-12);
    EXPECT_LE(row.sid_lupp, row.id_lupp * (1 + 1e-10) + 1e-12);
    EXPECT_TRUE(row.est_norm_ur.has_value());
  }
}

TEST(Harness, AccuracyCsvIsDeterministic) {
  ExperimentConfig c = small_fast_decay();
  const LoadedMatrix m = load_matrix(c);
  const std::string a = accuracy_csv(c, m, run_accuracy(c, m));
  c.threads = 2;
  const std::string b = accuracy_csv(c, m, run_accuracy(c, m));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("# rskel accuracy v1\n", 0), 0u);
}

TEST(Harness, GrowthEndpointsArePositive) {
  ExperimentConfig c = small_fast_decay();
  c.sketch.reset();
  c.trials = 4;
  c.grid = {10, 30, 50};
  const LoadedMatrix m = load_matrix(c);
  const std::vector<GrowthRow> rows = run_growth(c, m);
  EXPECT_EQ(rows.size(), 9u);
  for (const GrowthRow& g : rows) {
    EXPECT_GT(g.svd_tail, 0.0);
    EXPECT_GT(g.mean_norm_ur, 0.0);
    EXPECT_TRUE(std::isfinite(g.ratio_norm));
    EXPECT_GT(g.reference, 0.0);
    EXPECT_LE(g.mean_max_ur, g.mean_norm_ur);
  }
}

TEST(Harness, GrowthGridDefault) {
  ExperimentConfig c;
  const std::vector<Index> g = growth_grid(c, 500, 500);
  ASSERT_EQ(g.size(), 10u);
  EXPECT_EQ(g.back(), 250);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
}

TEST(Harness, BenchRowsPositive) {
  ExperimentConfig c = small_fast_decay();
  c.tau = 1e-6;
  c.relative = true;
  c.max_rank.reset();
  const LoadedMatrix m = load_matrix(c);
  const std::vector<BenchRow> rows = run_bench(c, m);
  EXPECT_EQ(rows.size(), 5u);
  for (const BenchRow& r : rows) {
    EXPECT_GT(r.seconds, 0.0) << r.method;
    EXPECT_EQ(r.runs, 5);
  }
}

TEST(Harness, ConfigValidation) {
  ExperimentConfig c;
  c.p = c.b;
  EXPECT_THROW(c.validate(), ContractViolation);
  c = ExperimentConfig{};
  c.runs = 2;
  EXPECT_THROW(c.validate(), ContractViolation);
  EXPECT_EQ(means_path("out/acc.csv"), "out/acc_means.csv");
  EXPECT_EQ(means_path("out.d/acc"), "out.d/acc_means");
}

TEST(Cli, FactorExactRankSucceeds) {
  const std::string out = scratch("lr").string();
  EXPECT_EQ(run("factor --matrix lowrank --m 200 --n 150 --rank 40 --b 20 --tau 1e-8 --relative --seed 3 --out " +
                out),
            0);
  EXPECT_EQ(lines(out + "_skeleton.txt").size(), 40u);
  EXPECT_EQ(fs::file_size(out + "_W.f64"), 200u * 40u * 8u);
  EXPECT_EQ(lines(out + "_trace.csv").front(), "k,eSchur,estNormUr,estMaxUr");
}

TEST(Cli, FactorUnreachableToleranceIsNotConverged) {
  const std::string out = scratch("fd").string();
  EXPECT_EQ(run("factor --matrix fastdecay --m 200 --n 200 --beta 1e-3 --b 20 --max-rank 60 --tau 1e-12 "
                "--relative --out " +
                out),
            2);
  EXPECT_EQ(lines(out + "_trace.csv").size(), 4u);
  EXPECT_EQ(lines(out + "_skeleton.txt").size(), 60u);
}

TEST(Cli, FactorRankExhausted) {
  // 25 nonzero rows: the second block runs out of pivots.
  const fs::path in = scratch("thin.csv");
  {
    std::ofstream f(in);
    RngStream r(5);
    for (int i = 0; i < 60; ++i) {
      for (int j = 0; j < 80; ++j) f << (j ? "," : "") << (i < 25 ? r.normal() : 0.0);
      f << '\n';
    }
  }
  EXPECT_EQ(run("factor --matrix " + in.string() + " --b 20 --tau 1e-300"), 3);
  EXPECT_EQ(lines(scratch("stdout.txt")).size(), 25u);
}

TEST(Cli, UsageAndIoErrorsExitOne) {
  EXPECT_EQ(run("factor --bogus"), 1);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("factor --matrix /nonexistent/a.mtx --tau 1"), 1);
  EXPECT_EQ(run("accuracy --sketch hadamard"), 1);
  EXPECT_EQ(run("accuracy --b 10 --p 10"), 1);
  EXPECT_EQ(run("factor --matrix lowrank --m 50 --n 40"), 1);  // tau required
  EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, GenRoundTripsThroughFormats) {
  for (const char* ext : {".csv", ".mtx", ".f64"}) {
    const std::string path = scratch(std::string("kahan") + ext).string();
    ASSERT_EQ(run("gen --matrix kahan --m 30 --n 30 --zeta 0.9 --out " + path), 0) << ext;
    ExperimentConfig c;
    c.recipe.kind = MatrixRecipe::Kind::FromFile;
    c.recipe.path = path;
    c.recipe.m = 30;
    c.recipe.n = 30;
    EXPECT_EQ(load_matrix(c, false).a, gen_kahan(30, 0.9)) << ext;
  }
}

TEST(Cli, AccuracyAndGrowthWriteCsv) {
  const std::string acc = scratch("acc.csv").string();
  ASSERT_EQ(run("accuracy --matrix fastdecay --m 100 --n 100 --b 10 --p 5 --trials 2 --max-rank 40 --out " + acc),
            0);
  const std::vector<std::string> a = lines(acc);
  ASSERT_GE(a.size(), 3u);
  EXPECT_EQ(a[0], "# rskel accuracy v1");
  EXPECT_TRUE(fs::exists(means_path(acc)));
  const std::string gro = scratch("growth.csv").string();
  ASSERT_EQ(run("growth --matrix fastdecay --m 100 --n 100 --b 10 --p 5 --trials 2 --grid 10,20 --out " + gro), 0);
  EXPECT_EQ(lines(gro)[0], "# rskel growth v1");
}
