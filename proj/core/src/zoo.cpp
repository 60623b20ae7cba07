#include "rskel/zoo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>

#include "rskel/blas.hpp"
#include "rskel/io.hpp"
#include "rskel/qr.hpp"

namespace rskel {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Haar-distributed m x n matrix with orthonormal columns.
Matrix haar(Index m, Index n, RngStream& rng) {
  QRFactors f = qr_unpivoted(gen_gaussian(m, n, rng));
  for (Index j = 0; j < n; ++j) {
    if (f.R(j, j) < 0.0)
      for (double& v : f.Q.col(j)) v = -v;
  }
  return std::move(f.Q);
}

}  // namespace

std::string to_string(MatrixFormat f) {
  switch (f) {
    case MatrixFormat::MatrixMarket: return "mtx";
    case MatrixFormat::Idx: return "idx";
    case MatrixFormat::RawF64: return "raw";
    case MatrixFormat::Csv: return "csv";
  }
  return "unknown";
}

MatrixFormat parse_matrix_format(const std::string& name) {
  const std::string s = lower(name);
  if (s == "mtx" || s == "mm" || s == "matrix-market" || s == "matrixmarket") return MatrixFormat::MatrixMarket;
  if (s == "idx") return MatrixFormat::Idx;
  if (s == "raw" || s == "f64" || s == "bin") return MatrixFormat::RawF64;
  if (s == "csv") return MatrixFormat::Csv;
  throw ContractViolation("unknown matrix format '" + name + "'");
}

std::optional<MatrixFormat> format_from_extension(const std::string& path) {
  const std::string ext = lower(std::filesystem::path(path).extension().string());
  if (ext == ".mtx") return MatrixFormat::MatrixMarket;
  if (ext == ".idx" || ext == ".idx3-ubyte" || ext == ".ubyte") return MatrixFormat::Idx;
  if (ext == ".raw" || ext == ".f64" || ext == ".bin") return MatrixFormat::RawF64;
  if (ext == ".csv") return MatrixFormat::Csv;
  return std::nullopt;
}

void MatrixRecipe::validate() const {
  using K = Kind;
  if (kind == K::FromFile) {
    RSKEL_REQUIRE(!path.empty(), "matrix recipe: file path is empty");
    return;
  }
  RSKEL_REQUIRE(m >= 1 && n >= 1, "matrix recipe: dimensions must be positive");
  switch (kind) {
    case K::FastDecay:
      RSKEL_REQUIRE(m >= n, "fast decay: requires m >= n");
      RSKEL_REQUIRE(beta > 0.0 && beta <= 1.0, "fast decay: beta must lie in (0, 1]");
      break;
    case K::Kahan:
      RSKEL_REQUIRE(m == n, "kahan: matrix must be square");
      RSKEL_REQUIRE(zeta > 0.0 && zeta < 1.0, "kahan: zeta must lie in (0, 1)");
      break;
    case K::Chan:
      RSKEL_REQUIRE(m == n, "chan: matrix must be square");
      break;
    case K::LowRank:
      RSKEL_REQUIRE(rank >= 1 && rank <= std::min(m, n), "low rank: rank must lie in [1, min(m, n)]");
      break;
    default:
      break;
  }
}

std::string to_string(MatrixRecipe::Kind k) {
  using K = MatrixRecipe::Kind;
  switch (k) {
    case K::FastDecay: return "fastdecay";
    case K::Kahan: return "kahan";
    case K::Chan: return "chan";
    case K::FromFile: return "file";
    case K::Gaussian: return "gaussian";
    case K::LowRank: return "lowrank";
  }
  return "unknown";
}

MatrixRecipe::Kind parse_recipe_kind(const std::string& name) {
  using K = MatrixRecipe::Kind;
  const std::string s = lower(name);
  if (s == "fastdecay" || s == "fast-decay") return K::FastDecay;
  if (s == "kahan") return K::Kahan;
  if (s == "chan") return K::Chan;
  if (s == "file") return K::FromFile;
  if (s == "gaussian") return K::Gaussian;
  if (s == "lowrank" || s == "low-rank") return K::LowRank;
  throw ContractViolation("unknown matrix kind '" + name + "'");
}

FastDecay gen_fast_decay(Index m, Index n, double beta, RngStream& rng) {
  RSKEL_REQUIRE(n >= 1 && m >= n, "gen_fast_decay: requires m >= n >= 1");
  RSKEL_REQUIRE(beta > 0.0 && beta <= 1.0, "gen_fast_decay: beta must lie in (0, 1]");
  std::vector<double> d(static_cast<std::size_t>(n));
  d[0] = 1.0;
  for (Index i = 1; i < n; ++i)
    d[i] = i == n - 1 ? beta : std::pow(beta, static_cast<double>(i) / static_cast<double>(n - 1));

  Matrix u = haar(m, n, rng);
  const Matrix v = haar(n, n, rng);
  for (Index j = 0; j < n; ++j)
    for (double& x : u.col(j)) x *= d[j];
  return {gemm(u, v, Op::NoTrans, Op::Trans), std::move(d)};
}

Matrix gen_kahan(Index n, double zeta) {
  RSKEL_REQUIRE(n >= 1, "gen_kahan: n must be positive");
  RSKEL_REQUIRE(zeta > 0.0 && zeta < 1.0, "gen_kahan: zeta must lie in (0, 1)");
  const double phi = std::sqrt(1.0 - zeta * zeta);
  Matrix a(n, n);
  double zi = 1.0;
  for (Index i = 0; i < n; ++i, zi *= zeta) {
    a(i, i) = zi;
    for (Index j = i + 1; j < n; ++j) a(i, j) = -zi * phi;
  }
  return a;
}

Matrix gen_chan(Index n) {
  RSKEL_REQUIRE(n >= 1, "gen_chan: n must be positive");
  Matrix a(n, n);
  for (Index j = 0; j < n; ++j) {
    a(j, j) = 1.0;
    for (Index i = j + 1; i < n; ++i) a(i, j) = -1.0;
  }
  for (Index i = 0; i < n; ++i) a(i, n - 1) = 1.0;
  return a;
}

Matrix gen_gaussian(Index m, Index n, RngStream& rng) {
  Matrix a(m, n);
  for (double& v : a.values()) v = rng.normal();
  return a;
}

Matrix gen_low_rank(Index m, Index n, Index r, RngStream& rng) {
  RSKEL_REQUIRE(r >= 1 && r <= std::min(m, n), "gen_low_rank: rank must lie in [1, min(m, n)]");
  const Matrix x = gen_gaussian(m, r, rng);
  const Matrix y = gen_gaussian(r, n, rng);
  return gemm(x, y);
}

Matrix make_matrix(const MatrixRecipe& recipe, RngStream& rng) {
  recipe.validate();
  using K = MatrixRecipe::Kind;
  switch (recipe.kind) {
    case K::FastDecay: return gen_fast_decay(recipe.m, recipe.n, recipe.beta, rng).a;
    case K::Kahan: return gen_kahan(recipe.n, recipe.zeta);
    case K::Chan: return gen_chan(recipe.n);
    case K::Gaussian: return gen_gaussian(recipe.m, recipe.n, rng);
    case K::LowRank: return gen_low_rank(recipe.m, recipe.n, recipe.rank, rng);
    case K::FromFile: {
      const auto fmt = recipe.format ? recipe.format : format_from_extension(recipe.path);
      if (!fmt) throw ContractViolation("cannot infer the format of '" + recipe.path + "'; pass --format");
      RSKEL_REQUIRE(*fmt != MatrixFormat::RawF64 || (recipe.m >= 1 && recipe.n >= 1),
                    "raw f64 input needs explicit dimensions");
      return read_matrix(recipe.path, *fmt, recipe.m, recipe.n);
    }
  }
  throw ContractViolation("make_matrix: unknown kind");
}

}  // namespace rskel
