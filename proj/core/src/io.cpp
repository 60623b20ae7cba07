#include "rskel/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace rskel {
namespace {

std::vector<unsigned char> slurp_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buf;
}

std::string slurp_text(const std::string& path) {
  const std::vector<unsigned char> b = slurp_bytes(path);
  return {b.begin(), b.end()};
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

// Line cursor that remembers the byte offset of every token it hands out.
class Lines {
 public:
  explicit Lines(const std::string& text) : text_(text) {}

  bool next(std::string_view& line, std::size_t& offset) {
    if (pos_ >= text_.size()) return false;
    offset = pos_;
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string::npos) end = text_.size();
    line = std::string_view(text_).substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    return true;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

struct Token {
  std::string_view text;
  std::size_t offset;
};

std::vector<Token> split(std::string_view line, std::size_t base, bool commas = false) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto sep = [&](char c) { return std::isspace(static_cast<unsigned char>(c)) || (commas && c == ','); };
  while (i < line.size()) {
    while (i < line.size() && sep(line[i])) ++i;
    const std::size_t s = i;
    while (i < line.size() && !sep(line[i])) ++i;
    if (i > s) out.push_back({line.substr(s, i - s), base + s});
  }
  return out;
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

double to_double(const Token& t, const char* what) {
  double v = 0.0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  if (*b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e)
    throw ParseError(t.offset, std::string(what) + ": '" + std::string(t.text) + "' is not a number");
  return v;
}

Index to_index(const Token& t, const char* what) {
  long long v = 0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size())
    throw ParseError(t.offset, std::string(what) + ": '" + std::string(t.text) + "' is not an integer");
  return static_cast<Index>(v);
}

std::string lower(std::string_view s) {
  std::string r(s);
  std::transform(r.begin(), r.end(), r.begin(), [](unsigned char c) { return std::tolower(c); });
  return r;
}

}  // namespace

Matrix parse_matrix_market(const std::string& text) {
  Lines lines(text);
  std::string_view line;
  std::size_t off = 0;
  if (!lines.next(line, off)) throw ParseError(0, "matrix market: empty file, missing banner");
  const auto banner = split(line, off);
  if (banner.size() != 5 || lower(banner[0].text) != "%%matrixmarket")
    throw ParseError(off, "matrix market: malformed banner line");
  if (lower(banner[1].text) != "matrix")
    throw ParseError(banner[1].offset, "matrix market: object must be 'matrix'");
  const std::string layout = lower(banner[2].text);
  const std::string field = lower(banner[3].text);
  const std::string sym = lower(banner[4].text);
  if (layout != "coordinate" && layout != "array")
    throw ParseError(banner[2].offset, "matrix market: format must be 'coordinate' or 'array'");
  if (field != "real" && field != "integer" && field != "double" && !(field == "pattern" && layout == "coordinate"))
    throw ParseError(banner[3].offset, "matrix market: unsupported field '" + field + "'");
  if (sym != "general" && sym != "symmetric" && sym != "skew-symmetric")
    throw ParseError(banner[4].offset, "matrix market: unsupported symmetry '" + sym + "'");
  const bool coord = layout == "coordinate";
  const bool pattern = field == "pattern";

  // Size line: first line that is neither a comment nor blank.
  std::vector<Token> size;
  for (;;) {
    if (!lines.next(line, off)) throw ParseError(text.size(), "matrix market: truncated before the size line");
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    size = split(line, off);
    break;
  }
  if (size.size() != (coord ? 3u : 2u)) throw ParseError(off, "matrix market: malformed size line");
  const Index m = to_index(size[0], "matrix market size line");
  const Index n = to_index(size[1], "matrix market size line");
  if (m < 1 || n < 1) throw ParseError(size[0].offset, "matrix market: dimensions must be positive");
  if (sym != "general" && m != n) throw ParseError(off, "matrix market: symmetric matrix must be square");

  Matrix a(m, n);
  if (coord) {
    const Index nnz = to_index(size[2], "matrix market size line");
    if (nnz < 0) throw ParseError(size[2].offset, "matrix market: negative entry count");
    Index seen = 0;
    while (seen < nnz && lines.next(line, off)) {
      if (line.empty() || line[0] == '%' || blank(line)) continue;
      const auto tok = split(line, off);
      if (tok.size() != (pattern ? 2u : 3u))
        throw ParseError(off, "matrix market: entry " + std::to_string(seen + 1) + " has " +
                                  std::to_string(tok.size()) + " fields");
      const Index i = to_index(tok[0], "matrix market entry row") - 1;
      const Index j = to_index(tok[1], "matrix market entry column") - 1;
      if (i < 0 || i >= m || j < 0 || j >= n)
        throw ParseError(tok[0].offset, "matrix market: entry " + std::to_string(seen + 1) + " out of bounds");
      const double v = pattern ? 1.0 : to_double(tok[2], "matrix market entry value");
      a(i, j) += v;
      if (i != j) {
        if (sym == "symmetric") a(j, i) += v;
        if (sym == "skew-symmetric") a(j, i) -= v;
      }
      ++seen;
    }
    if (seen < nnz)
      throw ParseError(text.size(), "matrix market: truncated data section, expected " + std::to_string(nnz) +
                                        " entries, found " + std::to_string(seen));
  } else {
    // Column-major values; symmetric variants list the lower triangle only.
    std::vector<std::pair<Index, Index>> order;
    for (Index j = 0; j < n; ++j)
      for (Index i = (sym == "general" ? 0 : (sym == "symmetric" ? j : j + 1)); i < m; ++i) order.push_back({i, j});
    std::size_t seen = 0;
    while (seen < order.size() && lines.next(line, off)) {
      if (line.empty() || line[0] == '%' || blank(line)) continue;
      for (const Token& t : split(line, off)) {
        if (seen == order.size()) throw ParseError(t.offset, "matrix market: more values than the size line declares");
        const auto [i, j] = order[seen++];
        const double v = to_double(t, "matrix market array value");
        a(i, j) = v;
        if (sym != "general" && i != j) a(j, i) = sym == "skew-symmetric" ? -v : v;
      }
    }
    if (seen < order.size())
      throw ParseError(text.size(), "matrix market: truncated data section, expected " +
                                        std::to_string(order.size()) + " values, found " + std::to_string(seen));
  }
  return a;
}

Matrix read_matrix_market(const std::string& path) { return parse_matrix_market(slurp_text(path)); }

Matrix parse_idx_images(std::span<const unsigned char> bytes) {
  auto be32 = [&](std::size_t at) {
    return (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) |
           (std::uint32_t{bytes[at + 2]} << 8) | std::uint32_t{bytes[at + 3]};
  };
  if (bytes.size() < 4) throw ParseError(bytes.size(), "idx: truncated magic number");
  const std::uint32_t magic = be32(0);
  if (magic != 0x00000803u) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "idx: magic 0x%08x, expected 0x00000803 (ubyte, 3 dims)", magic);
    throw ParseError(0, buf);
  }
  if (bytes.size() < 16) throw ParseError(bytes.size(), "idx: truncated dimension header");
  const std::uint64_t count = be32(4), r = be32(8), c = be32(12);
  const std::uint64_t need = count * r * c;
  if (bytes.size() - 16 < need)
    throw ParseError(bytes.size(), "idx: truncated pixel data, expected " + std::to_string(need) + " bytes, found " +
                                       std::to_string(bytes.size() - 16));
  const auto rows = static_cast<Index>(count);
  const auto cols = static_cast<Index>(r * c);
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = bytes[16 + static_cast<std::size_t>(i * cols + j)] / 255.0;
  return a;
}

Matrix read_idx_images(const std::string& path) {
  const std::vector<unsigned char> b = slurp_bytes(path);
  return parse_idx_images(b);
}

Matrix read_raw_f64(const std::string& path, Index m, Index n) {
  RSKEL_REQUIRE(m >= 1 && n >= 1, "read_raw_f64: dimensions must be positive");
  const std::vector<unsigned char> b = slurp_bytes(path);
  const auto need = static_cast<std::size_t>(m * n) * sizeof(double);
  RSKEL_REQUIRE(b.size() == need, "read_raw_f64: '" + path + "' holds " + std::to_string(b.size()) +
                                      " bytes, " + std::to_string(m) + " x " + std::to_string(n) + " needs " +
                                      std::to_string(need));
  Matrix a(m, n);
  std::memcpy(a.data(), b.data(), need);
  if constexpr (std::endian::native == std::endian::big) {
    for (double& v : a.values()) {
      unsigned char* p = reinterpret_cast<unsigned char*>(&v);
      std::reverse(p, p + sizeof(double));
    }
  }
  return a;
}

void write_raw_f64(const std::string& path, const Matrix& a) {
  std::ofstream out = open_out(path, true);
  if constexpr (std::endian::native == std::endian::big) {
    for (double v : a.values()) {
      unsigned char* p = reinterpret_cast<unsigned char*>(&v);
      std::reverse(p, p + sizeof(double));
      out.write(reinterpret_cast<const char*>(p), sizeof(double));
    }
  } else {
    out.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(double)));
  }
  finish(out, path);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv_matrix(const std::string& path, const Matrix& a, bool header) {
  std::ofstream out = open_out(path);
  if (header) {
    for (Index j = 0; j < a.cols(); ++j) out << (j ? "," : "") << 'c' << j;
    out << '\n';
  }
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out << (j ? "," : "") << format_double(a(i, j));
    out << '\n';
  }
  finish(out, path);
}

Matrix parse_csv_matrix(const std::string& text) {
  Lines lines(text);
  std::string_view line;
  std::size_t off = 0;
  std::vector<double> vals;
  Index rows = 0, cols = -1;
  bool first = true;
  while (lines.next(line, off)) {
    if (line.empty() || line[0] == '#' || blank(line)) continue;
    const auto tok = split(line, off, true);
    if (first) {
      first = false;
      // A header row is any first row with a non-numeric cell.
      bool numeric = true;
      for (const Token& t : tok) {
        double v;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size()) numeric = false;
      }
      if (!numeric) continue;
    }
    if (cols < 0) cols = static_cast<Index>(tok.size());
    if (static_cast<Index>(tok.size()) != cols)
      throw ParseError(off, "csv: row " + std::to_string(rows + 1) + " has " + std::to_string(tok.size()) +
                                " cells, expected " + std::to_string(cols));
    for (const Token& t : tok) vals.push_back(to_double(t, "csv cell"));
    ++rows;
  }
  if (rows == 0 || cols <= 0) throw ParseError(text.size(), "csv: no data rows");
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = vals[static_cast<std::size_t>(i * cols + j)];
  return a;
}

Matrix read_csv_matrix(const std::string& path) { return parse_csv_matrix(slurp_text(path)); }

void write_csv_trace(const std::string& path, const ErrorTrace& trace) {
  std::ofstream out = open_out(path);
  out << "k,eSchur,estNormUr,estMaxUr\n";
  for (const ErrorRecord& r : trace) {
    out << r.rank << ',' << format_double(r.schur) << ',';
    if (r.est_norm_ur) out << format_double(*r.est_norm_ur);
    out << ',';
    if (r.est_max_ur) out << format_double(*r.est_max_ur);
    out << '\n';
  }
  finish(out, path);
}

Matrix read_matrix(const std::string& path, MatrixFormat format, Index m, Index n) {
  switch (format) {
    case MatrixFormat::MatrixMarket: return read_matrix_market(path);
    case MatrixFormat::Idx: return read_idx_images(path);
    case MatrixFormat::RawF64: return read_raw_f64(path, m, n);
    case MatrixFormat::Csv: return read_csv_matrix(path);
  }
  throw ContractViolation("read_matrix: unknown format");
}

void write_matrix(const std::string& path, const Matrix& a, MatrixFormat format) {
  switch (format) {
    case MatrixFormat::RawF64: write_raw_f64(path, a); return;
    case MatrixFormat::Csv: write_csv_matrix(path, a); return;
    case MatrixFormat::MatrixMarket: {
      std::ofstream out = open_out(path);
      out << "%%MatrixMarket matrix array real general\n" << a.rows() << ' ' << a.cols() << '\n';
      for (double v : a.values()) out << format_double(v) << '\n';
      finish(out, path);
      return;
    }
    case MatrixFormat::Idx: throw ContractViolation("write_matrix: IDX output is not supported");
  }
}

void write_indices(const std::string& path, std::span<const Index> idx) {
  std::ofstream out = open_out(path);
  for (Index i : idx) out << i << '\n';
  finish(out, path);
}

}  // namespace rskel
