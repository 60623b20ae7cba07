#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rskel {

using Index = std::ptrdiff_t;

/// Violated precondition (dimension mismatch, out-of-range parameter).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// LUPP met a pivot column whose candidates are all exactly zero.
class RankDeficient : public std::runtime_error {
 public:
  RankDeficient(Index step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  Index step() const noexcept { return step_; }

 private:
  Index step_;
};

/// Triangular system with a zero on the diagonal.
class Singular : public std::runtime_error {
 public:
  Singular(Index index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  Index index() const noexcept { return index_; }

 private:
  Index index_;
};

/// Iterative kernel ran out of its iteration budget.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. offset is the byte position where parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// File could not be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RSKEL_REQUIRE(cond, msg)                       \
  do {                                                 \
    if (!(cond)) throw ::rskel::ContractViolation(msg); \
  } while (0)

}  // namespace rskel
