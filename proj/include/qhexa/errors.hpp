#pragma once

#include <stdexcept>
#include <string>

namespace qhexa {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed atom, bad table entry, missing manifest entry.
struct ConstructionError : Error {
  using Error::Error;
};

/// A rewrite table produced something it should not (hbar not factoring out,
/// step bound exceeded). Signals a broken table, never user error.
struct ConsistencyError : Error {
  using Error::Error;
};

/// Geometric degeneracy: conformal horizon, point at infinity, zero radius.
struct DomainError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& msg, int line, int column)
      : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line(line), column(column) {}
  int line;
  int column;
};

/// Numerical oracle rejected an input (leaking packet, failed fit, rank deficiency).
struct OracleError : Error {
  using Error::Error;
};

} // namespace qhexa
