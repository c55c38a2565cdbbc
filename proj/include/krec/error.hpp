#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "krec/types.hpp"

namespace krec {

/// Base class of every failure signalled by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Spectrum of a projected matrix hits the forbidden set of the function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Eigenvector matrix (or another inverted factor) is too ill-conditioned.
class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// A (sketched) basis is numerically rank deficient; the stabilized
/// variants are expected to be used instead.
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, Index pivot)
      : Error(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}
  Index pivot() const noexcept { return pivot_; }

 private:
  Index pivot_;
};

/// Raised when the eigenvector block selected for a partial Schur form does
/// not have full rank (defective or nearly defective cluster).
class DefectiveError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// First line is not a supported Matrix Market banner.
class BannerError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Size line or entry line cannot be parsed.
class MalformedLineError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Entry index outside the declared dimensions.
class IndexOutOfBoundsError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace krec
