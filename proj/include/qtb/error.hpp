#pragma once

#include <stdexcept>
#include <string>

namespace qtb {

enum class Err {
  MixedBackend,
  RootUnavailable,
  DimensionMismatch,
  NotSublattice,
  ZeroCoefficient,
  UnsupportedScalar,
  NotCentral,
  NotInCenter,
  ZeroValue,
  ZeroBinomial,
  WholeRingIdeal,
  BoundExceeded,
  NotCocycle,
  DimensionTooLarge,
  Incompatible,
  Overflow,
};

const char *err_name(Err e);

// Every mathematical failure surfaces as MathError; the CLI maps it to exit 2.
class MathError : public std::runtime_error {
public:
  MathError(Err kind, const std::string &what)
    : std::runtime_error(std::string(err_name(kind)) + ": " + what), kind_(kind) {}
  Err kind() const { return kind_; }

private:
  Err kind_;
};

// Malformed input text. `column` is 1-based within the parsed string.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &what, std::size_t column = 0)
    : std::runtime_error(what), column_(column) {}
  std::size_t column() const { return column_; }

private:
  std::size_t column_;
};

} // namespace qtb
