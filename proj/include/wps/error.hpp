#pragma once

#include <stdexcept>
#include <string>

namespace wps {

/// Base class for every error raised by the library. Subclasses tag the
/// failure category so callers (the CLI in particular) can map them to
/// exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPoint : public Error {
 public:
  using Error::Error;
};

class InvalidScalar : public Error {
 public:
  using Error::Error;
};

class WeightMismatch : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DegeneratePath : public Error {
 public:
  using Error::Error;
};

/// Raised by distance_matrix when the oracle throws on a pair.
class PairError : public Error {
 public:
  PairError(std::size_t i, std::size_t j, const std::string& what)
      : Error("pair (" + std::to_string(i) + ", " + std::to_string(j) + "): " + what), i_(i), j_(j) {}
  std::size_t i() const { return i_; }
  std::size_t j() const { return j_; }

 private:
  std::size_t i_;
  std::size_t j_;
};

class UndefinedInvariant : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace wps
