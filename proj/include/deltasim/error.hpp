#pragma once

#include <stdexcept>
#include <string>

namespace deltasim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates a documented precondition (negative rate, bad grid, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The Liouvillian kernel is not one-dimensional, so no unique steady state exists.
class DegenerateSteadyState : public Error {
 public:
  using Error::Error;
};

/// Time integration produced non-finite values.
class Instability : public Error {
 public:
  using Error::Error;
};

/// A closed-form expression hit a vanishing denominator.
class SingularParameter : public Error {
 public:
  using Error::Error;
};

/// Bisection bracket does not contain a sign change.
class NoRootInRange : public Error {
 public:
  enum class Kind { Threshold, Reference };

  NoRootInRange(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace deltasim
