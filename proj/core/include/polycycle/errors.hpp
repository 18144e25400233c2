#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polycycle {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterate Δ^k(x) left the interval (0, δ).
class EscapedDomain : public Error {
 public:
  EscapedDomain(std::int64_t step, const std::string& what)
      : Error(what), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

class NonContracting : public Error {
 public:
  using Error::Error;
};

class InversionFailure : public Error {
 public:
  using Error::Error;
};

class NoBracket : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class DegenerateClass : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed JSON, or a field that is missing or mistyped.
class ConfigParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace polycycle
