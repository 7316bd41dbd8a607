#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration text. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A value outside its admissible range. `field()` names the offending key.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf found in field data.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// Physical state outside the model's domain (cavitation).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to reach its tolerance.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residual_history() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mgn
