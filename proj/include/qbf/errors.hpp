#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbf {

// Result would exceed a configured size bound (polynomial degree, qubit count).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation undefined for the given input (inverse of zero, empty sets, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Evaluation hit a pole or an out-of-range parameter.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double p)
      : std::runtime_error(what + " (p=" + std::to_string(p) + ")"), p_(p) {}
  double p() const noexcept { return p_; }

 private:
  double p_;
};

// The selected measurement branch carries no probability mass.
class PostselectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs for which a basic operation has no defined output (h2 = 0 in divide mode, ...).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Almost-surely terminating loop ran past its attempt cap.
class AttemptCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (count tables, CSV files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An expression cannot be compiled into a circuit (e.g. it inverts zero).
class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression text; position is a 0-based character offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbolError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace qbf
