#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace printopt {

// Schema or invariant violation. `field` is the offending path when known,
// e.g. "products[1].c_m".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, std::string message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)),
        message_(std::move(message)) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

// A root finder could not establish a sign bracket.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed-form routine invoked on a demand model it does not cover.
class UnsupportedModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request would enumerate an infeasibly large search space.
class ComplexityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure while reading or writing files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace printopt
