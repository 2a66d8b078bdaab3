#pragma once

#include <stdexcept>
#include <string>

namespace etmatch {

/// Failure categories; each maps to one stable CLI exit code.
enum class ErrorKind {
  parse,          // malformed input file
  validation,     // well-formed but violates a data-model invariant
  training_data,  // degenerate training set (e.g. a single class)
  model_mismatch, // model file incompatible with the feature pipeline
  eval_input,     // unusable evaluation input (e.g. empty reference)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[nodiscard]] inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::validation:
      return 2;
    case ErrorKind::training_data:
      return 3;
    case ErrorKind::model_mismatch:
      return 4;
    case ErrorKind::eval_input:
      return 5;
  }
  return 1;
}

}  // namespace etmatch
