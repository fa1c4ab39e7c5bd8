#pragma once

#include <stdexcept>
#include <string>

namespace pulimp {

/// Failure category. Each maps onto a distinct CLI exit code.
enum class ErrorKind {
  parse,       // malformed input document
  validation,  // well-formed input that violates a model invariant
  solver,      // numerical failure (pole, singular system, mesh guard)
  io,          // file system
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::solver: return "solver";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace pulimp
