#pragma once

#include <stdexcept>
#include <string>

namespace saw {

// Failure categories. The CLI maps Validation to exit code 2 and Threshold
// to exit code 3; everything else is a plain runtime failure.
enum class ErrorKind {
  Validation,
  Threshold,
  Io,
  Numerical,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace saw
