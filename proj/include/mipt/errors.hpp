#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mipt {

enum class ErrorKind {
  Parameter,      // invalid model or call parameters
  Domain,         // argument outside the mathematical domain
  Contract,       // violated precondition of an operation
  Numerical,      // corrupted state / failed numerical invariant
  Configuration,  // run configuration cannot be executed as given
  InfeasibleJump, // jump onto an outcome with vanishing probability
  InsufficientData,
  Refusal,        // request too large for an exhaustive routine
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace mipt
