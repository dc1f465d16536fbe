#pragma once

#include <stdexcept>
#include <string>

namespace anholo {

enum class ErrorKind {
  Syntax,
  UnknownIdentifier,
  Arity,
  Domain,
  Overflow,
  Precondition,
  Signature,
  Convergence,
  Config,
  Io,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace anholo
