#include "anholo/error.hpp"

namespace anholo {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::UnknownIdentifier: return "unknown identifier";
    case ErrorKind::Arity: return "arity mismatch";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::Signature: return "signature violation";
    case ErrorKind::Convergence: return "convergence failure";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "io error";
  }
  return "error";
}

}  // namespace anholo
