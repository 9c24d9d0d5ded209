#include "hypercqed/error.hpp"

namespace hypercqed {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::invalid_spec: return "invalid_spec";
    case ErrorKind::resource: return "resource";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::contract: return "contract";
    case ErrorKind::bracketing: return "bracketing";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace hypercqed
