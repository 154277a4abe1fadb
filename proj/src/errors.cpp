#include "noncoh/errors.hpp"

namespace noncoh {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::spec: return "spec";
    case ErrorKind::domain: return "domain";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::numeric: return "numeric";
  }
  return "unknown";
}

}  // namespace noncoh
