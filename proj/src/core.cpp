#include "hqr/core.hpp"

namespace hqr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::Accuracy: return "accuracy";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::NonQuasiregular: return "non-quasiregular";
    case ErrorKind::InfiniteConstant: return "infinite-constant";
    case ErrorKind::HypothesisViolation: return "hypothesis-violation";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace hqr
