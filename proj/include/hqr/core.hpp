#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hqr {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  InvalidParameter,
  Accuracy,
  Singularity,
  Pole,
  NonQuasiregular,
  InfiniteConstant,
  HypothesisViolation,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::InvalidParameter, what);
}

}  // namespace hqr
