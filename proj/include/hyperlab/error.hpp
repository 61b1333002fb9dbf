#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperlab {

enum class ErrorKind {
  shape,
  domain,
  validation,
  determinism,
  configuration,
  numeric,
  stability,
  resource,
  kernel_divergence,
  already_halted,
  session_closed,
  io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::shape: return "shape_error";
    case ErrorKind::domain: return "domain_error";
    case ErrorKind::validation: return "validation_error";
    case ErrorKind::determinism: return "determinism_error";
    case ErrorKind::configuration: return "configuration_error";
    case ErrorKind::numeric: return "numeric_error";
    case ErrorKind::stability: return "stability_error";
    case ErrorKind::resource: return "resource_error";
    case ErrorKind::kernel_divergence: return "kernel_divergence";
    case ErrorKind::already_halted: return "already_halted";
    case ErrorKind::session_closed: return "session_closed";
    case ErrorKind::io: return "io_error";
  }
  return "error";
}

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can turn it into a structured error record.
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

}  // namespace hyperlab
