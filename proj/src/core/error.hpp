#pragma once

#include <stdexcept>
#include <string>

namespace polyjump {

enum class ErrorCode {
  ok = 0,
  invalid_argument,
  no_convergence,
  interface_touches_boundary,
  probe_crosses_interface,
  probe_leaves_domain,
  quadrature_underresolved,
  tube_too_narrow,
  tube_degenerate,
  support_violation,
  max_iter_exceeded,
  order_unsupported,
  degenerate_fit,
  quadrature_tol_not_met,
  singular_system,
  sign_pattern_violated,
  config_error,
  io_error,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polyjump
