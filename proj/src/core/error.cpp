#include "error.hpp"

namespace polyjump {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ok: return "Ok";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::interface_touches_boundary: return "InterfaceTouchesBoundary";
    case ErrorCode::probe_crosses_interface: return "ProbeCrossesInterface";
    case ErrorCode::probe_leaves_domain: return "ProbeLeavesDomain";
    case ErrorCode::quadrature_underresolved: return "QuadratureUnderresolved";
    case ErrorCode::tube_too_narrow: return "TubeTooNarrow";
    case ErrorCode::tube_degenerate: return "TubeDegenerate";
    case ErrorCode::support_violation: return "SupportViolation";
    case ErrorCode::max_iter_exceeded: return "MaxIterExceeded";
    case ErrorCode::order_unsupported: return "OrderUnsupported";
    case ErrorCode::degenerate_fit: return "DegenerateFit";
    case ErrorCode::quadrature_tol_not_met: return "QuadratureTolNotMet";
    case ErrorCode::singular_system: return "SingularSystem";
    case ErrorCode::sign_pattern_violated: return "SignPatternViolated";
    case ErrorCode::config_error: return "ConfigError";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace polyjump
