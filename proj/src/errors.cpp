#include "mipt/errors.hpp"

namespace mipt {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Contract: return "contract";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::InfeasibleJump: return "infeasible_jump";
    case ErrorKind::InsufficientData: return "insufficient_data";
    case ErrorKind::Refusal: return "refusal";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace mipt
