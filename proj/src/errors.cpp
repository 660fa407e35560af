#include "turanlab/errors.hpp"

namespace turanlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "DomainError";
    case ErrorKind::degree_guard: return "DegreeGuard";
    case ErrorKind::precondition: return "PreconditionViolation";
    case ErrorKind::non_convergence: return "NonConvergence";
    case ErrorKind::ill_conditioned: return "IllConditioned";
    case ErrorKind::degenerate_normalization: return "DegenerateNormalization";
    case ErrorKind::oracle_disagreement: return "OracleDisagreement";
    case ErrorKind::zero_restriction: return "ZeroRestrictionFailure";
    case ErrorKind::empty_sweep: return "EmptySweep";
    case ErrorKind::config: return "ConfigError";
    case ErrorKind::io: return "IoError";
  }
  return "Unknown";
}

void PrecisionContext::validate() const {
  if (mantissa_bits < 64) {
    throw Error(ErrorKind::precondition, "mantissa_bits must be at least 64");
  }
  if (!(sup_tol > 0) || !(root_tol > 0)) {
    throw Error(ErrorKind::precondition, "tolerances must be strictly positive");
  }
}

}  // namespace turanlab
