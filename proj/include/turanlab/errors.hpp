#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace turanlab {

enum class ErrorKind {
  domain,
  degree_guard,
  precondition,
  non_convergence,
  ill_conditioned,
  degenerate_normalization,
  oracle_disagreement,
  zero_restriction,
  empty_sweep,
  config,
  io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Precision and tolerance knobs shared by every numerical routine.
struct PrecisionContext {
  long mantissa_bits = 256;
  double sup_tol = 1e-12;   // relative movement at which sup refinement stops
  double root_tol = 1e-14;  // absolute bracket width for root polishing

  void validate() const;
};

}  // namespace turanlab
