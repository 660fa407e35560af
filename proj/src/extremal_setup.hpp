#pragma once

// Discretization shared by the endpoint and variation solvers.

#include <vector>

#include "turanlab/cheb_series.hpp"
#include "turanlab/extremal.hpp"
#include "turanlab/linprog.hpp"

namespace turanlab::detail {

/// Q is expanded in phi_j = T_j on [lo, 1] (Chebyshev of the first kind),
/// and constraint rows are x^n w(x) phi_j(x) on a grid clustered near 1.
class Discretization {
 public:
  Discretization(const RatioProblem& problem, int grid_size);

  int n() const { return n_; }
  int k() const { return k_; }
  const Real& lo() const { return lo_; }
  const std::vector<Real>& grid() const { return grid_; }

  /// x^n w(x) phi_j(x), j = 0..k-1.
  std::vector<Real> row(const Real& x) const;

  /// Psi_j(t) = integral_0^t x^n phi_j(x) dx.
  std::vector<Real> psi(const Real& t) const;

  /// x^n w(x) Q(x) for Q = sum a_j phi_j.
  Real weighted_derivative(const std::vector<Real>& a, const Real& x) const;

  /// Roots of Q in (0, 1).
  std::vector<Real> q_roots(const std::vector<Real>& a, double tol) const;

  lp::BoxLp<Real> real_lp() const;
  lp::BoxLp<double> double_lp() const;

 private:
  int n_;
  int k_;
  Weight w_;
  Real lo_;
  std::vector<Real> grid_;
  std::vector<std::vector<Real>> phi_monomial_;  // wide precision
};

/// Relative LP tolerance for the double-precision searches.
inline constexpr double kSearchLpTol = 1e-11;

/// Relative LP tolerance at a given working precision.
double lp_tolerance(long bits);

}  // namespace turanlab::detail
