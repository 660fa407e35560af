#pragma once

#include <vector>

#include "json.hpp"
#include "turanlab/incomplete.hpp"
#include "turanlab/polynomial.hpp"

namespace turanlab {

/// Chebyshev polynomial T_{nu,kappa} of span{x^nu, ..., x^{nu+kappa}} on [0, 1],
/// normalized by T(1) = 1.
struct MuntzChebyshev {
  int nu = 0;
  int kappa = 0;
  std::vector<Real> coeffs;              // coefficient of x^{nu+j}
  Polynomial factor{Basis::shifted_chebyshev, {Real(1)}};  // T(x) = x^nu * factor(x)
  std::vector<Real> alternation_points;  // x_0 = 1 > x_1 > ... > x_kappa
  std::vector<Real> zeros;               // beta_1 > ... > beta_kappa
  Real residual;                         // (||T|| - min_j |T(x_j)|) / ||T||
  Real sup_norm;                         // ||T||_[0,1] after normalization
  int iterations = 0;

  Real operator()(const Real& x) const;
};

inline constexpr int kMaxKappa = 64;

/// Exchange iteration for T_{nu,kappa}. Needs kappa in [1, 64] and nu >= 0.
MuntzChebyshev muntz_chebyshev(int nu, int kappa, const PrecisionContext& ctx);

/// s_j = (1 - beta_j) (nu + kappa) kappa / j^2 for j = 1..kappa.
std::vector<Real> zero_bound_check(const MuntzChebyshev& mc);

/// Exact integral of T^2 over [0, 1] from the coefficient convolution.
Real t_squared_integral(const MuntzChebyshev& mc, const PrecisionContext& ctx);

struct QnCheckRecord {
  int n = 0;
  int k = 0;
  int m = 0;
  std::vector<Real> alphas;
  std::vector<Real> gammas;
  std::vector<Real> rhos;
  std::vector<Real> slacks;  // gamma_j - rho_j
};

/// Zeros of the extremal q_n on [-1, 1] against the gamma_j bounds. Needs n - 2k >= 1.
QnCheckRecord qn_gamma_check(int n, int k, const PrecisionContext& ctx);

struct WitnessResult {
  IncompletePolynomial ip;
  Real numerator;    // ||P' w||
  Real denominator;  // P(1) = V_0^1(P), P is increasing
  Real ratio;
};

/// P(x) = integral_0^x T_{n/2,(k-2)/2}(u)^2 du. Needs n, k even, k >= 6 and 20 kappa <= nu.
WitnessResult witness_upper(int n, int k, const Weight& w, const PrecisionContext& ctx);

/// P(x) = x^{n+1}.
WitnessResult monomial_witness(int n, int k, const Weight& w, const PrecisionContext& ctx);

/// Smallest ratio among the monomial witness and the T^2 witness embedded into
/// P_{n,k} (n rounded up, k rounded down to even) when that one is admissible.
WitnessResult best_witness(int n, int k, const Weight& w, const PrecisionContext& ctx);

nlohmann::json to_json(const MuntzChebyshev& mc, const Real& t2_integral);

}  // namespace turanlab
