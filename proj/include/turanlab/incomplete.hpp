#pragma once

#include <vector>

#include "turanlab/polynomial.hpp"

namespace turanlab {

/// P(x) = x^{n+1} R(x) with deg R <= k - 1, i.e. a member of P_{n,k}.
class IncompletePolynomial {
 public:
  IncompletePolynomial(int n, int k, Polynomial r);

  int n() const { return n_; }
  int k() const { return k_; }
  const Polynomial& r() const { return r_; }

  /// P(x) at the working precision (no domain check).
  Real operator()(const Real& x) const;

 private:
  int n_;
  int k_;
  Polynomial r_;
};

struct IncompleteValue {
  Real value;
  bool underflow = false;  // x^{n+1} vanished at working precision for x > 0
};

/// x^{n+1} R(x) for x in [0, 1].
IncompleteValue incomplete_eval(const IncompletePolynomial& ip, const Real& x,
                                const PrecisionContext& ctx);

/// Q with P'(x) = x^n Q(x), i.e. Q = (n+1) R + x R'. Same basis as R.
Polynomial derivative_q(const IncompletePolynomial& ip);

struct VariationResult {
  Real value;
  std::vector<Real> breakpoints;  // 0, sign changes of Q, 1
  RootReport q_roots;
};

/// V_0^1(P) as the sum of |P(t_{i+1}) - P(t_i)| between consecutive
/// sign changes of P' in (0, 1).
VariationResult total_variation(const IncompletePolynomial& ip, const PrecisionContext& ctx);

/// ||P'(x) w(x)||_{[0,1]} from the endpoints and the exact critical points.
SupResult derivative_sup(const IncompletePolynomial& ip, const Weight& w,
                         const PrecisionContext& ctx);

/// Every local extremum of P'(x) w(x) in (0, 1], with |P' w| at each.
std::vector<SupResult> derivative_extrema(const IncompletePolynomial& ip, const Weight& w,
                                        const PrecisionContext& ctx);

/// P as a dense monomial polynomial of degree n + k.
Polynomial expand(const IncompletePolynomial& ip);

}  // namespace turanlab
