#include "turanlab/incomplete.hpp"

#include <string>
#include <utility>

namespace turanlab {

IncompletePolynomial::IncompletePolynomial(int n, int k, Polynomial r)
    : n_(n), k_(k), r_(std::move(r)) {
  if (n_ < 1 || k_ < 1) {
    throw Error(ErrorKind::precondition, "incomplete polynomial needs n >= 1 and k >= 1");
  }
  if (r_.degree() > k_ - 1) {
    throw Error(ErrorKind::precondition,
                "R has degree " + std::to_string(r_.degree()) + " > k - 1 = " + std::to_string(k_ - 1));
  }
}

Real IncompletePolynomial::operator()(const Real& x) const { return pow(x, n_ + 1L) * r_(x); }

IncompleteValue incomplete_eval(const IncompletePolynomial& ip, const Real& x,
                                const PrecisionContext& ctx) {
  ctx.validate();
  if (!(x >= 0 && x <= 1)) throw Error(ErrorKind::domain, "incomplete_eval: x outside [0, 1]");
  PrecisionScope scope(ctx.mantissa_bits);
  Real power = pow(x, ip.n() + 1L);
  if (power.is_zero() && x > 0) return {Real(0), true};
  return {power * ip.r()(x), false};
}

Polynomial derivative_q(const IncompletePolynomial& ip) {
  const Polynomial& r = ip.r();
  return r * Real(ip.n() + 1) + r.derivative().times_x();
}

VariationResult total_variation(const IncompletePolynomial& ip, const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionScope scope(ctx.mantissa_bits);
  VariationResult out;
  out.q_roots = real_roots_q(derivative_q(ip), ctx);
  out.breakpoints.emplace_back(0);
  for (const auto& t : out.q_roots.roots) out.breakpoints.push_back(t);
  out.breakpoints.emplace_back(1);

  Real total(0);
  Real previous = ip(out.breakpoints.front());
  for (std::size_t i = 1; i < out.breakpoints.size(); ++i) {
    Real current = ip(out.breakpoints[i]);
    total += abs(current - previous);
    previous = std::move(current);
  }
  out.value = std::move(total);
  return out;
}

std::vector<SupResult> derivative_extrema(const IncompletePolynomial& ip, const Weight& w,
                                          const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionScope scope(ctx.mantissa_bits);
  const Polynomial q = derivative_q(ip);
  const long n = ip.n();
  // (x^n Q)' = x^{n-1} (n Q + x Q')
  Polynomial m = q * Real(n) + q.derivative().times_x();
  if (w.kind == WeightKind::circle) {
    // (x^n Q sqrt(1 - x^2))' ∝ x^{n-1} [(n Q + x Q')(1 - x^2) - x^2 Q]
    m = m - (m + q).times_x().times_x();
  }
  auto value_at = [&](const Real& x) { return abs(pow(x, n) * q(x) * w(x)); };

  std::vector<SupResult> out;
  for (const auto& x : real_roots_q(m, ctx).roots) out.push_back({value_at(x), x});
  if (w.kind == WeightKind::unit) out.push_back({value_at(Real(1)), Real(1)});
  return out;
}

SupResult derivative_sup(const IncompletePolynomial& ip, const Weight& w,
                         const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.mantissa_bits);
  SupResult best{Real(0), Real(1)};
  for (auto& e : derivative_extrema(ip, w, ctx)) {
    if (e.value > best.value) best = std::move(e);
  }
  return best;
}

Polynomial expand(const IncompletePolynomial& ip) {
  const Polynomial r = ip.r().to(Basis::monomial);
  std::vector<Real> c(static_cast<std::size_t>(ip.n()) + 1, Real(0));
  for (const auto& v : r.coeffs()) c.push_back(v);
  return Polynomial(Basis::monomial, std::move(c));
}

}  // namespace turanlab
