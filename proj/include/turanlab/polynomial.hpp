#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "turanlab/errors.hpp"
#include "turanlab/real.hpp"

namespace turanlab {

enum class Basis {
  monomial,
  shifted_chebyshev,  // T_j(2x - 1), natural on [0, 1]
};

std::string_view to_string(Basis basis);
Basis basis_from_string(std::string_view text);

/// Degree reported for the zero polynomial.
inline constexpr int kZeroPolynomialDegree = std::numeric_limits<int>::min();

/// Largest degree the root isolator accepts.
inline constexpr int kMaxRootDegree = 64;

/// Dense real polynomial; coeffs[j] multiplies the degree-j basis element.
class Polynomial {
 public:
  Polynomial(Basis basis, std::vector<Real> coeffs);

  static Polynomial constant(const Real& value, Basis basis = Basis::shifted_chebyshev);
  /// Monic polynomial with the given real roots.
  static Polynomial from_roots(std::span<const Real> roots, Basis basis = Basis::monomial);

  Basis basis() const { return basis_; }
  const std::vector<Real>& coeffs() const { return coeffs_; }
  int degree() const;
  bool is_zero() const { return degree() == kZeroPolynomialDegree; }

  /// Evaluation at the working precision.
  Real operator()(const Real& x) const;

  Polynomial derivative() const;
  Polynomial times_x() const;
  /// Basis change, carried out and stored at a widened precision so that a
  /// round trip reproduces the input to the working precision.
  Polynomial to(Basis target) const;

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator*(const Real& scale) const;

 private:
  Basis basis_;
  std::vector<Real> coeffs_;
};

/// Evaluates p at x: Horner for monomial, Clenshaw for shifted Chebyshev.
Real eval(const Polynomial& p, const Real& x, const PrecisionContext& ctx);

/// Working precision used for basis conversion of a degree-d polynomial.
long conversion_precision(long bits, int degree);

struct RootReport {
  std::vector<Real> roots;  // ascending
  std::vector<Real> suspected_even_roots;
  bool flagged() const { return !suspected_even_roots.empty(); }
};

/// Real roots of q in the open interval (lo, hi).
RootReport real_roots(const Polynomial& q, const Real& lo, const Real& hi,
                      const PrecisionContext& ctx);
/// Real roots of q in (0, 1).
RootReport real_roots_q(const Polynomial& q, const PrecisionContext& ctx);

enum class WeightKind { unit, circle };

std::string_view to_string(WeightKind kind);
WeightKind weight_from_string(std::string_view text);

/// w(x) = 1 or w(x) = sqrt(1 - x^2) on [0, 1].
struct Weight {
  WeightKind kind = WeightKind::unit;

  static Weight unit() { return {WeightKind::unit}; }
  static Weight circle() { return {WeightKind::circle}; }

  Real operator()(const Real& x) const;
  double operator()(double x) const;
};

struct SupResult {
  Real value;
  Real argmax;
};

using RealFunction = std::function<Real(const Real&)>;

/// sup of |f * w| on [a, b]: 2049-point Chebyshev-distributed scan, then
/// golden-section ascent around the best bracket.
SupResult sup_norm(const RealFunction& f, const Real& a, const Real& b, const Weight& w,
                   const PrecisionContext& ctx);

/// Exact sup of |p| on [a, b] from the endpoints and the real critical points.
SupResult poly_sup(const Polynomial& p, const Real& a, const Real& b, const PrecisionContext& ctx);

nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace turanlab
