#include "turanlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "turanlab/cheb_series.hpp"

namespace turanlab {

namespace {

const cheb::Interval<Real>& unit_interval() {
  thread_local const cheb::Interval<Real> dom{Real(0), Real(1)};
  return dom;
}

std::vector<Real> horner_derivative(const std::vector<Real>& c) {
  if (c.size() <= 1) return {Real(0)};
  std::vector<Real> out;
  out.reserve(c.size() - 1);
  for (std::size_t j = 1; j < c.size(); ++j) out.push_back(c[j] * static_cast<long>(j));
  return out;
}

Real horner(const std::vector<Real>& c, const Real& x) {
  Real acc(0);
  for (std::size_t j = c.size(); j-- > 0;) {
    acc *= x;
    acc += c[j];
  }
  return acc;
}

}  // namespace

std::string_view to_string(Basis basis) {
  return basis == Basis::monomial ? "monomial" : "shifted-chebyshev";
}

Basis basis_from_string(std::string_view text) {
  if (text == "monomial") return Basis::monomial;
  if (text == "shifted-chebyshev") return Basis::shifted_chebyshev;
  throw Error(ErrorKind::config, "unknown basis: " + std::string(text));
}

long conversion_precision(long bits, int degree) {
  return bits + 4L * std::max(degree, 0) + 64;
}

Polynomial::Polynomial(Basis basis, std::vector<Real> coeffs)
    : basis_(basis), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw Error(ErrorKind::precondition, "polynomial needs at least one coefficient");
  }
}

Polynomial Polynomial::constant(const Real& value, Basis basis) {
  return Polynomial(basis, {value});
}

Polynomial Polynomial::from_roots(std::span<const Real> roots, Basis basis) {
  std::vector<Real> c{Real(1)};
  for (const auto& r : roots) {
    std::vector<Real> next(c.size() + 1, Real(0));
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j + 1] += c[j];
      next[j] -= c[j] * r;
    }
    c = std::move(next);
  }
  Polynomial p(Basis::monomial, std::move(c));
  return basis == Basis::monomial ? p : p.to(basis);
}

int Polynomial::degree() const {
  const int d = cheb::effective_degree(std::span<const Real>(coeffs_));
  return d < 0 ? kZeroPolynomialDegree : d;
}

Real Polynomial::operator()(const Real& x) const {
  if (basis_ == Basis::monomial) return horner(coeffs_, x);
  return cheb::evaluate(std::span<const Real>(coeffs_), unit_interval(), x);
}

Polynomial Polynomial::derivative() const {
  if (basis_ == Basis::monomial) return Polynomial(basis_, horner_derivative(coeffs_));
  return Polynomial(basis_, cheb::derivative(std::span<const Real>(coeffs_), unit_interval()));
}

Polynomial Polynomial::times_x() const {
  if (basis_ == Basis::monomial) {
    std::vector<Real> out;
    out.reserve(coeffs_.size() + 1);
    out.emplace_back(0);
    for (const auto& c : coeffs_) out.push_back(c);
    return Polynomial(basis_, std::move(out));
  }
  return Polynomial(basis_, cheb::times_x(std::span<const Real>(coeffs_), unit_interval()));
}

Polynomial Polynomial::to(Basis target) const {
  if (target == basis_) return *this;
  PrecisionScope scope(conversion_precision(working_precision(), degree()));
  const cheb::Interval<Real> dom{Real(0), Real(1)};
  std::span<const Real> c(coeffs_);
  if (target == Basis::monomial) return Polynomial(target, cheb::to_monomial(c, dom));
  return Polynomial(target, cheb::from_monomial(c, dom));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  const Polynomial other = rhs.to(basis_);
  return Polynomial(basis_, cheb::add(std::span<const Real>(coeffs_),
                                      std::span<const Real>(other.coeffs_)));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const { return *this + rhs * Real(-1); }

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  const Polynomial other = rhs.to(basis_);
  if (basis_ == Basis::shifted_chebyshev) {
    return Polynomial(basis_, cheb::multiply(std::span<const Real>(coeffs_),
                                             std::span<const Real>(other.coeffs_)));
  }
  std::vector<Real> out(coeffs_.size() + other.coeffs_.size() - 1, Real(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * other.coeffs_[j];
  }
  return Polynomial(basis_, std::move(out));
}

Polynomial Polynomial::operator*(const Real& scale) const {
  std::vector<Real> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c * scale);
  return Polynomial(basis_, std::move(out));
}

Real eval(const Polynomial& p, const Real& x, const PrecisionContext& ctx) {
  ctx.validate();
  if (!x.is_finite()) throw Error(ErrorKind::domain, "eval: x must be finite");
  PrecisionScope scope(ctx.mantissa_bits);
  return p(x);
}

RootReport real_roots(const Polynomial& q, const Real& lo, const Real& hi,
                      const PrecisionContext& ctx) {
  ctx.validate();
  if (q.degree() > kMaxRootDegree) {
    throw Error(ErrorKind::degree_guard, "root isolation limited to degree " +
                                             std::to_string(kMaxRootDegree) + ", got " +
                                             std::to_string(q.degree()));
  }
  if (!(lo < hi)) throw Error(ErrorKind::domain, "real_roots: empty interval");
  PrecisionScope scope(ctx.mantissa_bits);
  RootReport report;
  if (q.is_zero()) return report;

  cheb::RootScan<Real> scan;
  if (q.basis() == Basis::shifted_chebyshev) {
    scan = cheb::roots(std::span<const Real>(q.coeffs()), unit_interval(), lo, hi, ctx.root_tol);
  } else {
    const cheb::Interval<Real> dom{lo, hi};
    std::vector<Real> c;
    {
      PrecisionScope wide(conversion_precision(ctx.mantissa_bits, q.degree()));
      c = cheb::from_monomial(std::span<const Real>(q.coeffs()), dom);
    }
    scan = cheb::roots(std::span<const Real>(c), dom, lo, hi, ctx.root_tol);
  }
  report.roots = std::move(scan.roots);
  report.suspected_even_roots = std::move(scan.suspected_even);
  return report;
}

RootReport real_roots_q(const Polynomial& q, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.mantissa_bits);
  return real_roots(q, Real(0), Real(1), ctx);
}

std::string_view to_string(WeightKind kind) { return kind == WeightKind::unit ? "unit" : "circle"; }

WeightKind weight_from_string(std::string_view text) {
  if (text == "unit") return WeightKind::unit;
  if (text == "circle") return WeightKind::circle;
  throw Error(ErrorKind::config, "unknown weight: " + std::string(text));
}

Real Weight::operator()(const Real& x) const {
  if (kind == WeightKind::unit) return Real(1);
  Real t = 1 - x * x;
  if (t <= 0) return Real(0);
  return sqrt(t);
}

double Weight::operator()(double x) const {
  if (kind == WeightKind::unit) return 1.0;
  const double t = 1.0 - x * x;
  return t <= 0 ? 0.0 : std::sqrt(t);
}

SupResult sup_norm(const RealFunction& f, const Real& a, const Real& b, const Weight& w,
                   const PrecisionContext& ctx) {
  ctx.validate();
  if (!(a < b)) throw Error(ErrorKind::domain, "sup_norm: need a < b");
  PrecisionScope scope(ctx.mantissa_bits);

  constexpr int kIntervals = 2048;
  const Real mid = (a + b) / 2;
  const Real half = (b - a) / 2;
  auto objective = [&](const Real& x) { return abs(f(x) * w(x)); };

  // cos(i pi / 2048) by the three-term recurrence; nodes need not be exact.
  const Real c1 = cos(pi() / kIntervals);
  Real cos_prev = c1;  // cos(-theta)
  Real cos_cur(1);
  std::vector<Real> nodes;
  nodes.reserve(kIntervals + 1);
  for (int i = 0; i <= kIntervals; ++i) {
    Real x = (i == 0) ? Real(b) : (i == kIntervals ? Real(a) : mid + half * cos_cur);
    nodes.push_back(std::move(x));
    Real next = c1 * cos_cur * 2 - cos_prev;
    cos_prev = std::move(cos_cur);
    cos_cur = std::move(next);
  }

  int best = 0;
  Real best_value = objective(nodes[0]);
  for (int i = 1; i <= kIntervals; ++i) {
    Real v = objective(nodes[static_cast<std::size_t>(i)]);
    if (v > best_value) {
      best_value = std::move(v);
      best = i;
    }
  }

  // Golden-section ascent on the bracket around the best node.
  Real lo = nodes[static_cast<std::size_t>(std::min(best + 1, kIntervals))];
  Real hi = nodes[static_cast<std::size_t>(std::max(best - 1, 0))];
  const Real ratio = (sqrt(Real(5)) - 1) / 2;
  Real x1 = hi - ratio * (hi - lo);
  Real x2 = lo + ratio * (hi - lo);
  Real f1 = objective(x1);
  Real f2 = objective(x2);
  const Real stop = (b - a) * ctx.sup_tol;
  for (int iter = 0; iter < 300 && hi - lo > stop; ++iter) {
    if (f1 < f2) {
      lo = std::move(x1);
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = std::move(x2);
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = objective(x1);
    }
  }
  SupResult result{best_value, nodes[static_cast<std::size_t>(best)]};
  Real xm = (lo + hi) / 2;
  Real fm = objective(xm);
  if (fm > result.value) result = {std::move(fm), std::move(xm)};
  if (f1 > result.value) result = {f1, x1};
  if (f2 > result.value) result = {f2, x2};
  return result;
}

SupResult poly_sup(const Polynomial& p, const Real& a, const Real& b, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.mantissa_bits);
  SupResult best{abs(p(a)), a};
  auto consider = [&](const Real& x) {
    Real v = abs(p(x));
    if (v > best.value) best = {std::move(v), x};
  };
  consider(b);
  if (p.degree() >= 2 && a < b) {
    for (const auto& x : real_roots(p.derivative(), a, b, ctx).roots) consider(x);
  }
  return best;
}

nlohmann::json to_json(const Polynomial& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(c.to_string());
  nlohmann::json out;
  out["basis"] = std::string(to_string(p.basis()));
  out["coeffs"] = std::move(coeffs);
  out["degree"] = p.is_zero() ? nlohmann::json(nullptr) : nlohmann::json(p.degree());
  return out;
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
  const Basis basis = basis_from_string(j.at("basis").get<std::string>());
  std::vector<Real> coeffs;
  for (const auto& c : j.at("coeffs")) {
    if (c.is_string()) {
      coeffs.emplace_back(std::string_view(c.get_ref<const std::string&>()));
    } else {
      coeffs.emplace_back(c.get<double>());
    }
  }
  return Polynomial(basis, std::move(coeffs));
}

}  // namespace turanlab
