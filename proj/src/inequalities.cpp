#include "turanlab/inequalities.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>

namespace turanlab {

namespace {

Real margin_ratio(const Real& lhs, const Real& bound) {
  if (lhs.is_zero()) return Real(0);
  if (bound.is_zero()) return Real(std::numeric_limits<double>::infinity());
  return lhs / bound;
}

// e F + x F'
Polynomial euler_combination(const Polynomial& f, const Real& e) {
  return f * e + f.derivative().times_x();
}

std::vector<Real> roots_in_unit(const Polynomial& p, const PrecisionContext& ctx) {
  if (p.degree() < 1) return {};
  return real_roots(p, Real(0), Real(1), ctx).roots;
}

}  // namespace

void LemmaReport::absorb(const LemmaReport& other) {
  if (lemma_id.empty()) lemma_id = other.lemma_id;
  if (trials == 0 || other.worst_margin > worst_margin) {
    worst_margin = other.worst_margin;
    worst_case = other.worst_case;
  }
  trials += other.trials;
  failures += other.failures;
  vacuous += other.vacuous;
  bounded = bounded && other.bounded;
}

LemmaReport check_growth(const Polynomial& q, int k, const Real& a, const Real& b,
                         std::span<const Real> xs, const PrecisionContext& ctx) {
  ctx.validate();
  if (!(a < b)) throw Error(ErrorKind::domain, "check_growth needs a < b");
  if (k < 0 || q.degree() > k) {
    throw Error(ErrorKind::precondition, "check_growth needs deg Q <= k");
  }
  PrecisionScope scope(ctx.mantissa_bits);
  LemmaReport rep;
  rep.lemma_id = a == -1 && b == 1 ? "3.1" : "3.2";
  rep.trials = 1;
  const Real norm = poly_sup(q, a, b, ctx).value;
  const Real width = b - a;
  const Real mid2 = 2 * (a + b);
  Real worst_x(0);
  bool first = true;
  for (const auto& x : xs) {
    if (x > a && x < b) throw Error(ErrorKind::domain, "check_growth: sample point inside (a, b)");
    const Real bound = pow(abs((4 * x - mid2) / width), static_cast<long>(k)) * norm;
    Real m = margin_ratio(abs(q(x)), bound);
    if (first || m > rep.worst_margin) {
      rep.worst_margin = std::move(m);
      worst_x = x;
      first = false;
    }
  }
  rep.worst_case = {{"q", to_json(q)},       {"k", k}, {"a", a.to_string(20)},
                    {"b", b.to_string(20)}, {"x", worst_x.to_string(20)}};
  if (rep.worst_margin > Real(1 + kMarginTol)) rep.failures = 1;
  return rep;
}

double decay_region_end(int n, int k) { return 1.0 - 10.0 * k / n; }

LemmaReport check_decay(int n, int k, const Polynomial& factor, DecayForm form,
                        const PrecisionContext& ctx, int grid_points) {
  ctx.validate();
  if (n < 1 || k < 1) throw Error(ErrorKind::precondition, "check_decay needs n, k >= 1");
  const int max_degree = form == DecayForm::plain ? k : k - 1;
  if (factor.degree() > max_degree) {
    throw Error(ErrorKind::precondition, "check_decay: factor degree exceeds " + std::to_string(max_degree));
  }
  if (grid_points < 2) throw Error(ErrorKind::precondition, "check_decay needs at least 2 grid points");
  PrecisionScope scope(ctx.mantissa_bits);
  LemmaReport rep;
  rep.lemma_id = form == DecayForm::plain ? "3.4" : "3.5";
  rep.trials = 1;
  const Real end = 1 - Real(10 * k) / n;
  rep.worst_case = {{"n", n}, {"k", k}, {"factor", to_json(factor)}, {"region_end", end.to_double()}};
  if (end.sign() <= 0) {
    rep.vacuous = 1;
    return rep;
  }

  const bool circle = form == DecayForm::circle;
  // Critical points of x^e F(x) [sqrt(1 - x^2)] come from e F + x F', or
  // (e F + x F')(1 - x^2) - x^2 F for the circle form.
  auto critical = [&](const Real& e) {
    Polynomial h = euler_combination(factor, e);
    if (circle) {
      const Polynomial x2h = h.times_x().times_x();
      h = h - x2h - factor.times_x().times_x();
    }
    return roots_in_unit(h, ctx);
  };
  auto circle_factor = [&](const Real& x) { return circle ? sqrt(1 - x * x) : Real(1); };

  Real norm = abs(factor(Real(1))) * circle_factor(Real(1));
  for (const auto& x : critical(Real(n))) {
    norm = max(norm, pow(x, static_cast<long>(n)) * abs(factor(x)) * circle_factor(x));
  }
  if (norm.is_zero()) return rep;

  // |S(x)| / x^{n/2} = x^{n/2} |F(x)| [sqrt(1 - x^2)]
  Real worst_x(0);
  auto consider = [&](const Real& x) {
    Real m = pow(sqrt(x), static_cast<long>(n)) * abs(factor(x)) * circle_factor(x) / norm;
    if (m > rep.worst_margin) {
      rep.worst_margin = std::move(m);
      worst_x = x;
    }
  };
  for (int i = 1; i < grid_points; ++i) consider(end * i / (grid_points - 1));
  for (const auto& x : critical(Real(n) / 2)) {
    if (x < end) consider(x);
  }
  rep.worst_case["x"] = worst_x.to_string(20);
  if (rep.worst_margin > Real(1 + kMarginTol)) rep.failures = 1;
  return rep;
}

bool FBoundRecord::pass() const {
  return f_at_edge <= cap * (1 + Real(kMarginTol)) && cap <= 1 && monotone_ok;
}

FBoundRecord f_bound_check(int n, int k, const PrecisionContext& ctx, int samples) {
  ctx.validate();
  if (n < 1 || k < 1 || 10 * k > n) {
    throw Error(ErrorKind::precondition, "f_bound_check needs 1 - 10k/n >= 0");
  }
  if (samples < 2) throw Error(ErrorKind::precondition, "f_bound_check needs at least 2 samples");
  PrecisionScope scope(ctx.mantissa_bits);
  const Real delta = Real(k) / n;
  const Real scale = pow(1 - delta, static_cast<long>(-n));
  auto f = [&](const Real& x) {
    return pow(sqrt(x), static_cast<long>(n)) * pow((4 - 4 * x) / delta, static_cast<long>(k)) * scale;
  };
  FBoundRecord rec;
  rec.n = n;
  rec.k = k;
  rec.edge = 1 - 10 * delta;
  rec.f_at_edge = f(rec.edge);
  rec.cap = pow(Real(40) / exp(Real(4)), static_cast<long>(k));
  const Real right = 1 - 2 * delta;
  const Real slack = ldexp(Real(1), 16 - ctx.mantissa_bits);
  rec.monotone_ok = true;
  Real prev = f(Real(0));
  for (int i = 1; i < samples && rec.monotone_ok; ++i) {
    Real cur = f(right * i / (samples - 1));
    rec.monotone_ok = cur >= prev * (1 - slack);
    prev = std::move(cur);
  }
  return rec;
}

int disk_zero_count(const Polynomial& f, int nodes) {
  if (f.is_zero()) throw Error(ErrorKind::precondition, "disk_zero_count: zero polynomial");
  if (nodes < 8) throw Error(ErrorKind::precondition, "disk_zero_count needs at least 8 nodes");
  using C = std::complex<double>;
  std::vector<double> c;
  for (const auto& v : f.coeffs()) c.push_back(v.to_double());
  const bool cheb = f.basis() == Basis::shifted_chebyshev;
  auto value = [&](double theta) {
    const C z = 0.5 + 0.5 * std::polar(1.0, theta);
    if (!cheb) {
      C acc = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
      return acc;
    }
    const C s = 2.0 * z - 1.0;
    C b1 = 0.0;
    C b2 = 0.0;
    for (std::size_t j = c.size(); j-- > 1;) {
      const C b0 = 2.0 * s * b1 - b2 + c[j];
      b2 = b1;
      b1 = b0;
    }
    return s * b1 - b2 + c[0];
  };

  double scale = 0.0;
  std::vector<C> v(static_cast<std::size_t>(nodes) + 1);
  for (int j = 0; j <= nodes; ++j) {
    v[static_cast<std::size_t>(j)] = value(2 * std::numbers::pi * j / nodes);
    scale = std::max(scale, std::abs(v[static_cast<std::size_t>(j)]));
  }
  const double floor = 1e-12 * scale;
  // Arcs whose argument jumps by more than pi/4 are bisected.
  std::function<double(double, double, C, C, int)> wind = [&](double ta, double tb, C va, C vb, int depth) {
    if (std::abs(va) <= floor || std::abs(vb) <= floor) {
      throw Error(ErrorKind::zero_restriction, "zero on the boundary circle");
    }
    const double d = std::arg(vb / va);
    if (std::fabs(d) <= std::numbers::pi / 4) return d;
    if (depth > 40) throw Error(ErrorKind::zero_restriction, "winding number not resolved");
    const double tm = 0.5 * (ta + tb);
    const C vm = value(tm);
    return wind(ta, tm, va, vm, depth + 1) + wind(tm, tb, vm, vb, depth + 1);
  };
  double total = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const auto i = static_cast<std::size_t>(j);
    total += wind(2 * std::numbers::pi * j / nodes, 2 * std::numbers::pi * (j + 1) / nodes, v[i], v[i + 1], 0);
  }
  return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

BernsteinRatio check_bernstein_restricted(const RestrictedPolynomial& p, const PrecisionContext& ctx) {
  ctx.validate();
  if (p.nu < 0 || p.kappa < 1 || p.zero_order < 0) {
    throw Error(ErrorKind::precondition, "needs nu >= 0, kappa >= 1 and a nonnegative zero order");
  }
  if (p.factor.is_zero()) throw Error(ErrorKind::precondition, "P is the zero polynomial");
  if (p.zero_order + p.factor.degree() > p.nu + p.kappa) {
    throw Error(ErrorKind::precondition, "deg P exceeds nu + kappa");
  }
  BernsteinRatio out;
  out.disk_zeros = disk_zero_count(p.factor);
  if (out.disk_zeros > p.kappa) {
    throw Error(ErrorKind::zero_restriction, std::to_string(out.disk_zeros) +
                                                 " zeros in the disk with diameter (0, 1), at most " +
                                                 std::to_string(p.kappa) + " allowed");
  }
  PrecisionScope scope(ctx.mantissa_bits);
  const Polynomial& f = p.factor;
  const long nu = p.zero_order;

  Real norm;
  if (nu == 0) {
    norm = poly_sup(f, Real(0), Real(1), ctx).value;
  } else {
    norm = abs(f(Real(1)));
    for (const auto& x : roots_in_unit(euler_combination(f, Real(nu)), ctx)) {
      norm = max(norm, pow(x, nu) * abs(f(x)));
    }
  }

  // |P'(x)| sqrt(x(1-x)) = x^m |G(x)| sqrt(x(1-x)); its critical points are the
  // roots of H = 2m(1-x)G + 2x(1-x)G' + (1-2x)G.
  const long m = nu == 0 ? 0 : nu - 1;
  const Polynomial g = nu == 0 ? f.derivative() : euler_combination(f, Real(nu));
  out.argmax = Real(0.5);
  out.ratio = Real(0);
  if (g.is_zero() || norm.is_zero()) return out;
  const Polynomial xg = g.times_x();
  const Polynomial dg = g.derivative().times_x();
  const Polynomial h = (g - xg) * Real(2 * m) + (dg - dg.times_x()) * Real(2) + g - xg * Real(2);
  auto value = [&](const Real& x) { return pow(x, m) * abs(g(x)) * sqrt(x * (1 - x)); };
  Real best = value(out.argmax);
  for (const auto& x : roots_in_unit(h, ctx)) {
    Real v = value(x);
    if (v > best) {
      best = std::move(v);
      out.argmax = x;
    }
  }
  out.ratio = best / sqrt(Real((p.nu + p.kappa) * p.kappa)) / norm;
  return out;
}

nlohmann::json to_json(const LemmaReport& r) {
  return {{"lemma", r.lemma_id},
          {"trials", r.trials},
          {"worst_margin", r.worst_margin.to_double()},
          {"worst_case", r.worst_case},
          {"failures", r.failures},
          {"vacuous", r.vacuous},
          {"bounded", r.bounded},
          {"pass", r.pass()}};
}

nlohmann::json to_json(const FBoundRecord& r) {
  return {{"n", r.n},
          {"k", r.k},
          {"edge", r.edge.to_double()},
          {"f_at_edge", r.f_at_edge.to_double()},
          {"cap", r.cap.to_double()},
          {"monotone_ok", r.monotone_ok},
          {"pass", r.pass()}};
}

}  // namespace turanlab
