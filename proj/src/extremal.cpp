#include "turanlab/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "extremal_setup.hpp"
#include "turanlab/muntz.hpp"

namespace turanlab {

namespace detail {

double cluster_start(int n, int k) { return std::max(0.0, 1.0 - 20.0 * k / n); }

double lp_tolerance(long bits) {
  return std::max(std::ldexp(1.0, static_cast<int>(-3 * bits / 4)), 1e-290);
}

Discretization::Discretization(const RatioProblem& problem, int grid_size)
    : n_(problem.n), k_(problem.k), w_(problem.weight), lo_(cluster_start(problem.n, problem.k)) {
  if (grid_size < 16) throw Error(ErrorKind::precondition, "grid_size must be at least 16");
  const Real p = pi();
  if (lo_.is_zero()) {
    for (int i = 0; i < grid_size; ++i) grid_.push_back((1 - cos(p * i / static_cast<long>(grid_size - 1))) / 2);
  } else {
    const int clustered = grid_size * 3 / 4;
    const int tail = grid_size - clustered;
    for (int i = 1; i <= tail; ++i) grid_.push_back(lo_ * i / static_cast<long>(tail + 1));
    for (int i = 0; i < clustered; ++i) {
      grid_.push_back(lo_ + (1 - lo_) * (1 - cos(p * i / static_cast<long>(clustered - 1))) / 2);
    }
  }
  grid_.back() = Real(1);

  PrecisionScope wide(conversion_precision(working_precision(), k_));
  const cheb::Interval<Real> dom{lo_, Real(1)};
  for (int j = 0; j < k_; ++j) {
    std::vector<Real> unit(static_cast<std::size_t>(j) + 1, Real(0));
    unit.back() = Real(1);
    phi_monomial_.push_back(cheb::to_monomial(std::span<const Real>(unit), dom));
  }
}

std::vector<Real> Discretization::row(const Real& x) const {
  const Real scale = pow(x, static_cast<long>(n_)) * w_(x);
  const Real s = (2 * x - 1 - lo_) / (1 - lo_);
  std::vector<Real> out;
  out.reserve(static_cast<std::size_t>(k_));
  Real prev(1), cur = s;
  for (int j = 0; j < k_; ++j) {
    if (j == 0) {
      out.push_back(scale);
    } else {
      out.push_back(scale * cur);
      Real next = 2 * s * cur - prev;
      prev = std::move(cur);
      cur = std::move(next);
    }
  }
  return out;
}

std::vector<Real> Discretization::psi(const Real& t) const {
  PrecisionScope wide(conversion_precision(working_precision(), k_));
  const Real head = pow(t, n_ + 1L);
  std::vector<Real> out;
  out.reserve(phi_monomial_.size());
  for (const auto& m : phi_monomial_) {
    Real acc(0);
    for (std::size_t i = m.size(); i-- > 0;) {
      acc *= t;
      acc += m[i] / (static_cast<long>(n_) + static_cast<long>(i) + 1);
    }
    out.push_back(head * acc);
  }
  return out;
}

Real Discretization::weighted_derivative(const std::vector<Real>& a, const Real& x) const {
  const cheb::Interval<Real> dom{lo_, Real(1)};
  return pow(x, static_cast<long>(n_)) * w_(x) * cheb::evaluate(std::span<const Real>(a), dom, x);
}

std::vector<Real> Discretization::q_roots(const std::vector<Real>& a, double tol) const {
  const cheb::Interval<Real> dom{lo_, Real(1)};
  return cheb::roots(std::span<const Real>(a), dom, Real(0), Real(1), tol).roots;
}

lp::BoxLp<Real> Discretization::real_lp() const {
  lp::BoxLp<Real> lp(static_cast<std::size_t>(k_));
  for (const auto& x : grid_) lp.add_row(row(x));
  return lp;
}

lp::BoxLp<double> Discretization::double_lp() const {
  lp::BoxLp<double> lp(static_cast<std::size_t>(k_));
  for (const auto& x : grid_) {
    std::vector<double> r;
    for (const auto& v : row(x)) r.push_back(v.to_double());
    lp.add_row(r);
  }
  return lp;
}

Polynomial r_from_q(int n, const std::vector<Real>& q, const Real& lo) {
  PrecisionScope wide(conversion_precision(working_precision(), static_cast<int>(q.size())));
  const cheb::Interval<Real> dom{lo, Real(1)};
  std::vector<Real> m = cheb::to_monomial(std::span<const Real>(q), dom);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] /= static_cast<long>(n) + 1 + static_cast<long>(i);
  return Polynomial(Basis::monomial, std::move(m)).to(Basis::shifted_chebyshev);
}

}  // namespace detail

std::string_view to_string(Denominator d) { return d == Denominator::endpoint ? "endpoint" : "variation"; }

Denominator denominator_from_string(std::string_view text) {
  if (text == "endpoint") return Denominator::endpoint;
  if (text == "variation") return Denominator::variation;
  throw Error(ErrorKind::config, "unknown denominator: " + std::string(text));
}

std::string_view to_string(Theorem t) { return t == Theorem::markov ? "2.1" : "2.2"; }

Theorem theorem_from_string(std::string_view text) {
  if (text == "2.1") return Theorem::markov;
  if (text == "2.2") return Theorem::bernstein;
  throw Error(ErrorKind::config, "unknown theorem: " + std::string(text) + " (expected 2.1 or 2.2)");
}

void RatioProblem::validate() const {
  if (n < 1 || k < 1) throw Error(ErrorKind::precondition, "ratio problems need n >= 1 and k >= 1");
  if (k > kMaxRootDegree) {
    throw Error(ErrorKind::degree_guard, "k exceeds the root isolation limit of " + std::to_string(kMaxRootDegree));
  }
}

double chain_constant(int n, int k, const Weight& w) {
  if (w.kind == WeightKind::unit) return (10.0 * k + 2.0) / n;
  return 6.0 * std::sqrt(static_cast<double>(k) / n);
}

RatioEvaluation evaluate_ratio(const RatioProblem& problem, const Polynomial& r,
                               const PrecisionContext& ctx) {
  problem.validate();
  PrecisionScope scope(ctx.mantissa_bits);
  const IncompletePolynomial ip(problem.n, problem.k, r);
  const Polynomial q = derivative_q(ip);
  const long n = problem.n;
  const RealFunction dp = [&](const Real& x) { return pow(x, n) * q(x); };
  Real numerator = max(derivative_sup(ip, problem.weight, ctx).value,
                       sup_norm(dp, Real(0), Real(1), problem.weight, ctx).value);
  Real denominator = problem.denominator == Denominator::endpoint ? abs(ip(Real(1)))
                                                                  : total_variation(ip, ctx).value;
  if (denominator.is_zero()) {
    throw Error(ErrorKind::degenerate_normalization, "ratio denominator vanishes");
  }
  Real ratio = numerator / denominator;
  return {std::move(numerator), std::move(denominator), std::move(ratio)};
}

RatioCertificate solve_endpoint(const RatioProblem& problem_in, const PrecisionContext& ctx,
                                int grid_size) {
  problem_in.validate();
  ctx.validate();
  RatioProblem problem = problem_in;
  problem.denominator = Denominator::endpoint;
  PrecisionScope scope(ctx.mantissa_bits);

  const detail::Discretization disc(problem, grid_size);
  lp::BoxLp<Real> lp = disc.real_lp();
  lp::GeneratedLp<Real> gen(lp, 16);
  const std::vector<Real> c = disc.psi(Real(1));
  const double tol = detail::lp_tolerance(ctx.mantissa_bits);
  const double chain = chain_constant(problem.n, problem.k, problem.weight);

  RatioCertificate cert;
  cert.problem = problem;
  // A double-precision solve supplies the starting vertex; the simplex walk
  // along a dense grid is long and cheap there.
  std::vector<lp::Active> warm;
  {
    std::vector<double> cd;
    for (const auto& v : c) cd.push_back(v.to_double());
    try {
      const auto dlp = disc.double_lp();
      warm = lp::GeneratedLp<double>(dlp, 32).maximize(cd, detail::kSearchLpTol).active;
    } catch (const Error&) {
      warm.clear();
    }
  }
  for (int round = 0; round < 50; ++round) {
    auto res = gen.maximize(c, tol, warm.empty() ? nullptr : &warm);
    warm = res.active;
    if (!(res.value > 0)) {
      throw Error(ErrorKind::degenerate_normalization, "endpoint program has no positive optimum");
    }
    Polynomial r = detail::r_from_q(problem.n, res.a, disc.lo()) * (1 / res.value);
    const IncompletePolynomial ip(problem.n, problem.k, r);
    const auto eval = evaluate_ratio(problem, r, ctx);
    const auto extrema = derivative_extrema(ip, problem.weight, ctx);
    cert.chain_margin = std::max(
        cert.chain_margin, (total_variation(ip, ctx).value / (eval.numerator * chain)).to_double());

    cert.value_lower = 1 / res.value;
    cert.value_upper = eval.ratio;
    // rounding can leave the discrete optimum a few ulps above an attained ratio
    if (cert.value_lower > cert.value_upper) cert.value_lower = cert.value_upper;
    cert.gap = (cert.value_upper - cert.value_lower) / cert.value_upper;
    cert.refinements = round;
    cert.r_opt = std::move(r);
    cert.active_points.clear();
    for (const auto& e : extrema) {
      if (e.value >= eval.numerator * (1 - 1e-8)) cert.active_points.push_back(e.argmax);
    }
    std::sort(cert.active_points.begin(), cert.active_points.end());
    if (cert.gap.to_double() <= 1e-6) return cert;

    for (const auto& e : extrema) {
      if (e.value > cert.value_lower) lp.add_row(disc.row(e.argmax));
    }
  }
  throw Error(ErrorKind::non_convergence, "endpoint grid refinement did not reach a 1e-6 gap");
}

SandwichReport theorem_check(int n, int k, Theorem theorem, const PrecisionContext& ctx,
                             const VariationOptions& options) {
  if (n < 1 || k < 1) throw Error(ErrorKind::precondition, "theorem_check needs n >= 1 and k >= 1");
  if (k > kMaxVariationK) {
    throw Error(ErrorKind::degree_guard,
                "variation solver is limited to k <= " + std::to_string(kMaxVariationK));
  }
  PrecisionScope scope(ctx.mantissa_bits);
  const Weight w = theorem == Theorem::markov ? Weight::unit() : Weight::circle();
  SandwichReport rep;
  rep.theorem = theorem;
  rep.problem = {n, k, Denominator::variation, w};
  const double ratio = static_cast<double>(n) / k;
  rep.theorem_lower = theorem == Theorem::markov ? ratio / 12.0 : std::sqrt(ratio) / 6.0;
  rep.chain_lower = 1.0 / chain_constant(n, k, w);

  rep.endpoint = solve_endpoint({n, k, Denominator::endpoint, w}, ctx);
  rep.computed = solve_variation(rep.problem, ctx, options);
  rep.witness_ratio = best_witness(n, k, w, ctx).ratio;

  const Real tol(kSandwichTol);
  rep.pass = Real(rep.theorem_lower) <= rep.computed.value_upper + tol &&
             rep.computed.value_lower <= rep.witness_ratio + tol;
  rep.chain_ok = rep.computed.value_lower >= Real(rep.chain_lower) - tol &&
                 rep.computed.chain_margin <= 1 + kSandwichTol &&
                 rep.endpoint.chain_margin <= 1 + kSandwichTol;
  rep.monotone_ok = rep.computed.value_lower <= rep.endpoint.value_upper + tol;
  return rep;
}

nlohmann::json to_json(const RatioProblem& p) {
  return {{"n", p.n},
          {"k", p.k},
          {"denominator", std::string(to_string(p.denominator))},
          {"weight", std::string(to_string(p.weight.kind))}};
}

nlohmann::json to_json(const RatioCertificate& c) {
  nlohmann::json active = nlohmann::json::array();
  for (const auto& x : c.active_points) active.push_back(x.to_string());
  nlohmann::json out = {{"problem", to_json(c.problem)},
                        {"value_lower", c.value_lower.to_string()},
                        {"value_upper", c.value_upper.to_string()},
                        {"gap", c.gap.to_string()},
                        {"r_opt", to_json(c.r_opt)},
                        {"active_points", std::move(active)},
                        {"chain_margin", c.chain_margin},
                        {"refinements", c.refinements}};
  out["oracle_value"] = c.oracle_value ? nlohmann::json(*c.oracle_value) : nlohmann::json(nullptr);
  return out;
}

nlohmann::json to_json(const SandwichReport& r) {
  return {{"theorem", std::string(to_string(r.theorem))},
          {"problem", to_json(r.problem)},
          {"theorem_lower", r.theorem_lower},
          {"chain_lower", r.chain_lower},
          {"computed", to_json(r.computed)},
          {"endpoint", to_json(r.endpoint)},
          {"witness_ratio", r.witness_ratio.to_string()},
          {"pass", r.pass},
          {"chain_ok", r.chain_ok},
          {"monotone_ok", r.monotone_ok}};
}

}  // namespace turanlab
