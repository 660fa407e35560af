#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <utility>

#include "extremal_setup.hpp"
#include "turanlab/extremal.hpp"

namespace turanlab {

namespace {

using detail::Discretization;

// L(P) = sum_i sigma_i (P(t_{i+1}) - P(t_i)) with alternating sigma, as a
// linear functional on the phi-coefficients of Q.
template <class T>
std::vector<T> breakpoint_functional(const std::vector<std::vector<T>>& psi_at) {
  const std::size_t segments = psi_at.size() - 1;
  std::vector<T> c(psi_at.front().size(), T(0));
  for (std::size_t i = 0; i < segments; ++i) {
    const double sigma = i % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += sigma * (psi_at[i + 1][j] - psi_at[i][j]);
  }
  return c;
}

// Double-precision search over breakpoint configurations.
class BreakpointSearch {
 public:
  BreakpointSearch(const Discretization& disc, double chain)
      : disc_(disc), lp_(disc.double_lp()), gen_(lp_, 32), chain_(chain), dom_{disc.lo().to_double(), 1.0} {
    psi_one_ = psi(1.0);
  }

  struct Candidate {
    std::vector<double> t;  // interior breakpoints, increasing
    double value = -1.0;    // F(t)
    std::vector<double> a;
    std::vector<lp::Active> active;
  };

  Candidate evaluate(const std::vector<double>& t) {
    std::vector<std::vector<double>> at;
    at.push_back(std::vector<double>(static_cast<std::size_t>(disc_.k()), 0.0));
    for (double x : t) at.push_back(psi(x));
    at.push_back(psi_one_);
    const auto c = breakpoint_functional(at);
    lp::Result<double> res;
    try {
      res = gen_.maximize(c, detail::kSearchLpTol, warm_.empty() ? nullptr : &warm_);
    } catch (const Error&) {
      // A failed double solve only drops this configuration from the search.
      return Candidate{t, -1.0, {}, {}};
    }
    if (res.active.size() == static_cast<std::size_t>(disc_.k())) warm_ = res.active;
    Candidate out{t, res.value, std::move(res.a), std::move(res.active)};
    track_chain(out.a);
    return out;
  }

  std::vector<double> q_roots(const std::vector<double>& a) const {
    return cheb::roots(std::span<const double>(a), dom_, 0.0, 1.0, 1e-13).roots;
  }

  // t <- sign changes of the optimal Q until F stops increasing.
  Candidate fixed_point(const std::vector<double>& t0) {
    Candidate cur = evaluate(t0);
    for (int iter = 0; iter < 40 && !cur.a.empty(); ++iter) {
      auto t = q_roots(cur.a);
      if (t == cur.t) break;
      Candidate next = evaluate(t);
      if (!(next.value > cur.value * (1 + 1e-15))) {
        if (next.value >= cur.value) cur = std::move(next);
        break;
      }
      cur = std::move(next);
    }
    return cur;
  }

  double chain_margin() const { return chain_margin_; }

 private:
  const Discretization& disc_;
  lp::BoxLp<double> lp_;
  lp::GeneratedLp<double> gen_;
  double chain_;
  cheb::Interval<double> dom_;
  std::vector<double> psi_one_;
  std::vector<lp::Active> warm_;
  double chain_margin_ = 0.0;

  std::vector<double> psi(double t) const {
    std::vector<double> out;
    for (const auto& v : disc_.psi(Real(t))) out.push_back(v.to_double());
    return out;
  }

  // V(P) / (C * grid max |P' w|) for the LP optimizer; the grid max bounds
  // the true sup from below, so the recorded margin is conservative.
  void track_chain(const std::vector<double>& a) {
    double sup = 0.0;
    for (std::size_t i = 0; i < lp_.rows(); ++i) sup = std::max(sup, std::fabs(lp_.dot_row(i, a)));
    if (sup == 0.0) return;
    std::vector<double> pts{0.0};
    for (double x : q_roots(a)) pts.push_back(x);
    pts.push_back(1.0);
    double prev = 0.0, v = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const auto p = psi(pts[i]);
      double val = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) val += p[j] * a[j];
      v += std::fabs(val - prev);
      prev = val;
    }
    chain_margin_ = std::max(chain_margin_, v / (chain_ * sup));
  }
};

std::vector<double> chebyshev_placement(int m, double from) {
  std::vector<double> t;
  for (int i = m; i >= 1; --i) {
    const double s = std::cos(M_PI * (2 * i - 1) / (2.0 * m));
    t.push_back(from + (1 - from) * (1 + s) / 2);
  }
  return t;
}

std::vector<double> breakpoint_grid(double lo, int size) {
  std::vector<double> g;
  for (int i = 1; i <= size; ++i) g.push_back(lo + (1 - lo) * (1 - std::cos(M_PI * i / (size + 1))) / 2);
  return g;
}

}  // namespace

RatioCertificate solve_variation(const RatioProblem& problem_in, const PrecisionContext& ctx,
                                 const VariationOptions& options) {
  problem_in.validate();
  ctx.validate();
  if (problem_in.k > kMaxVariationK) {
    throw Error(ErrorKind::degree_guard,
                "variation solver is limited to k <= " + std::to_string(kMaxVariationK));
  }
  RatioProblem problem = problem_in;
  problem.denominator = Denominator::variation;
  PrecisionScope scope(ctx.mantissa_bits);
  const int k = problem.k;
  const double chain = chain_constant(problem.n, k, problem.weight);

  const Discretization disc(problem, options.grid_size);
  BreakpointSearch search(disc, chain);

  // Seeds: the endpoint optimizer, Chebyshev placements at several scales, random subsets.
  BreakpointSearch::Candidate best = search.fixed_point({});
  auto consider = [&](const std::vector<double>& t) {
    auto cand = search.fixed_point(t);
    if (cand.value > best.value) best = std::move(cand);
  };
  const double lo = disc.lo().to_double();
  for (int m = 1; m < k; ++m) {
    for (double scale : {1.0, 0.5, 0.25, 0.125}) consider(chebyshev_placement(m, 1 - scale * (1 - lo)));
  }
  const auto bgrid = breakpoint_grid(lo, options.breakpoint_grid);
  std::mt19937_64 rng(options.seed ^ (static_cast<std::uint64_t>(problem.n) << 20) ^
                      (static_cast<std::uint64_t>(k) << 8) ^
                      static_cast<std::uint64_t>(problem.weight.kind));
  if (k > 1) {
    for (int s = 0; s < options.random_seeds; ++s) {
      const int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k - 1));
      std::vector<double> t;
      std::sample(bgrid.begin(), bgrid.end(), std::back_inserter(t), m, rng);
      std::sort(t.begin(), t.end());
      consider(t);
    }
  }

  // Local moves on the incumbent: insert a breakpoint anywhere on the grid,
  // move one breakpoint over a shrinking window, drop one breakpoint.
  auto try_config = [&](std::vector<double> t) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    auto cand = search.evaluate(t);
    if (cand.value > best.value * (1 + 1e-12)) {
      cand = search.fixed_point(cand.t);
      if (cand.value > best.value) best = std::move(cand);
    }
  };
  double width = (1 - lo) / 4;
  for (int level = 0; level < options.levels && k > 1; ++level, width /= 8) {
    if (static_cast<int>(best.t.size()) < k - 1) {
      const auto base = best.t;
      for (double x : bgrid) {
        if (std::find(base.begin(), base.end(), x) != base.end()) continue;
        auto t = base;
        t.push_back(x);
        try_config(std::move(t));
      }
    }
    for (std::size_t i = 0; i < best.t.size(); ++i) {
      const double left = i == 0 ? 0.0 : best.t[i - 1];
      const double right = i + 1 == best.t.size() ? 1.0 : best.t[i + 1];
      const double from = std::max(left, best.t[i] - width);
      const double to = std::min(right, best.t[i] + width);
      for (int j = 1; j < options.breakpoint_grid && i < best.t.size(); ++j) {
        auto t = best.t;
        t[i] = from + (to - from) * j / options.breakpoint_grid;
        if (t[i] <= left || t[i] >= right) continue;
        try_config(std::move(t));
      }
      if (i < best.t.size()) {
        auto t = best.t;
        t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
        try_config(std::move(t));
      }
    }
  }

  // Certificate at full precision: polish the breakpoints, refine the grid.
  lp::BoxLp<Real> lp = disc.real_lp();
  lp::GeneratedLp<Real> gen(lp, 16);
  const double tol = detail::lp_tolerance(ctx.mantissa_bits);
  std::vector<lp::Active> warm = best.active;
  std::vector<Real> t;
  for (double x : best.t) t.emplace_back(x);
  const std::vector<Real> psi_one = disc.psi(Real(1));
  auto solve_at = [&](const std::vector<Real>& bp) {
    std::vector<std::vector<Real>> at;
    at.push_back(std::vector<Real>(static_cast<std::size_t>(k), Real(0)));
    for (const auto& x : bp) at.push_back(disc.psi(x));
    at.push_back(psi_one);
    auto res = gen.maximize(breakpoint_functional(at), tol, warm.size() == static_cast<std::size_t>(k) ? &warm : nullptr);
    if (res.active.size() == static_cast<std::size_t>(k)) warm = res.active;
    return res;
  };

  RatioCertificate cert;
  cert.problem = problem;
  for (int round = 0; round < 50; ++round) {
    auto res = solve_at(t);
    for (int iter = 0; iter < 30; ++iter) {
      auto roots = disc.q_roots(res.a, ctx.root_tol);
      bool same = roots.size() == t.size();
      for (std::size_t i = 0; same && i < t.size(); ++i) same = abs(roots[i] - t[i]) <= Real(1e-30);
      if (same) break;
      auto next = solve_at(roots);
      if (!(next.value > res.value)) break;
      t = std::move(roots);
      res = std::move(next);
    }
    if (!(res.value > 0)) {
      throw Error(ErrorKind::degenerate_normalization, "variation program has no positive optimum");
    }

    Polynomial r = detail::r_from_q(problem.n, res.a, disc.lo());
    const IncompletePolynomial raw(problem.n, k, r);
    const Real v = total_variation(raw, ctx).value;
    r = r * (1 / v);
    const IncompletePolynomial ip(problem.n, k, r);
    const auto eval = evaluate_ratio(problem, r, ctx);
    const auto extrema = derivative_extrema(ip, problem.weight, ctx);
    cert.chain_margin = std::max({cert.chain_margin, search.chain_margin(),
                                  (eval.denominator / (eval.numerator * chain)).to_double()});

    cert.value_lower = 1 / max(res.value, v);
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
    if (cert.gap.to_double() <= 1e-6) break;
    if (round == 49) throw Error(ErrorKind::non_convergence, "variation grid refinement did not reach a 1e-6 gap");
    // Normalized so V = 1: the grid bound on |P' w| is value_lower.
    for (const auto& e : extrema) {
      if (e.value > cert.value_lower) lp.add_row(disc.row(e.argmax));
    }
  }

  if (options.run_oracle) {
    const DescentResult d = descent_oracle(problem, options.oracle_restarts, options.seed);
    cert.oracle_value = d.ratio;
    const double ours = cert.value_upper.to_double();
    if (std::fabs(d.ratio - ours) > options.oracle_tolerance * ours) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "breakpoint value " << ours << " and descent value " << d.ratio
          << " disagree (n=" << problem.n << ", k=" << k << ", weight=" << to_string(problem.weight.kind) << ")";
      throw Error(ErrorKind::oracle_disagreement, msg.str());
    }
  }
  return cert;
}

}  // namespace turanlab
