#include "turanlab/muntz.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "turanlab/linalg.hpp"

namespace turanlab {

namespace {

// B_0(x), ..., B_kappa(x) for the shifted Chebyshev basis on [0, 1].
std::vector<Real> basis_values(const Real& x, int kappa) {
  std::vector<Real> b;
  b.reserve(static_cast<std::size_t>(kappa) + 1);
  const Real t = 2 * x - 1;
  b.emplace_back(1);
  if (kappa >= 1) b.push_back(t);
  for (int j = 1; j < kappa; ++j) b.push_back(2 * t * b[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j - 1)]);
  return b;
}

struct Extremum {
  Real x;
  Real value;  // signed T(x)
};

std::vector<Real> initial_references(int nu, int kappa) {
  const Real p = pi();
  const Real s = nu == 0 ? Real(1) : min(Real(1), Real(10L * kappa) / static_cast<long>(nu));
  std::vector<Real> refs;
  for (int i = 0; i <= kappa; ++i) {
    // nu >= 1 keeps the references away from the forced zero at 0.
    const Real angle = nu == 0 ? p * i / static_cast<long>(kappa) : p * i / (kappa + 0.5);
    const Real u = (1 + cos(angle)) / 2;
    refs.push_back(1 - (1 - u) * s);
  }
  return refs;
}

Polynomial solve_alternation(const std::vector<Real>& refs, int nu, int kappa, long bits) {
  const std::size_t dim = static_cast<std::size_t>(kappa) + 1;
  linalg::Matrix<Real> a(dim);
  std::vector<Real> rhs(dim, Real(0));
  for (std::size_t i = 0; i < dim; ++i) {
    const Real xnu = pow(refs[i], static_cast<long>(nu));
    const auto b = basis_values(refs[i], kappa);
    Real row_max(1);
    for (std::size_t j = 0; j < dim - 1; ++j) {
      a(i, j) = xnu * b[j];
      row_max = max(row_max, abs(a(i, j)));
    }
    a(i, dim - 1) = Real(i % 2 == 0 ? -1 : 1);
    rhs[i] = -xnu * b[dim - 1];
    for (std::size_t j = 0; j < dim; ++j) a(i, j) /= row_max;
    rhs[i] /= row_max;
  }
  auto sol = linalg::solve_full_pivot(std::move(a), std::move(rhs), std::ldexp(1.0, static_cast<int>(-bits + 8)));
  std::vector<Real> c(sol.begin(), sol.end() - 1);
  c.emplace_back(1);
  return Polynomial(Basis::shifted_chebyshev, std::move(c));
}

// Every local extremum of T = x^nu p on [0, 1] (endpoints included when relevant).
std::vector<Extremum> extrema(const Polynomial& p, int nu, const PrecisionContext& ctx) {
  const Polynomial m = nu == 0 ? p.derivative() : p * Real(nu) + p.derivative().times_x();
  std::vector<Real> xs;
  if (!m.is_zero()) xs = real_roots_q(m, ctx).roots;
  xs.emplace_back(1);
  if (nu == 0) xs.emplace_back(0);
  std::sort(xs.begin(), xs.end(), [](const Real& a, const Real& b) { return a > b; });
  std::vector<Extremum> out;
  for (auto& x : xs) {
    if (!out.empty() && out.back().x == x) continue;
    Real v = pow(x, static_cast<long>(nu)) * p(x);
    out.push_back({std::move(x), std::move(v)});
  }
  return out;
}

// One extremum per sign run, trimmed to kappa + 1 points keeping the global maximum.
std::vector<Extremum> select_alternating(const std::vector<Extremum>& ext, int kappa) {
  std::vector<Extremum> runs;
  for (const auto& e : ext) {
    if (e.value.is_zero()) continue;
    if (!runs.empty() && runs.back().value.sign() == e.value.sign()) {
      if (abs(e.value) > abs(runs.back().value)) runs.back() = e;
    } else {
      runs.push_back(e);
    }
  }
  const std::size_t want = static_cast<std::size_t>(kappa) + 1;
  while (runs.size() > want) {
    if (abs(runs.front().value) < abs(runs.back().value)) {
      runs.erase(runs.begin());
    } else {
      runs.pop_back();
    }
  }
  return runs;
}

Real bisect_zero(const Polynomial& p, Real lo, Real hi, double tol) {
  int slo = p(lo).sign();
  for (int iter = 0; iter < 2000 && hi - lo > tol; ++iter) {
    Real mid = (lo + hi) / 2;
    const int s = p(mid).sign();
    if (s == 0) return mid;
    if (s == slo) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  return (lo + hi) / 2;
}

// Coefficients of T^2 as a polynomial in x (times x^{2 nu}).
std::vector<Real> square_coeffs(const std::vector<Real>& a) {
  std::vector<Real> conv(2 * a.size() - 1, Real(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) conv[i + j] += a[i] * a[j];
  }
  return conv;
}

long guard_bits(long bits, int kappa) { return conversion_precision(bits, 2 * kappa); }

}  // namespace

Real MuntzChebyshev::operator()(const Real& x) const {
  return pow(x, static_cast<long>(nu)) * factor(x);
}

namespace {

MuntzChebyshev exchange(int nu, int kappa, std::vector<Real> refs, const PrecisionContext& ctx) {
  const long bits = ctx.mantissa_bits;
  PrecisionContext fine = ctx;
  fine.root_tol = std::min(ctx.root_tol, std::ldexp(1.0, static_cast<int>(-bits / 2)));
  const double target = std::ldexp(1.0, static_cast<int>(-bits / 2));

  double previous = 1.0;
  for (int iter = 1; iter <= 100; ++iter) {
    Polynomial p = solve_alternation(refs, nu, kappa, bits);
    const auto ext = extrema(p, nu, fine);
    const auto picked = select_alternating(ext, kappa);
    if (picked.size() != static_cast<std::size_t>(kappa) + 1) {
      throw Error(ErrorKind::ill_conditioned,
                  "exchange step lost alternation (nu=" + std::to_string(nu) +
                      ", kappa=" + std::to_string(kappa) + "); retry with more mantissa bits");
    }
    Real sup(0);
    for (const auto& e : ext) sup = max(sup, abs(e.value));
    Real low = abs(picked.front().value);
    for (const auto& e : picked) low = min(low, abs(e.value));
    const Real residual = (sup - low) / sup;

    refs.clear();
    for (const auto& e : picked) refs.push_back(e.x);

    const double r = residual.to_double();
    const bool converged = r <= target || (r <= 1e-10 && r > 0.5 * previous);
    if (converged) {
      const Real scale = p(Real(1));
      MuntzChebyshev mc;
      mc.nu = nu;
      mc.kappa = kappa;
      mc.factor = p * (1 / scale);
      mc.alternation_points = refs;
      mc.residual = residual;
      mc.sup_norm = sup / abs(scale);
      mc.iterations = iter;
      for (int j = 1; j <= kappa; ++j) {
        mc.zeros.push_back(bisect_zero(mc.factor, refs[static_cast<std::size_t>(j)],
                                       refs[static_cast<std::size_t>(j - 1)], ctx.root_tol));
      }
      {
        PrecisionScope wide(guard_bits(bits, kappa));
        mc.coeffs = mc.factor.to(Basis::monomial).coeffs();
      }
      mc.coeffs.resize(static_cast<std::size_t>(kappa) + 1, Real(0));
      return mc;
    }
    previous = r;
  }
  throw Error(ErrorKind::non_convergence,
              "exchange iteration stagnated for nu=" + std::to_string(nu) + ", kappa=" +
                  std::to_string(kappa) + "; retry with " + std::to_string(2 * bits) + " mantissa bits");
}

}  // namespace

MuntzChebyshev muntz_chebyshev(int nu, int kappa, const PrecisionContext& ctx) {
  ctx.validate();
  if (kappa < 1 || kappa > kMaxKappa || nu < 0) {
    throw Error(ErrorKind::precondition, "muntz_chebyshev needs nu >= 0 and 1 <= kappa <= 64");
  }
  PrecisionScope scope(ctx.mantissa_bits);
  try {
    return exchange(nu, kappa, initial_references(nu, kappa), ctx);
  } catch (const Error& e) {
    if (nu <= 1 || e.kind() != ErrorKind::ill_conditioned) throw;
  }
  // Continuation in nu: the alternation set moves little from nu - 1 to nu.
  MuntzChebyshev mc = exchange(1, kappa, initial_references(1, kappa), ctx);
  for (int step = 2; step <= nu; ++step) mc = exchange(step, kappa, mc.alternation_points, ctx);
  return mc;
}

std::vector<Real> zero_bound_check(const MuntzChebyshev& mc) {
  std::vector<Real> out;
  const long scale = static_cast<long>(mc.nu + mc.kappa) * mc.kappa;
  for (std::size_t j = 1; j <= mc.zeros.size(); ++j) {
    const long jj = static_cast<long>(j * j);
    out.push_back((1 - mc.zeros[j - 1]) * scale / jj);
  }
  return out;
}

Real t_squared_integral(const MuntzChebyshev& mc, const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionScope wide(guard_bits(ctx.mantissa_bits, mc.kappa));
  const auto conv = square_coeffs(mc.coeffs);
  Real total(0);
  for (std::size_t m = 0; m < conv.size(); ++m) total += conv[m] / (2L * mc.nu + static_cast<long>(m) + 1);
  return total;
}

QnCheckRecord qn_gamma_check(int n, int k, const PrecisionContext& ctx) {
  if (k < 1 || n - 2 * k < 1) {
    throw Error(ErrorKind::precondition, "qn_gamma_check needs k >= 1 and n - 2k >= 1");
  }
  PrecisionScope scope(ctx.mantissa_bits);
  const MuntzChebyshev mc = muntz_chebyshev(n - k, k, ctx);
  QnCheckRecord rec;
  rec.n = n;
  rec.k = k;
  rec.m = n - 2 * k;
  const Real ratio = Real(rec.m) / k;
  for (int j = 1; j <= k; ++j) {
    Real alpha = 1 + cos(pi() * (2 * j - 1) / (4L * k));
    Real gamma = (alpha - (1 - ratio)) / (1 + ratio);
    Real rho = 2 * mc.zeros[static_cast<std::size_t>(j - 1)] - 1;
    rec.slacks.push_back(gamma - rho);
    rec.alphas.push_back(std::move(alpha));
    rec.gammas.push_back(std::move(gamma));
    rec.rhos.push_back(std::move(rho));
  }
  return rec;
}

WitnessResult witness_upper(int n, int k, const Weight& w, const PrecisionContext& ctx) {
  if (n < 2 || n % 2 != 0 || k < 6 || k % 2 != 0) {
    throw Error(ErrorKind::precondition, "witness_upper needs even n and even k >= 6");
  }
  const int nu = n / 2;
  const int kappa = (k - 2) / 2;
  if (20 * kappa > nu) {
    throw Error(ErrorKind::precondition, "witness_upper needs 20 kappa <= nu");
  }
  PrecisionScope scope(ctx.mantissa_bits);
  const MuntzChebyshev mc = muntz_chebyshev(nu, kappa, ctx);
  Polynomial r(Basis::monomial, {Real(0)});
  {
    PrecisionScope wide(guard_bits(ctx.mantissa_bits, kappa));
    auto conv = square_coeffs(mc.coeffs);
    for (std::size_t m = 0; m < conv.size(); ++m) conv[m] /= static_cast<long>(n) + static_cast<long>(m) + 1;
    r = Polynomial(Basis::monomial, std::move(conv)).to(Basis::shifted_chebyshev);
  }
  IncompletePolynomial ip(n, k, r);
  Real numerator = derivative_sup(ip, w, ctx).value;
  Real denominator = ip(Real(1));
  Real ratio = numerator / denominator;
  return {std::move(ip), std::move(numerator), std::move(denominator), std::move(ratio)};
}

WitnessResult monomial_witness(int n, int k, const Weight& w, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.mantissa_bits);
  IncompletePolynomial ip(n, k, Polynomial::constant(Real(1)));
  Real numerator = derivative_sup(ip, w, ctx).value;
  Real ratio = numerator;
  return {std::move(ip), std::move(numerator), Real(1), std::move(ratio)};
}

WitnessResult best_witness(int n, int k, const Weight& w, const PrecisionContext& ctx) {
  WitnessResult best = monomial_witness(n, k, w, ctx);
  const int n_even = n + n % 2;
  const int k_even = k - k % 2;
  if (k_even >= 6 && 20 * ((k_even - 2) / 2) <= n_even / 2) {
    WitnessResult t = witness_upper(n_even, k_even, w, ctx);
    if (t.ratio < best.ratio) {
      // x^{n_even+1} R = x^{n+1} (x^{n_even-n} R).
      Polynomial r = n_even > n ? t.ip.r().times_x() : t.ip.r();
      best = {IncompletePolynomial(n, k, std::move(r)), t.numerator, t.denominator, t.ratio};
    }
  }
  return best;
}

nlohmann::json to_json(const MuntzChebyshev& mc, const Real& t2_integral) {
  auto strings = [](const std::vector<Real>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(x.to_string());
    return a;
  };
  return {{"nu", mc.nu},
          {"kappa", mc.kappa},
          {"coeffs", strings(mc.coeffs)},
          {"alternation_points", strings(mc.alternation_points)},
          {"zeros", strings(mc.zeros)},
          {"residual", mc.residual.to_string()},
          {"t2_integral", t2_integral.to_string()}};
}

}  // namespace turanlab
