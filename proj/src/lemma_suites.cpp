#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "turanlab/cheb_series.hpp"
#include "turanlab/inequalities.hpp"
#include "turanlab/muntz.hpp"

namespace turanlab {

namespace {

std::uint32_t fnv1a(std::string_view text) {
  std::uint32_t h = 2166136261u;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  return h;
}

// Every trial gets its own generator, so the outcome of trial i does not depend
// on how many draws the earlier trials made.
std::mt19937_64 trial_rng(std::uint64_t seed, std::string_view id, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), fnv1a(id),
                    static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Chebyshev series on [a, b] with the given coefficients, as a monomial polynomial.
Polynomial chebyshev_on(const std::vector<Real>& c, const Real& a, const Real& b) {
  return Polynomial(Basis::monomial, cheb::to_monomial(std::span<const Real>(c), cheb::Interval<Real>{a, b}));
}

std::vector<Real> unit_vector(int degree) {
  std::vector<Real> c(static_cast<std::size_t>(degree) + 1, Real(0));
  c.back() = Real(1);
  return c;
}

std::vector<Real> random_series(std::mt19937_64& rng, int degree) {
  std::vector<Real> c;
  for (int j = 0; j <= degree; ++j) c.emplace_back(uniform(rng, -1.0, 1.0));
  return c;
}

Polynomial monomial_power(int degree) { return Polynomial(Basis::monomial, unit_vector(degree)); }

// Growth inputs: T_d itself, x^d, or a random Chebyshev series on [a, b].
Polynomial growth_input(std::mt19937_64& rng, int trial, int degree, const Real& a, const Real& b) {
  switch ((trial / 7) % 5) {
    case 0:
      return chebyshev_on(unit_vector(degree), a, b);
    case 1:
      return monomial_power(degree);
    default:
      return chebyshev_on(random_series(rng, degree), a, b);
  }
}

LemmaReport growth_trial(std::string_view id, int trial, std::uint64_t seed, const PrecisionContext& ctx) {
  auto rng = trial_rng(seed, id, trial);
  const int degree = trial % 7;
  std::vector<Real> xs;
  Real a(-1);
  Real b(1);
  if (id == "3.1") {
    for (double x : {1.0, 1.01, 2.0, 10.0}) {
      xs.emplace_back(x);
      xs.emplace_back(-x);
    }
  } else {
    a = uniform(rng, -3.0, 3.0);
    const Real width = std::exp(uniform(rng, std::log(0.05), std::log(5.0)));
    b = a + width;
    for (double s : {0.0, 0.005, 0.5, 4.5}) {
      xs.push_back(a - width * s);
      xs.push_back(b + width * s);
    }
  }
  const Polynomial q = growth_input(rng, trial, degree, a, b);
  return check_growth(q, degree, a, b, xs, ctx);
}

// (n, k) pairs for the decay suites; (30, 3) has an empty region.
constexpr std::pair<int, int> kDecayCases[] = {{20, 1}, {40, 2}, {80, 2}, {60, 3}, {80, 4},
                                               {120, 6}, {160, 8}, {200, 4}, {400, 10}, {30, 3}};

// Decay inputs: Chebyshev polynomial of [1 - k/n, 1] (largest growth towards
// 0), 1, (1 - x)^d, or a random shifted Chebyshev series.
Polynomial decay_input(std::mt19937_64& rng, int trial, int n, int k, int degree) {
  const int kind = (trial / static_cast<int>(std::size(kDecayCases))) % 6;
  switch (kind) {
    case 0:
      return chebyshev_on(unit_vector(degree), 1 - Real(k) / n, Real(1));
    case 1:
      return Polynomial(Basis::monomial, {Real(1)});
    case 2: {
      const std::vector<Real> ones(static_cast<std::size_t>(degree), Real(1));
      return Polynomial::from_roots(ones);
    }
    default:
      return Polynomial(Basis::shifted_chebyshev, random_series(rng, degree));
  }
}

LemmaReport decay_trial(std::string_view id, int trial, std::uint64_t seed, const PrecisionContext& ctx) {
  auto rng = trial_rng(seed, id, trial);
  const auto [n, k] = kDecayCases[static_cast<std::size_t>(trial) % std::size(kDecayCases)];
  const DecayForm form = id == "3.4" ? DecayForm::plain : DecayForm::circle;
  const int degree = form == DecayForm::plain ? k : k - 1;
  return check_decay(n, k, decay_input(rng, trial, n, k, degree), form, ctx);
}

LemmaReport f_bound_trial(int trial, std::uint64_t seed, const PrecisionContext& ctx) {
  auto rng = trial_rng(seed, "4.1", trial);
  int n = 0;
  int k = 0;
  if (trial % 10 == 0) {
    k = uniform_int(rng, 1, 20);
    n = 10 * k;
  } else {
    n = uniform_int(rng, 10, 400);
    k = uniform_int(rng, 1, n / 10);
  }
  const auto rec = f_bound_check(n, k, ctx);
  LemmaReport rep;
  rep.lemma_id = "4.1";
  rep.trials = 1;
  rep.worst_margin = rec.f_at_edge / rec.cap;
  rep.worst_case = to_json(rec);
  if (!rec.pass()) rep.failures = 1;
  return rep;
}

// x^nu R with the zeros of R outside the closed disk with diameter [0, 1], or T_{nu,kappa}.
RestrictedPolynomial restricted_input(std::mt19937_64& rng, int trial, const PrecisionContext& ctx) {
  RestrictedPolynomial p;
  p.nu = uniform_int(rng, 0, 30);
  p.kappa = uniform_int(rng, 1, 4);
  p.zero_order = p.nu;
  if (trial % 5 == 0) {
    p.factor = muntz_chebyshev(p.nu, p.kappa, ctx).factor;
    return p;
  }
  const int degree = uniform_int(rng, 0, p.kappa);
  std::vector<Real> m{Real(1)};
  auto multiply = [&](const std::vector<Real>& by) {
    std::vector<Real> out(m.size() + by.size() - 1, Real(0));
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < by.size(); ++j) out[i + j] += m[i] * by[j];
    }
    m = std::move(out);
  };
  int placed = 0;
  while (placed < degree) {
    if (degree - placed >= 2 && uniform(rng, 0.0, 1.0) < 0.5) {
      const double r = uniform(rng, 0.55, 2.0);
      const double phi = uniform(rng, 0.0, 2 * std::numbers::pi);
      const double re = 0.5 + r * std::cos(phi);
      const double im = r * std::sin(phi);
      multiply({Real(re * re + im * im), Real(-2 * re), Real(1)});
      placed += 2;
    } else {
      const double root = uniform(rng, 0.0, 1.0) < 0.5 ? uniform(rng, -2.0, -0.05) : uniform(rng, 1.05, 3.0);
      multiply({Real(-root), Real(1)});
      placed += 1;
    }
  }
  p.factor = Polynomial(Basis::monomial, std::move(m));
  return p;
}

LemmaReport bernstein_trial(int trial, std::uint64_t seed, const PrecisionContext& ctx) {
  auto rng = trial_rng(seed, "3.6", trial);
  const RestrictedPolynomial p = restricted_input(rng, trial, ctx);
  LemmaReport rep;
  rep.lemma_id = "3.6";
  rep.trials = 1;
  rep.bounded = false;
  rep.worst_case = {{"nu", p.nu}, {"kappa", p.kappa}, {"zero_order", p.zero_order}, {"factor", to_json(p.factor)}};
  try {
    const auto r = check_bernstein_restricted(p, ctx);
    rep.worst_margin = r.ratio;
    rep.worst_case["x"] = r.argmax.to_string(20);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::zero_restriction) throw;
    rep.failures = 1;
    rep.worst_case["rejected"] = e.what();
  }
  return rep;
}

}  // namespace

std::vector<std::string> lemma_ids() { return {"3.1", "3.2", "3.4", "3.5", "3.6", "4.1"}; }

LemmaReport run_lemma_suite(std::string_view lemma_id, int trials, std::uint64_t seed,
                            const PrecisionContext& ctx) {
  ctx.validate();
  if (trials < 1) throw Error(ErrorKind::precondition, "a lemma suite needs at least one trial");
  const auto ids = lemma_ids();
  if (std::find(ids.begin(), ids.end(), lemma_id) == ids.end()) {
    throw Error(ErrorKind::config, "unknown lemma id: " + std::string(lemma_id));
  }
  LemmaReport total;
  total.lemma_id = std::string(lemma_id);
  for (int trial = 0; trial < trials; ++trial) {
    if (lemma_id == "3.1" || lemma_id == "3.2") {
      total.absorb(growth_trial(lemma_id, trial, seed, ctx));
    } else if (lemma_id == "3.4" || lemma_id == "3.5") {
      total.absorb(decay_trial(lemma_id, trial, seed, ctx));
    } else if (lemma_id == "3.6") {
      total.absorb(bernstein_trial(trial, seed, ctx));
    } else {
      total.absorb(f_bound_trial(trial, seed, ctx));
    }
  }
  return total;
}

RatioSample ratio_sample(const SandwichReport& report) {
  return {report.problem.n, report.problem.k, report.theorem, report.computed.value_lower.to_double(),
          report.endpoint.value_upper.to_double()};
}

MuntzSample muntz_sample(int nu, int kappa, const PrecisionContext& ctx) {
  const MuntzChebyshev mc = muntz_chebyshev(nu, kappa, ctx);
  MuntzSample s;
  s.nu = nu;
  s.kappa = kappa;
  s.bernstein_ratio = check_bernstein_restricted({nu, kappa, nu, mc.factor}, ctx).ratio.to_double();
  const auto slacks = zero_bound_check(mc);
  s.min_zero_slack = std::min_element(slacks.begin(), slacks.end())->to_double();
  PrecisionScope scope(ctx.mantissa_bits);
  s.t2_scaled = (t_squared_integral(mc, ctx) * nu / kappa).to_double();
  return s;
}

namespace {

void keep_min(std::optional<double>& slot, double v) { slot = slot ? std::min(*slot, v) : v; }
void keep_max(std::optional<double>& slot, double v) { slot = slot ? std::max(*slot, v) : v; }

}  // namespace

ConstantEstimates estimate_constants(std::span<const RatioSample> ratios, std::span<const MuntzSample> muntz) {
  if (ratios.empty() && muntz.empty()) throw Error(ErrorKind::empty_sweep, "no instances to estimate constants from");
  ConstantEstimates e;
  e.ratio_samples = static_cast<int>(ratios.size());
  e.muntz_samples = static_cast<int>(muntz.size());
  for (const auto& r : ratios) {
    const double t = static_cast<double>(r.n) / r.k;
    if (r.theorem == Theorem::markov) {
      keep_min(e.c1_endpoint_hat, r.variation_lower / t);
      keep_max(e.c2_hat, r.endpoint_upper / (t + 1));
    } else {
      keep_min(e.c1_sqrt_hat, r.variation_lower / std::sqrt(t));
      keep_max(e.c2_sqrt_hat, r.endpoint_upper / std::sqrt(t + 1));
    }
  }
  for (const auto& m : muntz) {
    keep_max(e.c3_hat, m.bernstein_ratio);
    keep_min(e.c4_hat, m.min_zero_slack);
    if (m.kappa >= 2 && 20 * m.kappa <= m.nu) keep_min(e.c5_hat, m.t2_scaled);
  }
  return e;
}

bool ConstantEstimates::lower_constants_ok() const {
  bool ok = true;
  for (const auto* slot : {&c1_endpoint_hat, &c1_sqrt_hat, &c2_hat, &c2_sqrt_hat, &c3_hat, &c4_hat, &c5_hat}) {
    if (*slot) ok = ok && **slot > 0;
  }
  if (c1_endpoint_hat) ok = ok && *c1_endpoint_hat >= 1.0 / 12 - kSandwichTol;
  if (c1_sqrt_hat) ok = ok && *c1_sqrt_hat >= 1.0 / 6 - kSandwichTol;
  return ok;
}

nlohmann::json to_json(const ConstantEstimates& e) {
  auto field = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"c1_endpoint_hat", field(e.c1_endpoint_hat)},
          {"c1_sqrt_hat", field(e.c1_sqrt_hat)},
          {"c2_hat", field(e.c2_hat)},
          {"c2_sqrt_hat", field(e.c2_sqrt_hat)},
          {"c3_hat", field(e.c3_hat)},
          {"c4_hat", field(e.c4_hat)},
          {"c5_hat", field(e.c5_hat)},
          {"ratio_samples", e.ratio_samples},
          {"muntz_samples", e.muntz_samples},
          {"lower_constants_ok", e.lower_constants_ok()}};
}

}  // namespace turanlab
