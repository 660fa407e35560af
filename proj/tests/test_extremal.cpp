#include <cmath>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "turanlab/cheb_series.hpp"
#include "turanlab/extremal.hpp"
#include "turanlab/muntz.hpp"

using namespace turanlab;
using turanlab::testing::rel_diff;

namespace {

const PrecisionContext kCtx{};

RatioProblem problem(int n, int k, Denominator d, Weight w = Weight::unit()) { return {n, k, d, w}; }

// Certificates are shared between test cases; each solve costs up to a few seconds.
const RatioCertificate& cached(int n, int k, Denominator d, WeightKind kind) {
  static std::map<std::tuple<int, int, Denominator, WeightKind>, RatioCertificate> cache;
  const auto key = std::make_tuple(n, k, d, kind);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const Weight w = kind == WeightKind::unit ? Weight::unit() : Weight::circle();
    const RatioProblem p = problem(n, k, d, w);
    it = cache.emplace(key, d == Denominator::endpoint ? solve_endpoint(p, kCtx) : solve_variation(p, kCtx)).first;
  }
  return it->second;
}

void check_certificate(const RatioCertificate& c) {
  PrecisionScope scope(kCtx.mantissa_bits);
  CHECK(c.value_lower <= c.value_upper);
  CHECK(c.gap >= 0);
  CHECK(c.gap.to_double() <= 1e-6);
  const auto eval = evaluate_ratio(c.problem, c.r_opt, kCtx);
  CHECK(rel_diff(eval.ratio, c.value_upper) < 1e-10);
  // normalized so that the denominator is 1
  CHECK(rel_diff(eval.denominator, Real(1)) < 1e-20);
  REQUIRE(!c.active_points.empty());
  for (const auto& x : c.active_points) {
    CHECK(x > 0);
    CHECK(x <= 1);
  }
}

}  // namespace

TEST_CASE("chain constants") {
  CHECK(chain_constant(40, 2, Weight::unit()) == doctest::Approx(22.0 / 40));
  CHECK(chain_constant(36, 4, Weight::circle()) == doctest::Approx(6.0 / 3.0));
}

TEST_CASE("endpoint, k = 1: P = x^{n+1} gives n + 1") {
  for (int n : {1, 10, 12, 100}) {
    const auto c = solve_endpoint(problem(n, 1, Denominator::endpoint), kCtx);
    CHECK(rel_diff(c.value_lower, Real(n + 1)) < 1e-12);
    CHECK(rel_diff(c.value_upper, Real(n + 1)) < 1e-12);
    check_certificate(c);
  }
}

TEST_CASE("endpoint, k = 1, circle weight: 11 (10/11)^5 / sqrt(11) at n = 10") {
  PrecisionScope scope(256);
  const Real expected = 11 * pow(Real(10) / 11, 5L) / sqrt(Real(11));
  const auto c = solve_endpoint(problem(10, 1, Denominator::endpoint, Weight::circle()), kCtx);
  CHECK(c.value_lower <= expected * (1 + Real(1e-12)));
  CHECK(c.value_upper >= expected * (1 - Real(1e-12)));
  CHECK(rel_diff(c.value_upper, expected) < 1e-12);
  // grid maximization of 11 x^10 sqrt(1 - x^2)
  double grid = 0.0;
  for (int i = 0; i <= 1000000; ++i) {
    const double x = i / 1e6;
    grid = std::max(grid, 11 * std::pow(x, 10) * std::sqrt(1 - x * x));
  }
  CHECK(rel_diff(c.value_upper.to_double(), grid) < 1e-9);
}

TEST_CASE("endpoint, n = 40, k = 2: between the proof-chain bound and the witness") {
  const auto& c = cached(40, 2, Denominator::endpoint, WeightKind::unit);
  check_certificate(c);
  CHECK(c.value_lower >= Real(40.0 / 22));
  const auto w = best_witness(40, 2, Weight::unit(), kCtx);
  CHECK(c.value_upper <= w.ratio);
  // regression golden recorded at bring-up
  CHECK(rel_diff(c.value_upper.to_double(), 15.637473644917798) < 1e-6);
  CHECK(c.chain_margin <= 1.0);
}

TEST_CASE("variation, k = 1 equals the endpoint value") {
  for (int n : {1, 10, 40}) {
    for (Weight w : {Weight::unit(), Weight::circle()}) {
      const auto v = solve_variation(problem(n, 1, Denominator::variation, w), kCtx);
      const auto e = solve_endpoint(problem(n, 1, Denominator::endpoint, w), kCtx);
      CHECK(rel_diff(v.value_upper, e.value_upper) < 1e-12);
      check_certificate(v);
    }
  }
}

TEST_CASE("variation, n = 40, k = 2: breakpoint and descent values agree") {
  for (WeightKind kind : {WeightKind::unit, WeightKind::circle}) {
    const auto& v = cached(40, 2, Denominator::variation, kind);
    check_certificate(v);
    REQUIRE(v.oracle_value.has_value());
    CHECK(rel_diff(*v.oracle_value, v.value_upper.to_double()) < 1e-4);
    const auto& e = cached(40, 2, Denominator::endpoint, kind);
    CHECK(v.value_lower <= e.value_upper);
  }
  // regression golden recorded at bring-up
  CHECK(rel_diff(cached(40, 2, Denominator::variation, WeightKind::unit).value_upper.to_double(),
                 15.009384673307499) < 1e-6);
}

TEST_CASE("variation stays below the endpoint value") {
  for (auto [n, k] : {std::pair{20, 3}, std::pair{20, 4}, std::pair{36, 4}}) {
    for (WeightKind kind : {WeightKind::unit, WeightKind::circle}) {
      const auto& v = cached(n, k, Denominator::variation, kind);
      const auto& e = cached(n, k, Denominator::endpoint, kind);
      check_certificate(v);
      check_certificate(e);
      CHECK(v.value_lower <= e.value_upper);
      CHECK(v.chain_margin <= 1.0);
    }
  }
}

TEST_CASE("ratio is invariant under scaling R") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Polynomial r(Basis::shifted_chebyshev, testing::random_coeffs(rng, 3));
    for (Denominator d : {Denominator::endpoint, Denominator::variation}) {
      const auto p = problem(25, 3, d, Weight::circle());
      const auto a = evaluate_ratio(p, r, kCtx);
      const auto b = evaluate_ratio(p, r * Real(17), kCtx);
      CHECK(rel_diff(a.ratio, b.ratio) < 1e-12);
    }
  }
}

TEST_CASE("no random member of P_{n,k} beats a certified lower bound") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(0x5EED);
  const std::vector<std::tuple<int, int, Denominator, WeightKind>> cases{
      {40, 2, Denominator::endpoint, WeightKind::unit},   {40, 2, Denominator::variation, WeightKind::unit},
      {40, 2, Denominator::variation, WeightKind::circle}, {20, 3, Denominator::variation, WeightKind::unit},
      {20, 4, Denominator::endpoint, WeightKind::circle},  {36, 4, Denominator::variation, WeightKind::circle},
  };
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& [n, k, d, kind] = cases[static_cast<std::size_t>(trial) % cases.size()];
    const auto& c = cached(n, k, d, kind);
    // perturbations of the optimizer and unrelated random R
    std::vector<Real> coeffs = c.r_opt.coeffs();
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double size = trial % 2 == 0 ? 1e-3 : 10.0;
    for (auto& v : coeffs) v += size * u(rng);
    const Polynomial r(Basis::shifted_chebyshev, coeffs);
    try {
      const auto eval = evaluate_ratio(c.problem, r, kCtx);
      CHECK(eval.ratio >= c.value_lower * (1 - Real(1e-12)));
      ++checked;
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::degenerate_normalization);
    }
  }
  CHECK(checked >= 90);
}

TEST_CASE("descent oracle") {
  SUBCASE("k = 1 closed form") {
    const auto d = descent_oracle(problem(12, 1, Denominator::variation), 4, 1);
    CHECK(d.ratio == doctest::Approx(13.0).epsilon(1e-12));
  }
  SUBCASE("deterministic for a fixed seed") {
    const auto a = descent_oracle(problem(20, 3, Denominator::variation), 16, 99);
    const auto b = descent_oracle(problem(20, 3, Denominator::variation), 16, 99);
    CHECK(a.ratio == b.ratio);
    CHECK(a.r == b.r);
  }
  SUBCASE("its ratio is the true ratio of its R") {
    PrecisionScope scope(256);
    const auto p = problem(20, 3, Denominator::variation, Weight::circle());
    const auto d = descent_oracle(p, 16, 5);
    std::vector<Real> r(d.r.begin(), d.r.end());
    const cheb::Interval<Real> dom{Real(d.interval_lo), Real(1)};
    const Polynomial rp(Basis::monomial, cheb::to_monomial(std::span<const Real>(r), dom));
    const auto eval = evaluate_ratio(p, rp.to(Basis::shifted_chebyshev), kCtx);
    CHECK(rel_diff(eval.ratio.to_double(), d.ratio) < 1e-8);
  }
}

TEST_CASE("theorem checks") {
  SUBCASE("n = 12, k = 1, unit weight") {
    const auto r = theorem_check(12, 1, Theorem::markov, kCtx);
    CHECK(r.theorem_lower == doctest::Approx(1.0));
    CHECK(rel_diff(r.computed.value_upper, Real(13)) < 1e-12);
    CHECK(rel_diff(r.witness_ratio, Real(13)) < 1e-12);
    CHECK(r.pass);
    CHECK(r.chain_ok);
    CHECK(r.monotone_ok);
  }
  SUBCASE("n = 40, k = 2, unit weight") {
    const auto r = theorem_check(40, 2, Theorem::markov, kCtx);
    CHECK(r.theorem_lower == doctest::Approx(40.0 / 24));
    CHECK(Real(r.theorem_lower) <= r.computed.value_upper);
    CHECK(r.pass);
    CHECK(r.chain_ok);
    CHECK(r.monotone_ok);
  }
  SUBCASE("n = 36, k = 4, circle weight") {
    const auto r = theorem_check(36, 4, Theorem::bernstein, kCtx);
    CHECK(r.theorem_lower == doctest::Approx(0.5));
    CHECK(Real(r.theorem_lower) <= r.computed.value_upper);
    CHECK(r.pass);
    CHECK(r.chain_ok);
    CHECK(r.monotone_ok);
    const auto j = to_json(r);
    CHECK(j["theorem"] == "2.2");
    CHECK(j["computed"]["problem"]["weight"] == "circle");
    CHECK(j["pass"] == true);
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(solve_endpoint(problem(0, 1, Denominator::endpoint), kCtx), Error);
  try {
    solve_variation(problem(40, 9, Denominator::variation), kCtx);
    FAIL("expected a degree guard error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degree_guard);
  }
  try {
    theorem_check(40, 9, Theorem::markov, kCtx);
    FAIL("expected a degree guard error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degree_guard);
  }
  CHECK(theorem_from_string("2.1") == Theorem::markov);
  CHECK(theorem_from_string(to_string(Theorem::bernstein)) == Theorem::bernstein);
  CHECK_THROWS_AS(theorem_from_string("2.3"), Error);
  CHECK(denominator_from_string("variation") == Denominator::variation);
}
