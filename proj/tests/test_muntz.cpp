#include <cmath>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "turanlab/muntz.hpp"

using namespace turanlab;
using turanlab::testing::rel_diff;

namespace {

const PrecisionContext kCtx{};

// Monomial coefficients of T_kappa(2x - 1) by the three-term recurrence.
std::vector<Real> shifted_chebyshev_monomial(int kappa) {
  std::vector<Real> prev{Real(1)};
  std::vector<Real> cur{Real(-1), Real(2)};
  if (kappa == 0) return prev;
  for (int j = 1; j < kappa; ++j) {
    std::vector<Real> next(cur.size() + 1, Real(0));
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i] -= 2 * cur[i];
      next[i + 1] += 4 * cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// sup over [0, 1] of |x^20 (x - a)| on a uniform grid.
double grid_sup(double a) {
  constexpr int kPoints = 200000;
  static const std::vector<double> powers = [] {
    std::vector<double> p(kPoints + 1);
    for (int i = 0; i <= kPoints; ++i) p[i] = std::pow(static_cast<double>(i) / kPoints, 20);
    return p;
  }();
  double best = 0.0;
  for (int i = 0; i <= kPoints; ++i) {
    const double x = static_cast<double>(i) / kPoints;
    best = std::max(best, std::fabs(powers[i] * (x - a)));
  }
  return best;
}

// Composite 5-point Gauss-Legendre on [0, 1].
Real gauss_legendre(const RealFunction& f, int panels) {
  // Nodes of P_5 by Newton from the Chebyshev guesses.
  std::vector<Real> nodes, weights;
  for (int i = 1; i <= 5; ++i) {
    Real x = cos(pi() * (i - 0.25) / 5.25);
    Real dp(0);
    for (int iter = 0; iter < 100; ++iter) {
      Real p0(1), p1 = x;
      for (int j = 2; j <= 5; ++j) {
        Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / static_cast<long>(j);
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = 5 * (x * p1 - p0) / (x * x - 1);
      x -= p1 / dp;
    }
    weights.push_back(2 / ((1 - x * x) * dp * dp));
    nodes.push_back(std::move(x));
  }
  Real total(0);
  const Real h = Real(1) / static_cast<long>(panels);
  for (int p = 0; p < panels; ++p) {
    const Real mid = (Real(p) + 0.5) * h;
    for (int i = 0; i < 5; ++i) total += weights[i] * f(mid + nodes[i] * h / 2);
  }
  return total * h / 2;
}

}  // namespace

TEST_CASE("nu = 0 reproduces the shifted Chebyshev polynomial") {
  const auto mc = muntz_chebyshev(0, 2, kCtx);
  CHECK(abs(mc.coeffs[0] - 1) < Real(1e-60));
  CHECK(abs(mc.coeffs[1] + 8) < Real(1e-60));
  CHECK(abs(mc.coeffs[2] - 8) < Real(1e-60));
  REQUIRE(mc.zeros.size() == 2);
  CHECK(abs(mc.zeros[0] - (2 + sqrt(Real(2))) / 4) < Real(1e-14));
  CHECK(abs(mc.zeros[1] - (2 - sqrt(Real(2))) / 4) < Real(1e-14));

  for (int kappa = 1; kappa <= 8; ++kappa) {
    const auto got = muntz_chebyshev(0, kappa, kCtx);
    const auto expect = shifted_chebyshev_monomial(kappa);
    for (int j = 0; j <= kappa; ++j) {
      CHECK(abs(got.coeffs[j] - expect[j]) <= Real(1e-10));
    }
  }
}

TEST_CASE("T(1) = 1 after normalization") {
  for (auto [nu, kappa] : {std::pair{0, 3}, {5, 2}, {40, 4}, {200, 3}, {7, 10}}) {
    const auto mc = muntz_chebyshev(nu, kappa, kCtx);
    CHECK(abs(mc(Real(1)) - 1) < Real(1e-60));
    CHECK(mc.alternation_points.front() == 1.0);
  }
}

TEST_CASE("nu = 20, kappa = 1 matches a brute-force search") {
  // Among x^20 (x - a), the sup norm is minimized at a*; normalize so T(1) = 1.
  double lo = 0.0, hi = 1.0, best_a = 0.5;
  for (int level = 0; level < 4; ++level) {
    double best = 1e300;
    constexpr int kSteps = 200;
    for (int i = 0; i <= kSteps; ++i) {
      const double a = lo + (hi - lo) * i / kSteps;
      const double s = grid_sup(a);
      if (s < best) {
        best = s;
        best_a = a;
      }
    }
    const double width = (hi - lo) / kSteps;
    lo = best_a - width;
    hi = best_a + width;
  }
  const double lead = 1.0 / (1.0 - best_a);
  const auto mc = muntz_chebyshev(20, 1, kCtx);
  CHECK(std::fabs(mc.coeffs[1].to_double() - lead) < 1e-6 * lead);
  CHECK(std::fabs(mc.coeffs[0].to_double() + best_a * lead) < 1e-6 * lead);
}

TEST_CASE("zero_bound_check on the closed form") {
  const auto s = zero_bound_check(muntz_chebyshev(0, 2, kCtx));
  REQUIRE(s.size() == 2);
  CHECK(std::fabs(s[0].to_double() - 0.585786437626905) < 1e-12);
  CHECK(std::fabs(s[1].to_double() - 0.853553390593274) < 1e-12);
}

TEST_CASE("t_squared_integral") {
  CHECK(rel_diff(t_squared_integral(muntz_chebyshev(0, 1, kCtx), kCtx), Real(1) / 3) < 1e-60);
  CHECK(rel_diff(t_squared_integral(muntz_chebyshev(0, 2, kCtx), kCtx), Real(7) / 15) < 1e-60);

  const auto mc = muntz_chebyshev(60, 3, kCtx);
  const RealFunction t2 = [&](const Real& x) {
    const Real t = mc(x);
    return t * t;
  };
  CHECK(rel_diff(t_squared_integral(mc, kCtx), gauss_legendre(t2, 20000)) < 1e-12);
}

TEST_CASE("equioscillation, interlacing and localization") {
  for (auto [nu, kappa] : {std::pair{0, 5}, {1, 1}, {3, 4}, {40, 2}, {80, 4}, {160, 3}, {100, 5}, {12, 12}, {47, 6}, {60, 8}}) {
    CAPTURE(nu);
    CAPTURE(kappa);
    const auto mc = muntz_chebyshev(nu, kappa, kCtx);
    REQUIRE(mc.alternation_points.size() == static_cast<std::size_t>(kappa) + 1);
    REQUIRE(mc.zeros.size() == static_cast<std::size_t>(kappa));
    CHECK(mc.residual.to_double() <= 1e-10);
    for (std::size_t j = 0; j < mc.alternation_points.size(); ++j) {
      const Real v = mc(mc.alternation_points[j]);
      CHECK(v.sign() == (j % 2 == 0 ? 1 : -1));
      CHECK(abs(abs(v) - mc.sup_norm) <= mc.residual * mc.sup_norm + Real(1e-60));
    }
    for (std::size_t j = 1; j <= mc.zeros.size(); ++j) {
      CHECK(mc.alternation_points[j] < mc.zeros[j - 1]);
      CHECK(mc.zeros[j - 1] < mc.alternation_points[j - 1]);
    }
    if (20 * kappa <= nu) CHECK(mc.alternation_points.back() >= 1 - Real(10.0 * kappa / nu));
    for (const auto& s : zero_bound_check(mc)) CHECK(s > 0);
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(muntz_chebyshev(3, 0, kCtx), Error);
  CHECK_THROWS_AS(muntz_chebyshev(3, 65, kCtx), Error);
  CHECK_THROWS_AS(muntz_chebyshev(-1, 2, kCtx), Error);
  CHECK_THROWS_AS(qn_gamma_check(4, 2, kCtx), Error);
  CHECK_THROWS_AS(witness_upper(40, 6, Weight::unit(), kCtx), Error);
  CHECK_THROWS_AS(witness_upper(81, 6, Weight::unit(), kCtx), Error);
}

TEST_CASE("qn_gamma_check") {
  const auto rec = qn_gamma_check(3, 1, kCtx);
  CHECK(rec.m == 1);
  CHECK(std::fabs(rec.alphas[0].to_double() - 1.7071067811865476) < 1e-12);
  CHECK(std::fabs(rec.gammas[0].to_double() - 0.8535533905932738) < 1e-12);
  CHECK(rec.rhos[0] <= Real(0.8535534 + 1e-10));
  CHECK(rec.slacks[0] >= -1e-10);

  const auto ordered = qn_gamma_check(20, 4, kCtx);
  CHECK(ordered.gammas.front() < 1);
  CHECK(ordered.gammas.back() > 0);
  for (std::size_t j = 1; j < ordered.gammas.size(); ++j) CHECK(ordered.gammas[j - 1] > ordered.gammas[j]);
}

TEST_CASE("witness built from T^2") {
  const auto unit = witness_upper(80, 6, Weight::unit(), kCtx);
  CHECK(abs(unit.numerator - 1) < Real(1e-20));
  const Real t2 = t_squared_integral(muntz_chebyshev(40, 2, kCtx), kCtx);
  CHECK(rel_diff(unit.ratio, 1 / t2) < 1e-40);
  CHECK(rel_diff(unit.denominator, total_variation(unit.ip, kCtx).value) < 1e-40);

  for (auto [n, k] : {std::pair{80, 6}, {120, 6}, {160, 8}, {400, 10}}) {
    const auto circle = witness_upper(n, k, Weight::circle(), kCtx);
    CHECK(circle.numerator <= sqrt(Real(20.0 * k / n)));
  }
}

TEST_CASE("best_witness never exceeds the monomial witness") {
  for (auto [n, k] : {std::pair{20, 2}, {81, 7}, {120, 6}, {400, 9}}) {
    for (const Weight w : {Weight::unit(), Weight::circle()}) {
      const auto best = best_witness(n, k, w, kCtx);
      const auto mono = monomial_witness(n, k, w, kCtx);
      CHECK(best.ratio <= mono.ratio);
      CHECK(best.ip.n() == n);
      CHECK(best.ip.k() == k);
      const Real recomputed = derivative_sup(best.ip, w, kCtx).value / best.ip(Real(1));
      CHECK(rel_diff(recomputed, best.ratio) < 1e-20);
    }
  }
  CHECK(rel_diff(monomial_witness(10, 1, Weight::unit(), kCtx).ratio, Real(11)) < 1e-60);
}
