#include <cmath>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "turanlab/polynomial.hpp"

using namespace turanlab;
using turanlab::testing::coeff_distance;
using turanlab::testing::rel_diff;

namespace {

const PrecisionContext kCtx{};

Polynomial mono(std::vector<Real> c) { return Polynomial(Basis::monomial, std::move(c)); }

}  // namespace

TEST_CASE("eval in both bases") {
  const Polynomial p = mono({Real(-1), Real(0), Real(2)});
  CHECK(eval(p, Real(0.5), kCtx) == -0.5);

  const Real x = cos(pi() / 8);
  CHECK(abs(eval(p, x, kCtx) - cos(pi() / 4)) < Real(1e-70));
  CHECK(abs(eval(p.to(Basis::shifted_chebyshev), x, kCtx) - cos(pi() / 4)) < Real(1e-70));

  CHECK(eval(mono({Real(0), Real(1)}), Real(3), kCtx) == 3.0);
  CHECK(eval(Polynomial(Basis::shifted_chebyshev, {Real(0), Real(1)}), Real(3), kCtx) == 5.0);
}

TEST_CASE("degree ignores trailing zeros; zero polynomial has sentinel degree") {
  CHECK(mono({Real(1), Real(2), Real(0), Real(0)}).degree() == 1);
  CHECK(mono({Real(0)}).degree() == kZeroPolynomialDegree);
  CHECK(mono({Real(0)}).is_zero());
  CHECK_THROWS_AS(Polynomial(Basis::monomial, {}), Error);
}

TEST_CASE("basis round trip stays within 2^(-bits+10)") {
  std::mt19937_64 rng(0x5EED);
  for (long bits : {128L, 256L}) {
    PrecisionScope scope(bits);
    const double tol = std::ldexp(1.0, static_cast<int>(-bits + 10));
    for (int degree : {0, 1, 5, 17, 40, 64}) {
      auto c = turanlab::testing::random_coeffs(rng, degree + 1);
      const Polynomial m(Basis::monomial, c);
      CHECK(coeff_distance(m.to(Basis::shifted_chebyshev).to(Basis::monomial).coeffs(), c) <= tol);
      const Polynomial s(Basis::shifted_chebyshev, c);
      CHECK(coeff_distance(s.to(Basis::monomial).to(Basis::shifted_chebyshev).coeffs(), c) <= tol);
    }
  }
}

TEST_CASE("arithmetic agrees across bases") {
  std::mt19937_64 rng(7);
  const Polynomial a = turanlab::testing::random_chebyshev(rng, 4);
  const Polynomial b = turanlab::testing::random_chebyshev(rng, 3);
  const Polynomial am = a.to(Basis::monomial);
  const Polynomial bm = b.to(Basis::monomial);
  for (double xd : {0.0, 0.3, 0.77, 1.0}) {
    const Real x(xd);
    CHECK(rel_diff((a * b)(x), (am * bm)(x)) < 1e-60);
    CHECK(rel_diff((a - b)(x), (am - bm)(x)) < 1e-60);
    CHECK(rel_diff(a.derivative()(x), am.derivative()(x)) < 1e-60);
    CHECK(rel_diff(a.times_x()(x), x * am(x)) < 1e-60);
  }
}

TEST_CASE("real_roots_q examples") {
  auto r = real_roots_q(mono({Real(2), Real(-3)}), kCtx);
  REQUIRE(r.roots.size() == 1);
  CHECK(abs(r.roots[0] - Real(2) / 3) < Real(1e-14));

  CHECK(real_roots_q(mono({Real(1), Real(0), Real(1)}), kCtx).roots.empty());
}

TEST_CASE("planted roots are recovered") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> scale(0.5, 20.0);
  const std::vector<Real> planted{Real(0.2), Real(0.5), Real(0.9)};
  for (int trial = 0; trial < 20; ++trial) {
    const Basis basis = trial % 2 ? Basis::monomial : Basis::shifted_chebyshev;
    const Polynomial q = Polynomial::from_roots(planted, basis) * Real(trial % 3 ? scale(rng) : -scale(rng));
    const auto found = real_roots_q(q, kCtx);
    REQUIRE(found.roots.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(abs(found.roots[i] - planted[i]) <= Real(1e-14));
    CHECK_FALSE(found.flagged());
  }
}

TEST_CASE("roots of a high-degree Chebyshev polynomial") {
  // T_40 on [0,1]: zeros (1 + cos((2j-1) pi / 80)) / 2.
  std::vector<Real> c(41, Real(0));
  c[40] = 1;
  const auto found = real_roots_q(Polynomial(Basis::shifted_chebyshev, c), kCtx);
  REQUIRE(found.roots.size() == 40);
  for (int j = 1; j <= 40; ++j) {
    const Real expect = (1 + cos(pi() * (2 * j - 1) / 80)) / 2;
    CHECK(abs(found.roots[static_cast<std::size_t>(40 - j)] - expect) <= Real(1e-14));
  }
}

TEST_CASE("double roots are flagged or reported, never produce sign changes twice") {
  const Polynomial q = Polynomial::from_roots(std::vector<Real>{Real(0.5), Real(0.5)}, Basis::monomial);
  const auto found = real_roots_q(q, kCtx);
  const bool seen = found.flagged() || found.roots.size() == 1;
  CHECK(seen);
  CHECK(found.roots.size() <= 1);
}

TEST_CASE("degree guard") {
  std::vector<Real> c(66, Real(0));
  c[65] = 1;
  CHECK_THROWS_AS(real_roots_q(Polynomial(Basis::monomial, c), kCtx), Error);
  try {
    real_roots_q(Polynomial(Basis::monomial, c), kCtx);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degree_guard);
  }
}

TEST_CASE("sup_norm examples") {
  const RealFunction x20 = [](const Real& x) { return pow(x, 20L); };
  auto s = sup_norm(x20, Real(0), Real(1), Weight::unit(), kCtx);
  CHECK(s.value == 1.0);
  CHECK(s.argmax == 1.0);

  const RealFunction twice = [](const Real& x) { return 2 * x; };
  s = sup_norm(twice, Real(0), Real(1), Weight::circle(), kCtx);
  CHECK(rel_diff(s.value, Real(1)) < 1e-20);
  CHECK(abs(s.argmax - 1 / sqrt(Real(2))) < Real(1e-11));
}

TEST_CASE("sup_norm matches a dense grid") {
  std::mt19937_64 rng(3);
  std::vector<Polynomial> cases{Polynomial(Basis::shifted_chebyshev, {Real(0), Real(0), Real(1)})};
  for (int i = 0; i < 3; ++i) cases.push_back(turanlab::testing::random_chebyshev(rng, 7));
  for (const auto& p : cases) {
    for (const Weight w : {Weight::unit(), Weight::circle()}) {
      const Polynomial pm = p.to(Basis::monomial);
      std::vector<double> c;
      for (const auto& v : pm.coeffs()) c.push_back(v.to_double());
      double grid = 0.0;
      constexpr int kPoints = 1000000;
      for (int i = 0; i <= kPoints; ++i) {
        const double x = static_cast<double>(i) / kPoints;
        double acc = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) acc = acc * x + c[j];
        grid = std::max(grid, std::fabs(acc * w(x)));
      }
      const RealFunction f = [&](const Real& x) { return p(x); };
      const double got = sup_norm(f, Real(0), Real(1), w, kCtx).value.to_double();
      CHECK(rel_diff(got, grid) < 1e-10);
      CHECK(got >= grid * (1 - 1e-15));
    }
  }
}

TEST_CASE("sup_norm is scale equivariant and agrees with poly_sup") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial p = turanlab::testing::random_chebyshev(rng, 1 + trial);
    const Real c(trial % 2 ? -3.75 : 1e-3 * (trial + 1));
    const RealFunction f = [&](const Real& x) { return p(x); };
    const RealFunction g = [&](const Real& x) { return c * p(x); };
    const Real base = sup_norm(f, Real(0), Real(1), Weight::unit(), kCtx).value;
    const Real scaled = sup_norm(g, Real(0), Real(1), Weight::unit(), kCtx).value;
    CHECK(rel_diff(scaled, abs(c) * base) <= kCtx.sup_tol);
    CHECK(rel_diff(poly_sup(p, Real(0), Real(1), kCtx).value, base) <= 1e-12);
  }
}

TEST_CASE("json round trip keeps full precision") {
  const Polynomial p(Basis::shifted_chebyshev, {Real(1) / 3, Real(-2), Real(0)});
  const auto j = to_json(p);
  CHECK(j.at("basis") == "shifted-chebyshev");
  CHECK(j.at("degree") == 1);
  const Polynomial back = polynomial_from_json(j);
  CHECK(back.coeffs()[0] == p.coeffs()[0]);
  CHECK(to_json(Polynomial(Basis::monomial, {Real(0)})).at("degree").is_null());
}

TEST_CASE("precision context validation") {
  PrecisionContext ctx;
  ctx.mantissa_bits = 32;
  CHECK_THROWS_AS(ctx.validate(), Error);
  ctx = PrecisionContext{};
  ctx.root_tol = 0;
  CHECK_THROWS_AS(ctx.validate(), Error);
}
