#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "turanlab/incomplete.hpp"
#include "turanlab/polynomial.hpp"

namespace turanlab {

enum class Denominator { endpoint, variation };
std::string_view to_string(Denominator d);
Denominator denominator_from_string(std::string_view text);

/// min over P in P_{n,k} of ||P' w|| / D(P), D = |P(1)| or V_0^1(P).
struct RatioProblem {
  int n = 1;
  int k = 1;
  Denominator denominator = Denominator::endpoint;
  Weight weight = Weight::unit();

  void validate() const;
};

struct RatioCertificate {
  RatioProblem problem;
  Real value_lower;
  Real value_upper;
  Polynomial r_opt{Basis::shifted_chebyshev, {Real(1)}};  // normalized so that D(P) = 1
  std::vector<Real> active_points;
  Real gap;
  // max over every candidate P seen while solving of V(P) / (C ||P' w||), with
  // C = (10k+2)/n for the unit weight and 6 sqrt(k/n) for the circle weight.
  double chain_margin = 0.0;
  int refinements = 0;
  std::optional<double> oracle_value;  // multistart descent cross-check (variation only)
};

struct RatioEvaluation {
  Real numerator;    // ||P' w||_[0,1]
  Real denominator;  // |P(1)| or V_0^1(P)
  Real ratio;
};

/// Ratio of P = x^{n+1} R evaluated from scratch (exact critical points and a
/// 2049-node scan for the numerator).
RatioEvaluation evaluate_ratio(const RatioProblem& problem, const Polynomial& r,
                               const PrecisionContext& ctx);

/// Proof-chain constant C with V_0^1(P) <= C ||P' w|| on P_{n,k}.
double chain_constant(int n, int k, const Weight& w);

RatioCertificate solve_endpoint(const RatioProblem& problem, const PrecisionContext& ctx,
                                int grid_size = 4096);

struct VariationOptions {
  int grid_size = 4096;
  int breakpoint_grid = 128;
  int levels = 3;
  int random_seeds = 16;
  int oracle_restarts = 64;
  bool run_oracle = true;
  double oracle_tolerance = 1e-3;
  std::uint64_t seed = 0x5EED;
};

inline constexpr int kMaxVariationK = 8;

RatioCertificate solve_variation(const RatioProblem& problem, const PrecisionContext& ctx,
                                 const VariationOptions& options = {});

struct DescentResult {
  double ratio = 0.0;
  std::vector<double> r;  // R in the Chebyshev basis of the clustered interval
  double interval_lo = 0.0;
  int evaluations = 0;
};

/// Multistart trust-region minimax descent over R in double precision, with its
/// own sup scan and variation quadrature. Independent of the breakpoint LP.
DescentResult descent_oracle(const RatioProblem& problem, int restarts, std::uint64_t seed);

// markov: unit weight, lower (1/12) n/k. bernstein: circle weight, lower (1/6) sqrt(n/k).
enum class Theorem { markov, bernstein };
std::string_view to_string(Theorem t);
Theorem theorem_from_string(std::string_view text);

struct SandwichReport {
  RatioProblem problem;
  Theorem theorem = Theorem::markov;
  double theorem_lower = 0.0;
  double chain_lower = 0.0;  // 1 / C
  RatioCertificate computed;  // variation min
  RatioCertificate endpoint;  // endpoint min
  Real witness_ratio;
  bool pass = false;
  bool chain_ok = false;     // computed.value_lower >= 1/C and every chain margin <= 1
  bool monotone_ok = false;  // variation <= endpoint within the certificate gaps
};

inline constexpr double kSandwichTol = 1e-9;

SandwichReport theorem_check(int n, int k, Theorem theorem, const PrecisionContext& ctx,
                             const VariationOptions& options = {});

nlohmann::json to_json(const RatioProblem& p);
nlohmann::json to_json(const RatioCertificate& c);
nlohmann::json to_json(const SandwichReport& r);

namespace detail {

/// Left end of the clustered interval [max(0, 1 - 20k/n), 1].
double cluster_start(int n, int k);

/// R (shifted Chebyshev on [0, 1]) from Q given in the Chebyshev basis of [lo, 1].
Polynomial r_from_q(int n, const std::vector<Real>& q, const Real& lo);

}  // namespace detail

}  // namespace turanlab
