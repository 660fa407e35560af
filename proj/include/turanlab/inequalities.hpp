#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "turanlab/extremal.hpp"
#include "turanlab/polynomial.hpp"

namespace turanlab {

inline constexpr double kMarginTol = 1e-10;
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Result of checking one inequality over a batch of inputs. The margin of a
/// trial is lhs / bound, so the inequality holds when it is at most 1.
struct LemmaReport {
  std::string lemma_id;
  int trials = 0;
  Real worst_margin{0};
  nlohmann::json worst_case;  // inputs of the trial that produced worst_margin
  int failures = 0;           // margin above 1 + kMarginTol, or a failed side condition
  int vacuous = 0;            // trials whose domain was empty
  bool bounded = true;        // false when there is no explicit constant to compare with

  bool pass() const { return failures == 0; }
  /// Folds another report into this one; ties keep the current worst case.
  void absorb(const LemmaReport& other);
};

/// |Q(x)| <= |(4x - 2(a+b)) / (b - a)|^k ||Q||_[a,b] for x outside (a, b),
/// deg Q <= k. Reported as lemma "3.1" when [a, b] = [-1, 1], "3.2" otherwise.
LemmaReport check_growth(const Polynomial& q, int k, const Real& a, const Real& b,
                         std::span<const Real> xs, const PrecisionContext& ctx);

enum class DecayForm {
  plain,   // S = x^n R, deg R <= k
  circle,  // S = x^n Q sqrt(1 - x^2), deg Q <= k - 1
};

/// Right end 1 - 10k/n of the region where |S(x)| <= x^{n/2} ||S||_[0,1].
double decay_region_end(int n, int k);

/// sup of |S(x)| / (x^{n/2} ||S||_[0,1]) over [0, 1 - 10k/n], taken over a
/// uniform grid and the exact critical points. Vacuous when the region is empty.
LemmaReport check_decay(int n, int k, const Polynomial& factor, DecayForm form,
                        const PrecisionContext& ctx, int grid_points = 4097);

/// f(x) = x^{n/2} ((4 - 4x) / delta)^k (1 - delta)^{-n}, delta = k/n.
struct FBoundRecord {
  int n = 0;
  int k = 0;
  Real edge;       // 1 - 10k/n
  Real f_at_edge;
  Real cap;        // (40 / e^4)^k
  bool monotone_ok = false;  // f nondecreasing on sampled points of [0, 1 - 2k/n]

  bool pass() const;
};

/// Needs 1 - 10k/n >= 0.
FBoundRecord f_bound_check(int n, int k, const PrecisionContext& ctx, int samples = 1025);

/// P = x^s F of degree at most nu + kappa. The zero at 0 lies on the circle, so
/// the restriction to at most kappa zeros in the open disk with diameter (0, 1)
/// concerns F alone.
struct RestrictedPolynomial {
  int nu = 0;
  int kappa = 1;
  int zero_order = 0;  // s
  Polynomial factor{Basis::monomial, {Real(1)}};
};

/// Zeros of f in |z - 1/2| < 1/2 by the winding number over 1024 boundary
/// nodes. Throws zero_restriction when a zero sits on the circle.
int disk_zero_count(const Polynomial& f, int nodes = 1024);

struct BernsteinRatio {
  Real ratio;   // sup |P'(x)| sqrt(x(1-x) / ((nu+kappa) kappa)) / ||P||_[0,1]
  Real argmax;
  int disk_zeros = 0;
};

/// Rejects the input with zero_restriction when F has more than kappa zeros in the disk.
BernsteinRatio check_bernstein_restricted(const RestrictedPolynomial& p, const PrecisionContext& ctx);

/// Ids accepted by run_lemma_suite: 3.1, 3.2, 3.4, 3.5, 3.6, 4.1.
std::vector<std::string> lemma_ids();

/// Seeded randomized suite for one lemma, with corner cases mixed in. The
/// result depends only on (lemma_id, trials, seed).
LemmaReport run_lemma_suite(std::string_view lemma_id, int trials, std::uint64_t seed,
                            const PrecisionContext& ctx);

/// Per-instance extremes feeding the constant estimates.
struct RatioSample {
  int n = 0;
  int k = 0;
  Theorem theorem = Theorem::markov;
  double variation_lower = 0.0;  // certified lower end of the variation minimum
  double endpoint_upper = 0.0;   // certified upper end of the endpoint minimum
};

struct MuntzSample {
  int nu = 0;
  int kappa = 0;
  double bernstein_ratio = 0.0;  // check_bernstein_restricted on T_{nu,kappa}
  double min_zero_slack = 0.0;   // min_j (1 - beta_j)(nu + kappa) kappa / j^2
  double t2_scaled = 0.0;        // (integral of T^2) nu / kappa
};

RatioSample ratio_sample(const SandwichReport& report);
MuntzSample muntz_sample(int nu, int kappa, const PrecisionContext& ctx);

struct ConstantEstimates {
  std::optional<double> c1_endpoint_hat;  // min variation_lower / (n/k), unit weight
  std::optional<double> c1_sqrt_hat;      // min variation_lower / sqrt(n/k), circle weight
  std::optional<double> c2_hat;           // max endpoint_upper / (n/k + 1), unit weight
  std::optional<double> c2_sqrt_hat;      // max endpoint_upper / sqrt(n/k + 1), circle weight
  std::optional<double> c3_hat;           // max Bernstein ratio
  std::optional<double> c4_hat;           // min zero-bound slack
  std::optional<double> c5_hat;           // min t2_scaled over kappa >= 2, 20 kappa <= nu
  int ratio_samples = 0;
  int muntz_samples = 0;

  /// c1 hats at least 1/12 and 1/6, every present field positive.
  bool lower_constants_ok() const;
};

/// Throws empty_sweep when both lists are empty.
ConstantEstimates estimate_constants(std::span<const RatioSample> ratios,
                                     std::span<const MuntzSample> muntz);

nlohmann::json to_json(const LemmaReport& r);
nlohmann::json to_json(const FBoundRecord& r);
nlohmann::json to_json(const ConstantEstimates& e);

}  // namespace turanlab
