#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "turanlab/cheb_series.hpp"
#include "turanlab/extremal.hpp"
#include "turanlab/linalg.hpp"

namespace turanlab {

namespace {

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre_64() {
  static const GaussLegendre rule = [] {
    constexpr int kN = 64;
    GaussLegendre gl;
    for (int i = 1; i <= kN; ++i) {
      double x = std::cos(M_PI * (i - 0.25) / (kN + 0.5));
      double dp = 1.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= kN; ++j) {
          const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = kN * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) break;
      }
      gl.nodes.push_back(x);
      gl.weights.push_back(2.0 / ((1 - x * x) * dp * dp));
    }
    return gl;
  }();
  return rule;
}

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize(Vec& v) {
  const double norm = std::sqrt(dot(v, v));
  for (auto& x : v) x /= norm;
}

// One local maximum x_j of |P' w|, as the smooth piece f_j = |P'(x_j) w(x_j)| / V.
struct Piece {
  double value = 0.0;
  Vec gradient;
};

struct Evaluation {
  double ratio = std::numeric_limits<double>::infinity();
  std::vector<Piece> pieces;
};

// Ratio ||P' w|| / V(P) in double precision, with P' = x^n Q and Q given by
// coordinates u in a basis orthonormal for x^{2n} w(x)^2 dx on [0, 1]; in
// those coordinates the numerator is comparable to |u|. Gradients of every
// local-maximum piece use the envelope property: the argmax x_j and the sign
// changes of Q are held fixed.
class RatioObjective {
 public:
  explicit RatioObjective(const RatioProblem& p)
      : n_(p.n), k_(p.k), w_(p.weight), dom_{detail::cluster_start(p.n, p.k), 1.0} {
    constexpr int kClustered = 1024;
    constexpr int kTail = 256;
    if (dom_.lo > 0) {
      for (int i = 1; i <= kTail; ++i) scan_.push_back(dom_.lo * i / (kTail + 1));
    }
    for (int i = 0; i <= kClustered; ++i) {
      scan_.push_back(dom_.lo + (1 - dom_.lo) * (1 - std::cos(M_PI * i / kClustered)) / 2);
    }
    for (double x : scan_) scale_.push_back(std::pow(x, n_) * w_(x));
    panels_ = 1 + (n_ + k_) / 96;
    build_basis();
  }

  double lo() const { return dom_.lo; }

  /// Chebyshev coefficients on [lo, 1] of Q = sum u_j p_j.
  Vec q_of(const Vec& u) const {
    Vec q(static_cast<std::size_t>(k_), 0.0);
    for (int j = 0; j < k_; ++j) {
      for (std::size_t i = 0; i < basis_q_[j].size(); ++i) q[i] += u[j] * basis_q_[j][i];
    }
    return q;
  }

  /// R in the Chebyshev basis of [lo, 1], from (n+1) R + x R' = Q.
  Vec r_of(const Vec& u) const {
    const Vec q = q_of(u);
    auto m = cheb::to_monomial(std::span<const double>(q), dom_);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] /= n_ + 1.0 + static_cast<double>(i);
    return cheb::from_monomial(std::span<const double>(m), dom_);
  }

  Evaluation operator()(const Vec& u, bool with_gradients) {
    ++evaluations;
    const Vec q = q_of(u);
    Evaluation out;

    std::vector<double> t{0.0};
    for (double x : cheb::roots(std::span<const double>(q), dom_, 0.0, 1.0, 1e-15).roots) t.push_back(x);
    t.push_back(1.0);
    double v = 0.0;
    Vec grad_v(static_cast<std::size_t>(k_), 0.0);
    for (std::size_t s = 0; s + 1 < t.size(); ++s) {
      const double seg = integral(q, t[s], t[s + 1]);
      v += std::fabs(seg);
      if (with_gradients) {
        const double sigma = seg < 0 ? -1.0 : 1.0;
        for (int i = 0; i < k_; ++i) grad_v[i] += sigma * integral(basis_q_[i], t[s], t[s + 1]);
      }
    }
    if (!(v > 0)) return out;

    double sup = 0.0;
    for (const double x : local_maxima(q)) {
      const double h = std::pow(x, n_) * w_(x);
      const double qx = q_at(q, x);
      const double num = std::fabs(h * qx);
      sup = std::max(sup, num);
      if (!with_gradients) continue;
      Piece piece;
      piece.value = num / v;
      const double sign = qx < 0 ? -1.0 : 1.0;
      for (int i = 0; i < k_; ++i) {
        const double dnum = sign * h * q_at(basis_q_[i], x);
        piece.gradient.push_back((dnum * v - num * grad_v[i]) / (v * v));
      }
      out.pieces.push_back(std::move(piece));
    }
    out.ratio = sup / v;
    return out;
  }

  int evaluations = 0;

 private:
  int n_;
  int k_;
  Weight w_;
  cheb::Interval<double> dom_;
  Vec scan_;
  Vec scale_;
  int panels_;
  std::vector<Vec> basis_q_;

  // Discrete Stieltjes procedure on a Gauss-Legendre discretization of the
  // measure; the orthonormal p_j are carried as Chebyshev coefficients.
  void build_basis() {
    const auto& gl = gauss_legendre_64();
    Vec nodes, weights;
    auto add_panels = [&](double a, double b, int count) {
      const double h = (b - a) / count;
      for (int p = 0; p < count; ++p) {
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
          const double x = a + (p + 0.5) * h + gl.nodes[i] * h / 2;
          nodes.push_back(x);
          weights.push_back(gl.weights[i] * h / 2 * std::pow(x, 2 * n_) * w_(x) * w_(x));
        }
      }
    };
    if (dom_.lo > 0) add_panels(0.0, dom_.lo, 2);
    add_panels(dom_.lo, 1.0, 4);

    auto inner = [&](const Vec& a, const Vec& b, bool times_x) {
      double s = 0.0;
      for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * a[i] * b[i] * (times_x ? nodes[i] : 1.0);
      return s;
    };
    Vec prev_vals(nodes.size(), 0.0), vals(nodes.size(), 1.0);
    Vec prev_coeffs, coeffs{1.0};
    double beta = 0.0;
    for (int j = 0; j < k_; ++j) {
      const double norm = std::sqrt(inner(vals, vals, false));
      for (auto& v : vals) v /= norm;
      for (auto& c : coeffs) c /= norm;
      basis_q_.push_back(coeffs);
      const double alpha = inner(vals, vals, true);
      Vec next_vals(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        next_vals[i] = (nodes[i] - alpha) * vals[i] - beta * prev_vals[i];
      }
      Vec next_coeffs = cheb::times_x(std::span<const double>(coeffs), dom_);
      for (std::size_t i = 0; i < coeffs.size(); ++i) next_coeffs[i] -= alpha * coeffs[i];
      for (std::size_t i = 0; i < prev_coeffs.size(); ++i) next_coeffs[i] -= beta * prev_coeffs[i];
      beta = std::sqrt(inner(next_vals, next_vals, false));
      prev_vals = std::move(vals);
      prev_coeffs = std::move(coeffs);
      vals = std::move(next_vals);
      coeffs = std::move(next_coeffs);
    }
  }

  double q_at(const Vec& q, double x) const { return cheb::evaluate(std::span<const double>(q), dom_, x); }

  // Grid local maxima of |x^n w Q| refined by golden-section search.
  Vec local_maxima(const Vec& q) const {
    Vec vals(scan_.size());
    for (std::size_t i = 0; i < scan_.size(); ++i) vals[i] = std::fabs(scale_[i] * q_at(q, scan_[i]));
    auto f = [&](double x) { return std::fabs(std::pow(x, n_) * w_(x) * q_at(q, x)); };
    const double g = (std::sqrt(5.0) - 1) / 2;
    Vec out;
    for (std::size_t i = 0; i < scan_.size(); ++i) {
      if (vals[i] == 0.0) continue;
      if (i > 0 && vals[i - 1] > vals[i]) continue;
      if (i + 1 < scan_.size() && vals[i + 1] >= vals[i]) continue;
      if (i + 1 == scan_.size() && f(1.0) >= f(1.0 - 1e-9)) {
        out.push_back(1.0);
        continue;
      }
      double a = scan_[i == 0 ? 0 : i - 1];
      double b = scan_[std::min(i + 1, scan_.size() - 1)];
      double x1 = b - g * (b - a), x2 = a + g * (b - a);
      double f1 = f(x1), f2 = f(x2);
      for (int iter = 0; iter < 70; ++iter) {
        if (f1 < f2) {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + g * (b - a);
          f2 = f(x2);
        } else {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - g * (b - a);
          f1 = f(x1);
        }
      }
      out.push_back(f1 >= f2 ? x1 : x2);
    }
    return out;
  }

  double integral(const Vec& q, double a, double b) const {
    const auto& gl = gauss_legendre_64();
    double total = 0.0;
    const double h = (b - a) / panels_;
    for (int p = 0; p < panels_; ++p) {
      const double mid = a + (p + 0.5) * h;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double x = mid + gl.nodes[i] * h / 2;
        total += gl.weights[i] * std::pow(x, n_) * q_at(q, x);
      }
    }
    return total * h / 2;
  }
};

// Minimizer of max_j (f_j + g_j . s) + |s|^2 / (2 delta), through its dual
// over the simplex, solved exactly by enumerating supports.
Vec minimax_step(const std::vector<Piece>& pieces, double delta) {
  const std::size_t m = pieces.size();
  const std::size_t d = pieces.front().gradient.size();
  std::vector<Vec> gram(m, Vec(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) gram[i][j] = dot(pieces[i].gradient, pieces[j].gradient);
  }
  double best = -std::numeric_limits<double>::infinity();
  Vec best_lambda;
  const std::size_t subsets = std::size_t{1} << m;
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) s.push_back(i);
    }
    // delta G^T G lambda + mu 1 = f, 1^T lambda = 1
    const std::size_t size = s.size() + 1;
    linalg::Matrix<double> a(size);
    Vec rhs(size, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) a(i, j) = delta * gram[s[i]][s[j]];
      a(i, s.size()) = 1.0;
      a(s.size(), i) = 1.0;
      rhs[i] = pieces[s[i]].value;
    }
    rhs[s.size()] = 1.0;
    Vec sol;
    try {
      sol = linalg::solve_full_pivot(a, rhs, 1e-13);
    } catch (const Error&) {
      continue;
    }
    bool feasible = true;
    for (std::size_t i = 0; i < s.size(); ++i) feasible = feasible && sol[i] >= 0;
    if (!feasible) continue;
    Vec lambda(m, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) lambda[s[i]] = sol[i];
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      lin += lambda[i] * pieces[i].value;
      for (std::size_t j = 0; j < m; ++j) quad += lambda[i] * lambda[j] * gram[i][j];
    }
    const double dual = lin - delta * quad / 2;
    if (dual > best) {
      best = dual;
      best_lambda = std::move(lambda);
    }
  }
  Vec step(d, 0.0);
  if (best_lambda.empty()) return step;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) step[j] -= delta * best_lambda[i] * pieces[i].gradient[j];
  }
  return step;
}

double model_max(const std::vector<Piece>& pieces, const Vec& step) {
  double out = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) out = std::max(out, p.value + dot(p.gradient, step));
  return out;
}

// Trust-region descent on the unit sphere of basis coordinates.
std::pair<Vec, double> descend(RatioObjective& objective, Vec r) {
  normalize(r);
  Evaluation cur = objective(r, true);
  double delta = 0.1;
  for (int iter = 0; iter < 400 && delta > 1e-14 && !cur.pieces.empty(); ++iter) {
    const Vec step = minimax_step(cur.pieces, delta);
    const double predicted = cur.ratio - model_max(cur.pieces, step);
    if (!(predicted > 1e-15 * cur.ratio)) break;
    Vec trial = r;
    for (std::size_t j = 0; j < r.size(); ++j) trial[j] += step[j];
    normalize(trial);
    Evaluation next = objective(trial, true);
    const double rho = (cur.ratio - next.ratio) / predicted;
    if (rho > 0.1) {
      r = std::move(trial);
      cur = std::move(next);
      if (rho > 0.75) delta = std::min(delta * 2, 1.0);
    } else {
      delta /= 4;
    }
  }
  return {r, cur.ratio};
}

}  // namespace

DescentResult descent_oracle(const RatioProblem& problem, int restarts, std::uint64_t seed) {
  problem.validate();
  RatioObjective objective(problem);
  DescentResult out;
  out.interval_lo = objective.lo();
  out.ratio = std::numeric_limits<double>::infinity();
  if (problem.k == 1) {
    out.r = objective.r_of({1.0});
    out.ratio = objective({1.0}, false).ratio;
    out.evaluations = objective.evaluations;
    return out;
  }
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL ^ (static_cast<std::uint64_t>(problem.n) << 16) ^
                      static_cast<std::uint64_t>(problem.k));
  std::normal_distribution<double> gauss;
  for (int s = 0; s < restarts; ++s) {
    Vec u(static_cast<std::size_t>(problem.k));
    for (auto& x : u) x = gauss(rng);
    auto [x, v] = descend(objective, u);
    if (v < out.ratio) {
      out.ratio = v;
      out.r = objective.r_of(x);
    }
  }
  out.evaluations = objective.evaluations;
  return out;
}

}  // namespace turanlab
