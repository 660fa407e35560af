#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

#include "turanlab/errors.hpp"
#include "turanlab/linalg.hpp"

namespace turanlab::lp {

/// One side of a two-sided constraint: sign * (g_row . a) = 1.
struct Active {
  std::size_t row = 0;
  int sign = 1;
  bool operator==(const Active&) const = default;
};

template <class T>
struct Result {
  std::vector<T> a;
  T value;
  std::vector<Active> active;  // binding constraints at the returned vertex
  int pivots = 0;
};

/// maximize c . a  subject to  |g_i . a| <= 1 for every row g_i.
///
/// Active-set primal simplex: a feasible ascent from a = 0 (or from a warm
/// vertex) to a vertex, then vertex exchanges driven by the multipliers of
/// the binding rows. Ties go to the smallest row index.
template <class T>
class BoxLp {
 public:
  explicit BoxLp(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return dim_ == 0 ? 0 : g_.size() / dim_; }

  void add_row(const std::vector<T>& g) {
    using std::abs;
    double norm = 0.0;
    T scale(0);
    for (const auto& v : g) {
      norm = std::max(norm, linalg::magnitude(v));
      if (abs(v) > scale) scale = abs(v);
    }
    g_.insert(g_.end(), g.begin(), g.end());
    row_norm_.push_back(norm);
    row_scale_.push_back(scale == T(0) ? T(1) : T(1) / scale);
  }
  const T* row(std::size_t i) const { return g_.data() + i * dim_; }

  T dot_row(std::size_t i, const std::vector<T>& v) const {
    const T* g = row(i);
    T acc(0);
    for (std::size_t j = 0; j < dim_; ++j) acc += g[j] * v[j];
    return acc;
  }

  /// `tol` is the relative tolerance for feasibility and multiplier signs.
  Result<T> maximize(const std::vector<T>& c, double tol, const std::vector<Active>* warm = nullptr,
                     int max_pivots = 5000) const {
    Result<T> out;
    std::vector<Active> active;
    std::vector<T> a(dim_, T(0));
    const bool warm_ok = warm != nullptr && warm->size() == dim_ && try_vertex(*warm, a, active, tol);
    if (!warm_ok) {
      a.assign(dim_, T(0));
      active.clear();
    }
    if (active.size() < dim_) ascend_to_vertex(c, a, active, tol, out.pivots);
    if (active.size() == dim_) exchange(c, a, active, tol, out.pivots, max_pivots);

    out.value = T(0);
    for (std::size_t j = 0; j < dim_; ++j) out.value += c[j] * a[j];
    out.a = std::move(a);
    out.active = std::move(active);
    return out;
  }

 private:
  std::size_t dim_;
  std::vector<T> g_;
  std::vector<double> row_norm_;
  std::vector<T> row_scale_;  // 1 / max_j |g_ij|

  // Rows of the active constraints, signed and scaled to unit max-norm.
  linalg::Matrix<T> basis(const std::vector<Active>& active) const {
    linalg::Matrix<T> b(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      const T* g = row(active[i].row);
      const T s = active[i].sign > 0 ? row_scale_[active[i].row] : -row_scale_[active[i].row];
      for (std::size_t j = 0; j < dim_; ++j) b(i, j) = s * g[j];
    }
    return b;
  }

  std::vector<T> scales(const std::vector<Active>& active) const {
    std::vector<T> out;
    for (const auto& act : active) out.push_back(row_scale_[act.row]);
    return out;
  }

  static linalg::Matrix<T> transpose(const linalg::Matrix<T>& m) {
    linalg::Matrix<T> t(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
      for (std::size_t j = 0; j < m.n; ++j) t(j, i) = m(i, j);
    }
    return t;
  }

  static double floor_for(double tol) { return std::max(tol * 1e-6, 1e-300); }

  // Vertex of the warm active set. When it violates some row it is scaled
  // back into the feasible region with only the most violated row binding.
  bool try_vertex(const std::vector<Active>& warm, std::vector<T>& a, std::vector<Active>& active,
                  double tol) const {
    using std::abs;
    try {
      a = linalg::solve_full_pivot(basis(warm), scales(warm), floor_for(tol));
    } catch (const Error&) {
      return false;
    }
    T worst(0);
    std::size_t worst_row = 0;
    for (std::size_t i = 0; i < rows(); ++i) {
      const T v = abs(dot_row(i, a));
      if (v > worst) {
        worst = v;
        worst_row = i;
      }
    }
    if (worst <= T(1 + tol)) {
      active = warm;
      return true;
    }
    const T gw = dot_row(worst_row, a);
    for (auto& v : a) v /= worst;
    active = {{worst_row, gw > 0 ? 1 : -1}};
    return true;
  }

  // Harris two-pass ratio test: the step bound is computed with every row
  // relaxed by `tol`, then among the rows blocking within that bound the one
  // with the largest normalized |g . d| enters. This keeps near-duplicate rows
  // of a dense grid out of the basis. With `bland` set, the smallest row index
  // among the well-conditioned candidates enters instead (anti-cycling).
  bool ratio_test(const std::vector<T>& a, const std::vector<T>& d,
                  const std::vector<Active>& active, double tol, T& step, Active& entering,
                  bool bland = false) const {
    double dnorm = 0.0;
    for (const auto& v : d) dnorm = std::max(dnorm, linalg::magnitude(v));
    std::vector<char> is_active(rows(), 0);
    for (const auto& act : active) is_active[act.row] = 1;

    struct Blocking {
      std::size_t row;
      int sign;
      T gd;
      T slack;  // sign - g . a
      double pivot;
    };
    std::vector<Blocking> blocking;
    bool bounded = false;
    T relaxed_min(0);
    for (std::size_t i = 0; i < rows(); ++i) {
      if (is_active[i]) continue;
      const T gd = dot_row(i, d);
      const double mag = linalg::magnitude(gd);
      if (mag <= tol * dnorm * row_norm_[i]) continue;
      const int sign = gd > 0 ? 1 : -1;
      T slack = T(sign) - dot_row(i, a);
      const T relaxed = (slack + T(sign * tol)) / gd;
      if (!bounded || relaxed < relaxed_min) {
        relaxed_min = relaxed;
        bounded = true;
      }
      blocking.push_back({i, sign, gd, std::move(slack), mag / row_norm_[i]});
    }
    if (!bounded) return false;
    double best_pivot = -1.0;
    for (const auto& b : blocking) {
      if (b.slack / b.gd <= relaxed_min) best_pivot = std::max(best_pivot, b.pivot);
    }
    bool chosen = false;
    for (const auto& b : blocking) {
      T t = b.slack / b.gd;
      if (t > relaxed_min) continue;
      const bool better = bland ? b.pivot >= 1e-3 * best_pivot && !chosen : b.pivot == best_pivot && !chosen;
      if (better) {
        step = t < 0 ? T(0) : t;
        entering = {b.row, b.sign};
        chosen = true;
      }
    }
    return true;
  }

  void ascend_to_vertex(const std::vector<T>& c, std::vector<T>& a, std::vector<Active>& active,
                        double tol, int& pivots) const {
    double cnorm = 0.0;
    for (const auto& v : c) cnorm = std::max(cnorm, linalg::magnitude(v));
    if (cnorm == 0.0) throw Error(ErrorKind::degenerate_normalization, "objective vanishes");

    while (active.size() < dim_) {
      // Project c onto the null space of the active normals.
      std::vector<T> d = c;
      std::vector<T> y;
      if (!active.empty()) {
        const std::size_t m = active.size();
        linalg::Matrix<T> gram(m);
        std::vector<T> rhs(m, T(0));
        // Normalized rows; y are multipliers of the normalized normals.
        std::vector<std::vector<T>> unit(m);
        for (std::size_t p = 0; p < m; ++p) {
          const T* gp = row(active[p].row);
          for (std::size_t j = 0; j < dim_; ++j) unit[p].push_back(gp[j] * row_scale_[active[p].row]);
        }
        for (std::size_t p = 0; p < m; ++p) {
          for (std::size_t q = 0; q < m; ++q) {
            T acc(0);
            for (std::size_t j = 0; j < dim_; ++j) acc += unit[p][j] * unit[q][j];
            gram(p, q) = acc;
          }
          for (std::size_t j = 0; j < dim_; ++j) rhs[p] += unit[p][j] * c[j];
        }
        y = linalg::solve_full_pivot(std::move(gram), std::move(rhs), floor_for(tol));
        for (std::size_t p = 0; p < m; ++p) {
          for (std::size_t j = 0; j < dim_; ++j) d[j] -= y[p] * unit[p][j];
        }
      }
      double dnorm = 0.0;
      for (const auto& v : d) dnorm = std::max(dnorm, linalg::magnitude(v));
      if (dnorm <= tol * cnorm) {
        // c lies in the span of the active normals: optimal unless a multiplier is negative.
        std::size_t worst = active.size();
        for (std::size_t p = 0; p < y.size(); ++p) {
          const T signed_y = active[p].sign > 0 ? y[p] : -y[p];
          if (signed_y < 0 && (worst == active.size() || signed_y < (active[worst].sign > 0 ? y[worst] : -y[worst]))) {
            worst = p;
          }
        }
        if (worst == active.size()) return;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
        continue;
      }

      T step(0);
      Active entering;
      if (!ratio_test(a, d, active, tol * 1e-3, step, entering)) {
        throw Error(ErrorKind::degenerate_normalization,
                    "linear program is unbounded: the grid does not constrain every direction");
      }
      for (std::size_t j = 0; j < dim_; ++j) a[j] += step * d[j];
      active.push_back(entering);
      ++pivots;
    }
  }

  void exchange(const std::vector<T>& c, std::vector<T>& a, std::vector<Active>& active, double tol,
                int& pivots, int max_pivots) const {
    int degenerate_run = 0;
    for (int iter = 0; iter < max_pivots; ++iter) {
      const bool bland = degenerate_run > 2 * static_cast<int>(dim_);
      // b is S B with S the row scales; mu below are multipliers of the scaled rows.
      const auto b = basis(active);
      const auto s = scales(active);
      a = linalg::solve_full_pivot(b, s, floor_for(tol));
      const auto mu = linalg::solve_full_pivot(transpose(b), c, floor_for(tol));

      double mu_max = 0.0;
      for (const auto& v : mu) mu_max = std::max(mu_max, linalg::magnitude(v));
      std::size_t leave = dim_;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (!(mu[i] < -tol * mu_max)) continue;
        if (leave == dim_) {
          leave = i;
        } else if (bland ? active[i].row < active[leave].row : mu[i] < mu[leave]) {
          leave = i;
        }
      }
      if (leave == dim_) return;

      std::vector<T> e(dim_, T(0));
      e[leave] = -s[leave];
      const auto d = linalg::solve_full_pivot(b, std::move(e), floor_for(tol));
      std::vector<Active> others = active;
      others.erase(others.begin() + static_cast<std::ptrdiff_t>(leave));
      T step(0);
      Active entering;
      if (!ratio_test(a, d, others, tol * 1e-3, step, entering, bland)) {
        throw Error(ErrorKind::degenerate_normalization,
                    "linear program is unbounded: the grid does not constrain every direction");
      }
      degenerate_run = linalg::magnitude(step) == 0.0 ? degenerate_run + 1 : 0;
      active[leave] = entering;
      ++pivots;
    }
    throw Error(ErrorKind::non_convergence, "simplex exchange exceeded its pivot budget");
  }
};

/// Row generation over a BoxLp: the program is solved on a working subset
/// (every `stride`-th row plus the last), and rows of the full set that the
/// working optimum violates are added at the local maxima of the violation
/// until it is feasible. Active sets are reported in full-row indices.
template <class T>
class GeneratedLp {
 public:
  GeneratedLp(const BoxLp<T>& full, std::size_t stride) : full_(full), work_(full.dim()) {
    for (std::size_t i = 0; i < full.rows(); i += stride) include(i);
    if (full.rows() > 0) include(full.rows() - 1);
  }

  std::size_t working_rows() const { return work_.rows(); }

  Result<T> maximize(const std::vector<T>& c, double tol, const std::vector<Active>* warm = nullptr,
                     int max_rounds = 100) {
    using std::abs;
    std::vector<Active> local;
    if (warm != nullptr) {
      for (const auto& act : *warm) local.push_back({include(act.row), act.sign});
    }
    Result<T> res = work_.maximize(c, tol, local.empty() ? nullptr : &local);
    for (int round = 0; round < max_rounds; ++round) {
      std::vector<T> viol(full_.rows());
      for (std::size_t i = 0; i < full_.rows(); ++i) viol[i] = abs(full_.dot_row(i, res.a));
      bool added = false;
      for (std::size_t i = 0; i < full_.rows(); ++i) {
        if (!(viol[i] > T(1 + tol))) continue;
        if (i > 0 && viol[i - 1] > viol[i]) continue;
        if (i + 1 < full_.rows() && viol[i + 1] >= viol[i]) continue;
        if (to_work_.count(i) != 0) continue;
        include(i);
        added = true;
      }
      if (!added) break;
      const int pivots = res.pivots;
      res = work_.maximize(c, tol, &res.active);
      res.pivots += pivots;
    }
    for (auto& act : res.active) act.row = to_full_[act.row];
    return res;
  }

 private:
  const BoxLp<T>& full_;
  BoxLp<T> work_;
  std::vector<std::size_t> to_full_;
  std::map<std::size_t, std::size_t> to_work_;

  std::size_t include(std::size_t full_row) {
    const auto it = to_work_.find(full_row);
    if (it != to_work_.end()) return it->second;
    const T* g = full_.row(full_row);
    work_.add_row(std::vector<T>(g, g + full_.dim()));
    to_full_.push_back(full_row);
    to_work_[full_row] = to_full_.size() - 1;
    return to_full_.size() - 1;
  }
};

}  // namespace turanlab::lp
