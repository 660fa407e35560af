#pragma once

// Chebyshev-series kernels on an arbitrary interval [lo, hi].
//
// f(x) = sum_j c[j] T_j(s(x)),  s(x) = (2x - lo - hi) / (hi - lo).
//
// Everything is templated on the scalar so the same code serves the
// extended-precision core (Real) and the double-precision search loops.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "turanlab/real.hpp"

namespace turanlab::cheb {

inline double as_double(double x) { return x; }
inline double as_double(const Real& x) { return x.to_double(); }

template <class T>
struct Interval {
  T lo;
  T hi;

  T to_s(const T& x) const { return (x * 2 - lo - hi) / (hi - lo); }
  T to_x(const T& s) const { return lo + (hi - lo) * (s + 1) / 2; }
};

template <class T>
int effective_degree(std::span<const T> c) {
  for (std::size_t j = c.size(); j-- > 0;) {
    if (c[j] != 0) return static_cast<int>(j);
  }
  return -1;
}

template <class T>
T clenshaw(std::span<const T> c, const T& s) {
  if (c.empty()) return T(0);
  T b1(0);
  T b2(0);
  const T two_s = s * 2;
  for (std::size_t j = c.size(); j-- > 1;) {
    T b0 = two_s * b1;
    b0 -= b2;
    b0 += c[j];
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  T out = s * b1;
  out -= b2;
  out += c[0];
  return out;
}

template <class T>
T evaluate(std::span<const T> c, const Interval<T>& dom, const T& x) {
  return clenshaw(c, dom.to_s(x));
}

/// Coefficients of df/ds.
template <class T>
std::vector<T> derivative_s(std::span<const T> c) {
  const int d = static_cast<int>(c.size()) - 1;
  if (d <= 0) return {T(0)};
  std::vector<T> out(static_cast<std::size_t>(d), T(0));
  T next(0);  // d_{j+1}
  T next2(0); // d_{j+2}
  for (int j = d; j >= 1; --j) {
    // d_{j-1} = d_{j+1} + 2 j c_j
    T value = next2 + c[static_cast<std::size_t>(j)] * (2 * j);
    out[static_cast<std::size_t>(j - 1)] = value;
    next2 = std::move(next);
    next = std::move(value);
  }
  out[0] /= 2;
  return out;
}

/// Coefficients of df/dx on [lo, hi].
template <class T>
std::vector<T> derivative(std::span<const T> c, const Interval<T>& dom) {
  std::vector<T> out = derivative_s(c);
  const T scale = T(2) / (dom.hi - dom.lo);
  for (auto& v : out) v *= scale;
  return out;
}

/// Coefficients of s * f(s).
template <class T>
std::vector<T> times_s(std::span<const T> c) {
  std::vector<T> out(c.size() + 1, T(0));
  if (c.empty()) return out;
  out[1] += c[0];
  for (std::size_t j = 1; j < c.size(); ++j) {
    T half = c[j] / 2;
    out[j + 1] += half;
    out[j - 1] += half;
  }
  return out;
}

/// Coefficients of x * f(x) on [lo, hi].
template <class T>
std::vector<T> times_x(std::span<const T> c, const Interval<T>& dom) {
  // x = (hi - lo)/2 * s + (hi + lo)/2
  std::vector<T> out = times_s(c);
  const T half_width = (dom.hi - dom.lo) / 2;
  const T mid = (dom.hi + dom.lo) / 2;
  for (auto& v : out) v *= half_width;
  for (std::size_t j = 0; j < c.size(); ++j) out[j] += c[j] * mid;
  return out;
}

template <class T>
std::vector<T> add(std::span<const T> a, std::span<const T> b) {
  std::vector<T> out(std::max(a.size(), b.size()), T(0));
  for (std::size_t j = 0; j < a.size(); ++j) out[j] += a[j];
  for (std::size_t j = 0; j < b.size(); ++j) out[j] += b[j];
  return out;
}

template <class T>
std::vector<T> multiply(std::span<const T> a, std::span<const T> b) {
  if (a.empty() || b.empty()) return {T(0)};
  std::vector<T> out(a.size() + b.size() - 1, T(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      T half = a[i] * b[j] / 2;
      out[i + j] += half;
      out[i > j ? i - j : j - i] += half;
    }
  }
  return out;
}

/// Monomial coefficients in x of the series on [lo, hi].
template <class T>
std::vector<T> to_monomial(std::span<const T> c, const Interval<T>& dom) {
  if (c.empty()) return {T(0)};
  const T alpha = T(2) / (dom.hi - dom.lo);
  const T beta = -(dom.lo + dom.hi) / (dom.hi - dom.lo);
  std::vector<T> out(c.size(), T(0));
  std::vector<T> prev{T(1)};
  out[0] += c[0];
  if (c.size() == 1) return out;
  std::vector<T> cur{beta, alpha};
  for (std::size_t i = 0; i < 2; ++i) out[i] += c[1] * cur[i];
  for (std::size_t j = 2; j < c.size(); ++j) {
    // T_j = 2 (alpha x + beta) T_{j-1} - T_{j-2}
    std::vector<T> next(j + 1, T(0));
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i] += cur[i] * beta * 2;
      next[i + 1] += cur[i] * alpha * 2;
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    for (std::size_t i = 0; i < next.size(); ++i) out[i] += c[j] * next[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return out;
}

/// Chebyshev coefficients on [lo, hi] of a monomial-basis polynomial.
template <class T>
std::vector<T> from_monomial(std::span<const T> m, const Interval<T>& dom) {
  if (m.empty()) return {T(0)};
  std::vector<T> out(m.size(), T(0));
  std::vector<T> power{T(1)};  // x^j as a series on [lo, hi]
  for (std::size_t j = 0; j < m.size(); ++j) {
    for (std::size_t i = 0; i < power.size(); ++i) out[i] += m[j] * power[i];
    if (j + 1 < m.size()) power = times_x(std::span<const T>(power), dom);
  }
  return out;
}

template <class T>
struct RootScan {
  std::vector<T> roots;
  // Critical points where |f| is tiny but f keeps its sign: possible
  // even-order roots that a sign-change scan cannot bracket.
  std::vector<T> suspected_even;
};

namespace detail {

template <class T>
int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

template <class T>
T bisect(std::span<const T> c, const Interval<T>& dom, T a, T b, T fa, double tol) {
  for (int iter = 0; iter < 4000; ++iter) {
    if (b - a <= tol) break;
    T m = (a + b) / 2;
    if (m == a || m == b) break;
    T fm = evaluate(c, dom, m);
    const int sm = sign_of(fm);
    if (sm == 0) return m;
    if (sm == sign_of(fa)) {
      a = std::move(m);
      fa = std::move(fm);
    } else {
      b = std::move(m);
    }
  }
  return (a + b) / 2;
}

}  // namespace detail

/// Real roots in the open interval (xlo, xhi).
///
/// Critical points (roots of f', found recursively) split the interval into
/// monotone pieces; each piece holds at most one root, bracketed by a sign
/// change and polished by bisection down to `tol`.
template <class T>
RootScan<T> roots(std::span<const T> c, const Interval<T>& dom, const T& xlo, const T& xhi,
                  double tol) {
  RootScan<T> out;
  const int deg = effective_degree(c);
  if (deg <= 0) return out;
  std::span<const T> f = c.first(static_cast<std::size_t>(deg) + 1);

  std::vector<T> points;
  points.push_back(xlo);
  if (deg >= 2) {
    std::vector<T> df = derivative_s(f);
    RootScan<T> crit = roots(std::span<const T>(df), dom, xlo, xhi, tol);
    for (auto& x : crit.roots) points.push_back(std::move(x));
  } else {
    // Linear: the single root is located directly.
    T s_root = -f[0] / f[1];
    T x_root = dom.to_x(s_root);
    if (x_root > xlo && x_root < xhi) out.roots.push_back(std::move(x_root));
    return out;
  }
  points.push_back(xhi);

  std::vector<T> values;
  values.reserve(points.size());
  for (const auto& x : points) values.push_back(evaluate(f, dom, x));

  T scale(0);
  for (const auto& v : f) scale += (v < 0 ? -v : v);

  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (i > 0 && values[i] == 0) {
      out.roots.push_back(points[i]);
      continue;
    }
    const int sa = detail::sign_of(values[i]);
    const int sb = detail::sign_of(values[i + 1]);
    if (sa != 0 && sb != 0 && sa != sb) {
      out.roots.push_back(detail::bisect(f, dom, points[i], points[i + 1], values[i], tol));
    } else if (i > 0 && sa != 0 && sa == sb && sa == detail::sign_of(values[i - 1])) {
      T mag = values[i] < 0 ? -values[i] : values[i];
      if (mag <= scale * 1e-10) out.suspected_even.push_back(points[i]);
    }
  }
  return out;
}

}  // namespace turanlab::cheb
