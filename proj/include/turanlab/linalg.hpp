#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "turanlab/errors.hpp"
#include "turanlab/real.hpp"

namespace turanlab::linalg {

inline double magnitude(double x) { return std::fabs(x); }
inline double magnitude(const Real& x) { return std::fabs(x.to_double()); }

/// Dense row-major square matrix.
template <class T>
struct Matrix {
  std::size_t n = 0;
  std::vector<T> data;

  explicit Matrix(std::size_t size = 0) : n(size), data(size * size, T(0)) {}
  T& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// Solves A x = b by Gaussian elimination with full pivoting.
/// Throws ill_conditioned when a pivot falls below rel_floor * max|A|.
template <class T>
std::vector<T> solve_full_pivot(Matrix<T> a, std::vector<T> b, double rel_floor) {
  using std::abs;
  const std::size_t n = a.n;
  std::vector<std::size_t> col(n);
  std::iota(col.begin(), col.end(), std::size_t{0});

  double scale = 0.0;
  for (const auto& v : a.data) scale = std::max(scale, magnitude(v));
  if (scale == 0.0) throw Error(ErrorKind::ill_conditioned, "singular linear system");

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    double best = -1.0;
    for (std::size_t i = k; i < n; ++i) {
      for (std::size_t j = k; j < n; ++j) {
        const double m = magnitude(a(i, j));
        if (m > best) {
          best = m;
          pr = i;
          pc = j;
        }
      }
    }
    if (!(best > rel_floor * scale)) {
      throw Error(ErrorKind::ill_conditioned, "linear system lost all significant digits");
    }
    if (pr != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pr, j));
      std::swap(b[k], b[pr]);
    }
    if (pc != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, pc));
      std::swap(col[k], col[pc]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (magnitude(a(i, k)) == 0.0) continue;
      const T f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }

  std::vector<T> y(n, T(0));
  for (std::size_t k = n; k-- > 0;) {
    T acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= a(k, j) * y[j];
    y[k] = acc / a(k, k);
  }
  std::vector<T> x(n, T(0));
  for (std::size_t k = 0; k < n; ++k) x[col[k]] = y[k];
  return x;
}

}  // namespace turanlab::linalg
