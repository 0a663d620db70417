#ifndef HK_LINALG_HPP
#define HK_LINALG_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hk/ring.hpp"

namespace hk {

template <class F>
using Matrix = std::vector<std::vector<F>>;

namespace detail {

inline std::size_t weight(const Rat &r) { return mpz_sizeinbase(r.num().get_mpz_t(), 2) + mpz_sizeinbase(r.den().get_mpz_t(), 2); }
inline std::size_t weight(const RatFunc &r) { return r.num().size() + r.den().size(); }

}  // namespace detail

/// Reduced row echelon form over a field; returns the pivot columns.
/// Pivots are chosen by smallest representation to limit expression swell.
template <class F>
std::vector<std::size_t> rref(Matrix<F> &m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::optional<std::size_t> best;
    for (std::size_t i = r; i < rows; ++i) {
      if (ring::is_zero(m[i][c])) continue;
      if (!best || detail::weight(m[i][c]) < detail::weight(m[*best][c])) best = i;
    }
    if (!best) continue;
    std::swap(m[r], m[*best]);
    F inv = F(1) / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || ring::is_zero(m[i][c])) continue;
      F f = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (!ring::is_zero(m[r][j])) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
std::size_t rank(Matrix<F> m) {
  return rref(m).size();
}

/// Determinant of a square matrix by elimination.
template <class F>
F determinant(Matrix<F> m) {
  const std::size_t n = m.size();
  F det(1);
  for (std::size_t c = 0; c < n; ++c) {
    if (m[c].size() != n) throw std::invalid_argument("determinant: matrix is not square");
    std::optional<std::size_t> best;
    for (std::size_t i = c; i < n; ++i) {
      if (ring::is_zero(m[i][c])) continue;
      if (!best || detail::weight(m[i][c]) < detail::weight(m[*best][c])) best = i;
    }
    if (!best) return F(0);
    if (*best != c) {
      std::swap(m[c], m[*best]);
      det = -det;
    }
    det = det * m[c][c];
    F inv = F(1) / m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (ring::is_zero(m[i][c])) continue;
      F f = m[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) m[i][j] = m[i][j] - f * m[c][j];
    }
  }
  return det;
}

/// Basis of {v : m v = 0}.
template <class F>
std::vector<std::vector<F>> nullspace(Matrix<F> m, std::size_t cols) {
  std::vector<std::vector<F>> basis;
  std::vector<std::size_t> piv = m.empty() ? std::vector<std::size_t>{} : rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : piv) is_pivot[p] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> v(cols, F(0));
    v[free] = F(1);
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Unique solution of m v = b, or nullopt when singular or inconsistent.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F> &m, const std::vector<F> &b) {
  const std::size_t n = m.size();
  Matrix<F> aug = m;
  for (std::size_t i = 0; i < n; ++i) aug[i].push_back(b[i]);
  auto piv = rref(aug);
  if (piv.size() != n || (n > 0 && piv.back() >= n)) return std::nullopt;
  std::vector<F> v(n, F(0));
  for (std::size_t i = 0; i < n; ++i) v[i] = aug[i][n];
  return v;
}

}  // namespace hk

#endif  // HK_LINALG_HPP
