#ifndef HK_PDO_HPP
#define HK_PDO_HPP

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hk/ring.hpp"

namespace hk {

/// Formal pseudo-differential operator sum_i a_i D^i over a differential
/// ring R. Coefficients below floor() are unknown; an exact operator (a
/// finite sum known completely) has no floor.
template <DifferentialRing R>
class Pdo {
public:
  static constexpr int kNoFloor = INT_MIN / 4;

  Pdo() = default;
  explicit Pdo(std::map<int, R> coeffs, std::optional<int> floor = std::nullopt)
      : c_(std::move(coeffs)), floor_(floor ? *floor : kNoFloor) {
    std::erase_if(c_, [this](const auto &kv) { return kv.first < floor_ || ring::is_zero(kv.second); });
  }

  /// r D^k
  static Pdo term(int k, const R &r) { return Pdo(std::map<int, R>{{k, r}}); }
  static Pdo D(int k = 1) { return term(k, R(1)); }
  static Pdo scalar(const R &r) { return term(0, r); }

  const std::map<int, R> &coeffs() const { return c_; }
  bool exact() const { return floor_ == kNoFloor; }
  /// Lowest known degree; only meaningful when !exact().
  int floor() const { return floor_; }
  std::optional<int> floor_opt() const { return exact() ? std::nullopt : std::optional<int>(floor_); }
  bool is_zero() const { return c_.empty(); }

  /// Highest degree with a nonzero coefficient.
  int top() const {
    if (c_.empty()) throw std::logic_error("Pdo: zero operator has no top degree");
    return c_.rbegin()->first;
  }
  /// Upper bound for the degree of any term, known or not.
  int effective_top() const {
    int t = c_.empty() ? kNoFloor : c_.rbegin()->first;
    if (!exact()) t = std::max(t, floor_ - 1);
    return t;
  }
  int bottom() const {
    if (c_.empty()) throw std::logic_error("Pdo: zero operator has no bottom degree");
    return c_.begin()->first;
  }

  R coeff(int k) const {
    if (!exact() && k < floor_) throw std::out_of_range("Pdo: coefficient of D^" + std::to_string(k) + " below floor");
    auto it = c_.find(k);
    return it == c_.end() ? R(0) : it->second;
  }

  /// Forgets everything below degree f.
  Pdo truncated(int f) const {
    Pdo r = *this;
    r.floor_ = std::max(floor_, f);
    std::erase_if(r.c_, [&](const auto &kv) { return kv.first < r.floor_; });
    return r;
  }

  /// Applies f to every coefficient.
  template <class F>
  auto map(F f) const {
    using S = std::decay_t<decltype(f(std::declval<R>()))>;
    std::map<int, S> out;
    for (const auto &[k, c] : c_) out.emplace(k, f(c));
    return Pdo<S>(std::move(out), floor_opt());
  }

  friend Pdo operator+(const Pdo &a, const Pdo &b) { return combine(a, b, false); }
  friend Pdo operator-(const Pdo &a, const Pdo &b) { return combine(a, b, true); }
  friend Pdo operator-(const Pdo &a) {
    Pdo r = a;
    for (auto &[k, c] : r.c_) c = -c;
    return r;
  }
  /// Left multiplication by a coefficient.
  friend Pdo operator*(const R &r, const Pdo &a) {
    std::map<int, R> out;
    for (const auto &[k, c] : a.c_) out.emplace(k, r * c);
    return Pdo(std::move(out), a.floor_opt());
  }

  /// Exact structural equality, floors included.
  friend bool operator==(const Pdo &a, const Pdo &b) { return a.floor_ == b.floor_ && a.c_ == b.c_; }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      const auto &[k, c] = *it;
      if (!first) os << " + ";
      first = false;
      bool one = c == R(1);
      if (k == 0)
        os << ring::str(c);
      else if (one)
        os << "D^" << k;
      else
        os << factor_str(ring::str(c)) << "*D^" << k;
    }
    if (first) os << "0";
    if (!exact()) os << " + O(D^" << floor_ - 1 << ")";
    return os.str();
  }

  friend std::ostream &operator<<(std::ostream &os, const Pdo &p) { return os << p.str(); }

  // A sum used as a factor needs parentheses; RatFunc text is already grouped.
  static std::string factor_str(const std::string &s) {
    return s.find(' ') != std::string::npos && s.front() != '(' ? "(" + s + ")" : s;
  }

private:
  std::map<int, R> c_;
  int floor_ = kNoFloor;

  static Pdo combine(const Pdo &a, const Pdo &b, bool subtract) {
    int f = std::max(a.floor_, b.floor_);
    std::map<int, R> out;
    for (const auto &[k, c] : a.c_)
      if (k >= f) out.emplace(k, c);
    for (const auto &[k, c] : b.c_) {
      if (k < f) continue;
      auto [it, inserted] = out.try_emplace(k, subtract ? -c : c);
      if (!inserted) it->second = subtract ? it->second - c : it->second + c;
    }
    return Pdo(std::move(out), f == kNoFloor ? std::nullopt : std::optional<int>(f));
  }
};

namespace detail {

/// Lazily computed iterated derivatives of the coefficients of an operator.
template <class R>
class DerivCache {
public:
  const R &get(int j, int l, const R &base) {
    auto &v = cache_[j];
    if (v.empty()) v.push_back(base);
    while (static_cast<int>(v.size()) <= l) {
      if (ring::is_zero(v.back())) return zero_;
      v.push_back(ring::derive(v.back()));
    }
    return v[static_cast<std::size_t>(l)];
  }
  /// True once the l-th derivative is known to vanish.
  bool vanishes(int j, int l) {
    auto it = cache_.find(j);
    if (it == cache_.end()) return false;
    const auto &v = it->second;
    if (static_cast<int>(v.size()) > l) return ring::is_zero(v[static_cast<std::size_t>(l)]);
    return !v.empty() && ring::is_zero(v.back());
  }
  void clear(int j) { cache_.erase(j); }

private:
  std::map<int, std::vector<R>> cache_;
  R zero_ = R(0);
};

template <class R>
int product_floor(const Pdo<R> &a, const Pdo<R> &b, std::optional<int> trunc) {
  constexpr int none = Pdo<R>::kNoFloor;
  int f = none;
  if (!a.exact() && !(b.exact() && b.is_zero())) f = std::max(f, a.floor() + b.effective_top());
  if (!b.exact() && !(a.exact() && a.is_zero())) f = std::max(f, b.floor() + a.effective_top());
  if (trunc) f = std::max(f, *trunc);
  return f;
}

/// Coefficient of D^n in a*b (generalized Leibniz rule).
template <class R>
R product_coeff(const Pdo<R> &a, const Pdo<R> &b, int n, DerivCache<R> &cache) {
  R acc(0);
  for (const auto &[i, ai] : a.coeffs()) {
    for (const auto &[j, bj] : b.coeffs()) {
      int l = i + j - n;
      if (l < 0) continue;
      if (i >= 0 && l > i) continue;
      const R &d = cache.get(j, l, bj);
      if (ring::is_zero(d)) continue;
      acc = acc + ai * d * R(binom(i, l));
    }
  }
  return acc;
}

}  // namespace detail

/// a*b. Without trunc the product must be finite (exact operators whose
/// negative-degree part meets coefficients with vanishing derivatives).
template <class R>
Pdo<R> mul(const Pdo<R> &a, const Pdo<R> &b, std::optional<int> trunc = std::nullopt) {
  constexpr int none = Pdo<R>::kNoFloor;
  const int f = detail::product_floor(a, b, trunc);
  detail::DerivCache<R> cache;
  std::map<int, R> out;
  auto add = [&](int n, R v) {
    if (ring::is_zero(v)) return;
    auto [it, inserted] = out.try_emplace(n, v);
    if (!inserted) it->second = it->second + v;
  };
  for (const auto &[i, ai] : a.coeffs()) {
    for (const auto &[j, bj] : b.coeffs()) {
      if (i + j < f) continue;
      if (f == none && i < 0 && !ring::derivatives_terminate(bj))
        throw std::domain_error("Pdo: infinite product; a truncation floor is required");
      for (int l = 0;; ++l) {
        if (i >= 0 && l > i) break;
        int n = i + j - l;
        if (n < f) break;
        const R &d = cache.get(j, l, bj);
        if (ring::is_zero(d)) break;
        add(n, ai * d * R(binom(i, l)));
      }
    }
  }
  return Pdo<R>(std::move(out), f == none ? std::nullopt : std::optional<int>(f));
}

template <class R>
Pdo<R> operator*(const Pdo<R> &a, const Pdo<R> &b) {
  return mul(a, b);
}

/// a^m for m >= 0.
template <class R>
Pdo<R> power(const Pdo<R> &a, int m, std::optional<int> trunc = std::nullopt) {
  if (m < 0) throw std::domain_error("Pdo: negative power; use inverse");
  Pdo<R> r = Pdo<R>::D(0);
  // Terms that the remaining factors cannot lift back above trunc are dropped.
  const int lift = std::max(0, a.effective_top());
  for (int i = 0; i < m; ++i) {
    std::optional<int> t;
    if (trunc) t = *trunc - (m - 1 - i) * lift;
    r = mul(r, a, t);
  }
  return r;
}

/// Formal adjoint: (a D^i)* = (-D)^i a.
template <class R>
Pdo<R> adjoint(const Pdo<R> &a, std::optional<int> trunc = std::nullopt) {
  constexpr int none = Pdo<R>::kNoFloor;
  int f = a.exact() ? none : a.floor();
  if (trunc) f = std::max(f, *trunc);
  std::map<int, R> out;
  for (const auto &[i, ai] : a.coeffs()) {
    if (f == none && i < 0 && !ring::derivatives_terminate(ai))
      throw std::domain_error("Pdo: infinite adjoint; a truncation floor is required");
    R d = ai;
    for (int l = 0;; ++l) {
      if (i >= 0 && l > i) break;
      int n = i - l;
      if (n < f) break;
      if (ring::is_zero(d)) break;
      R v = d * R(binom(i, l));
      if ((i % 2) != 0) v = -v;
      auto [it, inserted] = out.try_emplace(n, v);
      if (!inserted) it->second = it->second + v;
      d = ring::derive(d);
    }
  }
  return Pdo<R>(std::move(out), f == none ? std::nullopt : std::optional<int>(f));
}

/// Inverse down to degree floor. The top coefficient must be a unit.
template <class R>
Pdo<R> inverse(const Pdo<R> &a, int floor) {
  if (a.is_zero()) throw std::domain_error("Pdo: inverse of zero");
  const int t = a.top();
  const R &at = a.coeffs().rbegin()->second;
  if (!ring::is_unit(at)) throw std::domain_error("Pdo: leading coefficient is not a unit");
  if (floor > -t) return Pdo<R>({}, floor);
  if (!a.exact() && a.floor() > 2 * t + floor)
    throw std::domain_error("Pdo: operator floor too high for the requested inverse floor");
  R inv = ring::inverse(at);
  Pdo<R> b = Pdo<R>::term(-t, inv);
  detail::DerivCache<R> cache;
  std::map<int, R> out{{-t, inv}};
  for (int k = 1; -t - k >= floor; ++k) {
    R c = detail::product_coeff(a, b, -k, cache);
    R next = -(inv * c);
    if (!ring::is_zero(next)) out.emplace(-t - k, next);
    b = Pdo<R>(out);
  }
  return Pdo<R>(std::move(out), floor);
}

/// The unique P = D + sum_{i<=0} p_i D^i with P^n = l, down to degree floor.
template <class R>
Pdo<R> nth_root(const Pdo<R> &l, int n, int floor) {
  if (n < 1) throw std::domain_error("Pdo: root index must be positive");
  if (l.is_zero() || l.top() != n || !(l.coeff(n) == R(1)))
    throw std::domain_error("Pdo: operator is not monic of order " + std::to_string(n));
  if (floor > 1) floor = 1;
  if (!l.exact() && l.floor() > n - 1 + floor)
    throw std::domain_error("Pdo: operator floor too high for the requested root floor");
  std::map<int, R> p{{1, R(1)}};
  const R inv_n(Rat(1, n));
  for (int i = 0; i >= floor; --i) {
    const int deg = n - 1 + i;
    Pdo<R> partial(p);
    Pdo<R> q = partial;
    for (int r = 1; r < n; ++r) q = mul(q, partial, deg - (n - 1 - r));
    R c = (l.coeff(deg) - q.coeff(deg)) * inv_n;
    if (!ring::is_zero(c)) p.emplace(i, c);
  }
  return Pdo<R>(std::move(p), floor);
}

/// l^{m/n} down to degree floor.
template <class R>
Pdo<R> fractional_power(const Pdo<R> &l, int m, int n, int floor) {
  if (m < 0) throw std::domain_error("Pdo: negative fractional power");
  if (m == 0) return Pdo<R>::D(0).truncated(floor);
  Pdo<R> p = nth_root(l, n, floor - (m - 1));
  Pdo<R> r = p;
  for (int i = 1; i < m; ++i) r = mul(r, p, floor - (m - 1 - i));
  return r.truncated(floor);
}

/// (differential part, Volterra part)
template <class R>
std::pair<Pdo<R>, Pdo<R>> split(const Pdo<R> &a) {
  std::map<int, R> plus, minus;
  for (const auto &[k, c] : a.coeffs()) (k >= 0 ? plus : minus).emplace(k, c);
  std::optional<int> fp, fm = a.floor_opt();
  if (!a.exact() && a.floor() > 0) fp = a.floor();
  return {Pdo<R>(std::move(plus), fp), Pdo<R>(std::move(minus), fm)};
}

/// Coefficient of D^-1.
template <class R>
R residue(const Pdo<R> &a) {
  if (!a.exact() && a.floor() > -1) throw std::domain_error("Pdo: residue below the precision floor");
  return a.coeff(-1);
}

/// a*b - b*a
template <class R>
Pdo<R> commutator(const Pdo<R> &a, const Pdo<R> &b, std::optional<int> trunc = std::nullopt) {
  return mul(a, b, trunc) - mul(b, a, trunc);
}

/// Equality on the degrees known in both operands.
template <class R>
bool agree(const Pdo<R> &a, const Pdo<R> &b) {
  int f = std::max(a.exact() ? Pdo<R>::kNoFloor : a.floor(), b.exact() ? Pdo<R>::kNoFloor : b.floor());
  return (a.truncated(f) - b.truncated(f)).is_zero();
}

/// Sign in d_t v = kappa L v: forced to (-1)^{N/2+1} for even N, free for odd N.
struct KappaSign {
  int N = 2;
  int kappa = 1;

  KappaSign() = default;
  KappaSign(int n, int k) : N(n), kappa(k) {
    if (N < 2) throw std::invalid_argument("kappa: N must be at least 2");
    if (kappa != 1 && kappa != -1) throw std::invalid_argument("kappa must be +1 or -1");
    if (N % 2 == 0 && kappa != forced(N))
      throw std::invalid_argument("kappa: for even N the sign must be " + std::to_string(forced(N)));
  }
  static int forced(int n) { return (n / 2) % 2 ? 1 : -1; }
  /// The admissible default: forced sign for even N, +1 for odd N.
  static KappaSign standard(int n) { return KappaSign(n, n % 2 ? 1 : forced(n)); }
};

/// D^N + sum_{j<=N-2} u_j D^j with symbolic coefficients.
inline Pdo<DiffPoly> generic_operator(int N) {
  if (N < 2) throw std::domain_error("Pdo: operator order must be at least 2");
  std::map<int, DiffPoly> m{{N, DiffPoly(1)}};
  for (int j = 0; j <= N - 2; ++j) m.emplace(j, DiffPoly::gen(j));
  return Pdo<DiffPoly>(std::move(m));
}

/// Throws unless l is an exact monic D^N + (terms of order <= N-2).
template <class R>
int require_normal_form(const Pdo<R> &l) {
  if (!l.exact() || l.is_zero() || l.bottom() < 0) throw std::domain_error("Pdo: expected a differential operator");
  const int N = l.top();
  if (N < 1 || !(l.coeff(N) == R(1))) throw std::domain_error("Pdo: operator is not monic");
  if (!ring::is_zero(l.coeff(N - 1))) throw std::domain_error("Pdo: operator has a nonzero D^(N-1) coefficient");
  return N;
}

/// The coefficients u_j of a differential operator, keyed by j.
inline std::map<int, RatFunc> coefficient_bindings(const Pdo<RatFunc> &l) {
  std::map<int, RatFunc> b;
  const int N = require_normal_form(l);
  for (int j = 0; j <= N - 2; ++j) b.emplace(j, l.coeff(j));
  return b;
}

/// Substitutes u_j -> bindings[j] in every coefficient.
inline Pdo<RatFunc> bind(const Pdo<DiffPoly> &a, const std::map<int, RatFunc> &bindings) {
  DiffPolyBinding b(bindings);
  return a.map([&](const DiffPoly &c) { return b.apply(c); });
}

}  // namespace hk

#endif  // HK_PDO_HPP
