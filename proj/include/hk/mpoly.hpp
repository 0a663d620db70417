#ifndef HK_MPOLY_HPP
#define HK_MPOLY_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hk/rat.hpp"

namespace hk {

/// Global variable order. Lexicographic comparisons treat X as most
/// significant.
enum class Var : int { X = 0, Y = 1, S1 = 2, S2 = 3, S3 = 4, H = 5 };

inline constexpr int kNumVars = 6;

inline const char *var_name(Var v) {
  static constexpr const char *names[kNumVars] = {"x", "y", "s1", "s2", "s3", "h"};
  return names[static_cast<int>(v)];
}

inline std::optional<Var> var_from_name(std::string_view s) {
  for (int i = 0; i < kNumVars; ++i)
    if (s == var_name(static_cast<Var>(i))) return static_cast<Var>(i);
  return std::nullopt;
}

using Exponents = std::array<int, kNumVars>;

namespace detail {

inline bool lex_greater(const Exponents &a, const Exponents &b) {
  for (int i = 0; i < kNumVars; ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

inline int total(const Exponents &e) {
  int s = 0;
  for (int v : e) s += v;
  return s;
}

struct LexGreater {
  bool operator()(const Exponents &a, const Exponents &b) const { return lex_greater(a, b); }
};

}  // namespace detail

/// Sparse multivariate polynomial with rational coefficients. Terms are kept
/// sorted lexicographically descending with no zero coefficients, so equal
/// polynomials have identical representations.
class MPoly {
public:
  struct Term {
    Exponents exp;
    Rat coeff;
  };

  MPoly() = default;
  MPoly(int c) : MPoly(Rat(c)) {}
  MPoly(const Rat &c) {
    if (!c.is_zero()) terms_.push_back({Exponents{}, c});
  }

  static MPoly var(Var v) {
    Exponents e{};
    e[static_cast<int>(v)] = 1;
    return monomial(e, Rat(1));
  }

  static MPoly monomial(const Exponents &e, const Rat &c) {
    MPoly p;
    for (int x : e)
      if (x < 0) throw std::domain_error("MPoly: negative exponent");
    if (!c.is_zero()) p.terms_.push_back({e, c});
    return p;
  }

  const std::vector<Term> &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && detail::total(terms_[0].exp) == 0);
  }
  Rat constant_value() const {
    if (!is_constant()) throw std::logic_error("MPoly: not a constant");
    return terms_.empty() ? Rat(0) : terms_[0].coeff;
  }
  /// Coefficient of the exponent-free term.
  Rat constant_term() const {
    if (!terms_.empty() && detail::total(terms_.back().exp) == 0) return terms_.back().coeff;
    return Rat(0);
  }

  const Term &leading() const {
    if (terms_.empty()) throw std::logic_error("MPoly: leading term of zero");
    return terms_.front();
  }

  int degree(Var v) const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto &t : terms_) d = std::max(d, t.exp[static_cast<int>(v)]);
    return d;
  }

  int total_degree() const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto &t : terms_) d = std::max(d, detail::total(t.exp));
    return d;
  }

  /// Total degree counting only the variables listed.
  int total_degree_in(std::initializer_list<Var> vars) const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto &t : terms_) {
      int s = 0;
      for (Var v : vars) s += t.exp[static_cast<int>(v)];
      d = std::max(d, s);
    }
    return d;
  }

  bool depends_on(Var v) const {
    for (const auto &t : terms_)
      if (t.exp[static_cast<int>(v)] != 0) return true;
    return false;
  }

  MPoly &operator+=(const MPoly &o) { return *this = add(*this, o, Rat(1)); }
  MPoly &operator-=(const MPoly &o) { return *this = add(*this, o, Rat(-1)); }
  MPoly &operator*=(const MPoly &o) { return *this = *this * o; }

  friend MPoly operator+(const MPoly &a, const MPoly &b) { return add(a, b, Rat(1)); }
  friend MPoly operator-(const MPoly &a, const MPoly &b) { return add(a, b, Rat(-1)); }
  friend MPoly operator-(const MPoly &a) { return a.scaled(Rat(-1)); }

  friend MPoly operator*(const MPoly &a, const MPoly &b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.constant_value());
    if (b.is_constant()) return a.scaled(b.constant_value());
    std::map<Exponents, Rat, detail::LexGreater> acc;
    for (const auto &ta : a.terms_)
      for (const auto &tb : b.terms_) {
        Exponents e;
        for (int i = 0; i < kNumVars; ++i) e[i] = ta.exp[i] + tb.exp[i];
        auto [it, inserted] = acc.try_emplace(e, ta.coeff * tb.coeff);
        if (!inserted) it->second += ta.coeff * tb.coeff;
      }
    MPoly r;
    r.terms_.reserve(acc.size());
    for (auto &[e, c] : acc)
      if (!c.is_zero()) r.terms_.push_back({e, std::move(c)});
    return r;
  }

  MPoly scaled(const Rat &c) const {
    if (c.is_zero()) return {};
    MPoly r = *this;
    for (auto &t : r.terms_) t.coeff *= c;
    return r;
  }

  /// Multiplies by the monomial with exponent vector e.
  MPoly shifted(const Exponents &e) const {
    MPoly r = *this;
    for (auto &t : r.terms_)
      for (int i = 0; i < kNumVars; ++i) t.exp[i] += e[i];
    return r;
  }

  MPoly pow(int e) const {
    if (e < 0) throw std::domain_error("MPoly: negative power");
    MPoly r(1), b = *this;
    while (e) {
      if (e & 1) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

  MPoly derivative(Var v) const {
    const int iv = static_cast<int>(v);
    MPoly r;
    for (const auto &t : terms_) {
      if (t.exp[iv] == 0) continue;
      Exponents e = t.exp;
      e[iv] -= 1;
      r.terms_.push_back({e, t.coeff * Rat(t.exp[iv])});
    }
    // Lowering one variable's exponent preserves relative lex order among
    // terms that contained it.
    return r;
  }

  /// Replaces variable v by the polynomial q.
  MPoly substitute(Var v, const MPoly &q) const {
    const int iv = static_cast<int>(v);
    int maxdeg = degree(v);
    if (maxdeg <= 0) return *this;
    std::vector<MPoly> powers{MPoly(1)};
    for (int d = 1; d <= maxdeg; ++d) powers.push_back(powers.back() * q);
    std::map<int, MPoly> by_degree;
    for (const auto &t : terms_) {
      Exponents e = t.exp;
      int d = e[iv];
      e[iv] = 0;
      by_degree[d] += MPoly::monomial(e, t.coeff);
    }
    MPoly r;
    for (auto &[d, c] : by_degree) r += c * powers[d];
    return r;
  }

  /// Renames variable `from` to `to`; `to` must not occur.
  MPoly renamed(Var from, Var to) const {
    if (from == to) return *this;
    if (depends_on(to)) return substitute(from, MPoly::var(to));
    MPoly r;
    for (const auto &t : terms_) {
      Exponents e = t.exp;
      e[static_cast<int>(to)] = e[static_cast<int>(from)];
      e[static_cast<int>(from)] = 0;
      r.terms_.push_back({e, t.coeff});
    }
    r.sort();
    return r;
  }

  /// Exchanges two variables.
  MPoly swapped(Var a, Var b) const {
    MPoly r;
    for (const auto &t : terms_) {
      Exponents e = t.exp;
      std::swap(e[static_cast<int>(a)], e[static_cast<int>(b)]);
      r.terms_.push_back({e, t.coeff});
    }
    r.sort();
    return r;
  }

  double evaluate(const std::array<double, kNumVars> &point) const {
    double s = 0;
    for (const auto &t : terms_) {
      double m = t.coeff.to_double();
      for (int i = 0; i < kNumVars; ++i)
        for (int k = 0; k < t.exp[i]; ++k) m *= point[i];
      s += m;
    }
    return s;
  }

  /// Coefficients in powers of v; entry d is free of v.
  std::vector<MPoly> coefficients_in(Var v) const {
    const int iv = static_cast<int>(v);
    std::vector<MPoly> out(static_cast<std::size_t>(std::max(degree(v), 0) + 1));
    for (const auto &t : terms_) {
      Exponents e = t.exp;
      int d = e[iv];
      e[iv] = 0;
      out[static_cast<std::size_t>(d)].terms_.push_back({e, t.coeff});
    }
    // Terms stay lex-sorted after zeroing one exponent within a degree bucket.
    return out;
  }

  static MPoly from_coefficients(const std::vector<MPoly> &coeffs, Var v) {
    MPoly r;
    Exponents e{};
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
      e[static_cast<int>(v)] = static_cast<int>(d);
      r += coeffs[d].shifted(e);
    }
    return r;
  }

  /// Lowest common denominator of the coefficients over the gcd of their
  /// numerators; multiplying by this makes the coefficients coprime integers.
  Rat integer_scale() const {
    if (terms_.empty()) return Rat(1);
    mpz_class l(1), g(0);
    for (const auto &t : terms_) {
      l = lcm(l, t.coeff.den());
      g = gcd(g, t.coeff.num());
    }
    return Rat(l, abs(g));
  }

  /// Scalar multiple with coprime integer coefficients and positive leading
  /// (lex) coefficient.
  MPoly primitive() const {
    if (terms_.empty()) return {};
    Rat s = integer_scale();
    if (leading().coeff.sign() < 0) s = -s;
    return scaled(s);
  }

  friend bool operator==(const MPoly &a, const MPoly &b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].exp != b.terms_[i].exp || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
  }
  friend bool operator!=(const MPoly &a, const MPoly &b) { return !(a == b); }

  /// Canonical text: terms by total degree descending, ties lexicographic.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::vector<const Term *> order;
    for (const auto &t : terms_) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](const Term *a, const Term *b) {
      int da = detail::total(a->exp), db = detail::total(b->exp);
      if (da != db) return da > db;
      return detail::lex_greater(a->exp, b->exp);
    });
    std::ostringstream os;
    bool first = true;
    for (const Term *t : order) {
      Rat c = t->coeff;
      bool neg = c.sign() < 0;
      if (neg) c = -c;
      if (first)
        os << (neg ? "-" : "");
      else
        os << (neg ? " - " : " + ");
      first = false;
      bool has_mono = detail::total(t->exp) != 0;
      bool wrote = false;
      if (!c.is_one() || !has_mono) {
        os << c.str();
        wrote = true;
      }
      for (int i = 0; i < kNumVars; ++i) {
        if (t->exp[i] == 0) continue;
        if (wrote) os << "*";
        os << var_name(static_cast<Var>(i));
        if (t->exp[i] > 1) os << "^" << t->exp[i];
        wrote = true;
      }
    }
    return os.str();
  }

  friend std::ostream &operator<<(std::ostream &os, const MPoly &p) { return os << p.str(); }

private:
  std::vector<Term> terms_;

  void sort() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term &a, const Term &b) { return detail::lex_greater(a.exp, b.exp); });
  }

  static MPoly add(const MPoly &a, const MPoly &b, const Rat &sb) {
    MPoly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() ||
          (i < a.terms_.size() && detail::lex_greater(a.terms_[i].exp, b.terms_[j].exp))) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || detail::lex_greater(b.terms_[j].exp, a.terms_[i].exp)) {
        r.terms_.push_back({b.terms_[j].exp, b.terms_[j].coeff * sb});
        ++j;
      } else {
        Rat c = a.terms_[i].coeff + b.terms_[j].coeff * sb;
        if (!c.is_zero()) r.terms_.push_back({a.terms_[i].exp, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }
};

/// Exact quotient a/b, or nullopt when b does not divide a.
inline std::optional<MPoly> divide_exact(const MPoly &a, const MPoly &b) {
  if (b.is_zero()) throw std::domain_error("MPoly: division by zero");
  if (a.is_zero()) return MPoly();
  if (b.is_constant()) return a.scaled(b.constant_value().inverse());
  const auto &lb = b.leading();
  // Every quotient term satisfies deg_v(t) <= deg_v(a) - deg_v(b); this also
  // stops lex division early when b does not divide a.
  Exponents room;
  for (int i = 0; i < kNumVars; ++i) {
    room[i] = a.degree(static_cast<Var>(i)) - b.degree(static_cast<Var>(i));
    if (room[i] < 0) return std::nullopt;
  }
  Rat inv = lb.coeff.inverse();
  MPoly q, r = a;
  while (!r.is_zero()) {
    const auto &lr = r.leading();
    Exponents e;
    for (int i = 0; i < kNumVars; ++i) {
      e[i] = lr.exp[i] - lb.exp[i];
      if (e[i] < 0 || e[i] > room[i]) return std::nullopt;
    }
    Rat c = lr.coeff * inv;
    MPoly t = MPoly::monomial(e, c);
    q += t;
    r -= b.shifted(e).scaled(c);
  }
  return q;
}

inline MPoly gcd(const MPoly &a, const MPoly &b);

namespace detail {

inline int first_var(const MPoly &p) {
  for (int i = 0; i < kNumVars; ++i)
    if (p.depends_on(static_cast<Var>(i))) return i;
  return -1;
}

/// gcd of the coefficients of p viewed as a polynomial in v.
inline MPoly content_in(const MPoly &p, Var v) {
  auto cs = p.coefficients_in(v);
  std::erase_if(cs, [](const MPoly &c) { return c.is_zero(); });
  for (const auto &c : cs)
    if (c.is_constant()) return MPoly(1);
  std::sort(cs.begin(), cs.end(), [](const MPoly &a, const MPoly &b) { return a.size() < b.size(); });
  MPoly g;
  for (const auto &c : cs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return MPoly(1);
  }
  return g;
}

/// Pseudo-remainder of a by b with respect to v.
inline MPoly prem(const MPoly &a, const MPoly &b, Var v) {
  auto bc = b.coefficients_in(v);
  const std::size_t db = bc.size() - 1;
  const MPoly &lcb = bc.back();
  auto r = a.coefficients_in(v);
  while (!r.empty() && r.back().is_zero()) r.pop_back();
  while (!r.empty() && r.size() - 1 >= db) {
    const std::size_t dr = r.size() - 1;
    MPoly lcr = r[dr];
    for (auto &c : r) c *= lcb;
    for (std::size_t i = 0; i <= db; ++i) r[dr - db + i] -= lcr * bc[i];
    while (!r.empty() && r.back().is_zero()) r.pop_back();
  }
  return MPoly::from_coefficients(r, v);
}

}  // namespace detail

/// Greatest common divisor, normalized by MPoly::primitive(). gcd(0, 0) = 0.
inline MPoly gcd(const MPoly &a, const MPoly &b) {
  if (a.is_zero()) return b.primitive();
  if (b.is_zero()) return a.primitive();
  if (a.is_constant() || b.is_constant()) return MPoly(1);
  if (a.size() <= b.size()) {
    if (divide_exact(b, a)) return a.primitive();
  } else {
    if (divide_exact(a, b)) return b.primitive();
  }
  int va = detail::first_var(a), vb = detail::first_var(b);
  int vi = std::min(va, vb);
  Var v = static_cast<Var>(vi);
  if (!a.depends_on(v)) return gcd(a, detail::content_in(b, v));
  if (!b.depends_on(v)) return gcd(detail::content_in(a, v), b);

  MPoly ca = detail::content_in(a, v), cb = detail::content_in(b, v);
  MPoly gc = gcd(ca, cb);
  MPoly A = divide_exact(a, ca)->primitive(), B = divide_exact(b, cb)->primitive();
  if (A.degree(v) < B.degree(v)) std::swap(A, B);
  MPoly G;
  while (true) {
    MPoly R = detail::prem(A, B, v);
    if (R.is_zero()) {
      G = B;
      break;
    }
    if (!R.depends_on(v)) {
      G = MPoly(1);
      break;
    }
    A = B;
    // Removing the rational scale as well keeps coefficient growth linear.
    B = divide_exact(R, detail::content_in(R, v))->primitive();
  }
  if (G.depends_on(v)) G = *divide_exact(G, detail::content_in(G, v));
  return (gc * G).primitive();
}

}  // namespace hk

#endif  // HK_MPOLY_HPP
