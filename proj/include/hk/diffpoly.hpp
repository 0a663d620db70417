#ifndef HK_DIFFPOLY_HPP
#define HK_DIFFPOLY_HPP

#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hk/ratfunc.hpp"

namespace hk {

/// The generator u_j^(m): m-th x-derivative of the coefficient u_j.
struct Generator {
  int family = 0;
  int order = 0;
  friend auto operator<=>(const Generator &, const Generator &) = default;
};

/// Product of generator powers, factors sorted by generator.
struct DMonomial {
  std::vector<std::pair<Generator, int>> factors;

  int differential_order() const {
    int s = 0;
    for (const auto &[g, p] : factors) s += g.order * p;
    return s;
  }
  int degree() const {
    int s = 0;
    for (const auto &[g, p] : factors) s += p;
    return s;
  }
  bool is_one() const { return factors.empty(); }

  friend bool operator==(const DMonomial &, const DMonomial &) = default;

  friend DMonomial operator*(const DMonomial &a, const DMonomial &b) {
    DMonomial r;
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
      if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first))
        r.factors.push_back(a.factors[i++]);
      else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first)
        r.factors.push_back(b.factors[j++]);
      else {
        r.factors.push_back({a.factors[i].first, a.factors[i].second + b.factors[j].second});
        ++i;
        ++j;
      }
    }
    return r;
  }
};

/// Canonical monomial order: total differential order, then lexicographic in
/// the factor list.
struct DMonomialOrder {
  bool operator()(const DMonomial &a, const DMonomial &b) const {
    int oa = a.differential_order(), ob = b.differential_order();
    if (oa != ob) return oa < ob;
    return a.factors < b.factors;
  }
};

inline std::string generator_name(const Generator &g) {
  std::string s = "u" + std::to_string(g.family);
  if (g.order <= 3)
    s += std::string(static_cast<std::size_t>(g.order), '\'');
  else
    s += "^(" + std::to_string(g.order) + ")";
  return s;
}

/// Polynomial with rational coefficients in the generators u_j^(m), equipped
/// with the total x-derivation.
class DiffPoly {
public:
  using TermMap = std::map<DMonomial, Rat, DMonomialOrder>;

  DiffPoly() = default;
  DiffPoly(int c) : DiffPoly(Rat(c)) {}
  DiffPoly(const Rat &c) {
    if (!c.is_zero()) terms_.emplace(DMonomial{}, c);
  }

  /// u_j^(m)
  static DiffPoly gen(int family, int order = 0) {
    if (family < 0 || order < 0) throw std::domain_error("DiffPoly: negative generator index");
    DiffPoly p;
    p.terms_.emplace(DMonomial{{{Generator{family, order}, 1}}}, Rat(1));
    return p;
  }

  const TermMap &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
  Rat constant_value() const {
    if (!is_constant()) throw std::logic_error("DiffPoly: not a constant");
    return terms_.empty() ? Rat(0) : terms_.begin()->second;
  }
  Rat constant_term() const {
    auto it = terms_.find(DMonomial{});
    return it == terms_.end() ? Rat(0) : it->second;
  }

  DiffPoly &operator+=(const DiffPoly &o) {
    for (const auto &[m, c] : o.terms_) accumulate(m, c);
    return *this;
  }
  DiffPoly &operator-=(const DiffPoly &o) {
    for (const auto &[m, c] : o.terms_) accumulate(m, -c);
    return *this;
  }
  friend DiffPoly operator+(DiffPoly a, const DiffPoly &b) { return a += b; }
  friend DiffPoly operator-(DiffPoly a, const DiffPoly &b) { return a -= b; }
  friend DiffPoly operator-(const DiffPoly &a) { return a.scaled(Rat(-1)); }

  friend DiffPoly operator*(const DiffPoly &a, const DiffPoly &b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.constant_value());
    if (b.is_constant()) return a.scaled(b.constant_value());
    DiffPoly r;
    for (const auto &[ma, ca] : a.terms_)
      for (const auto &[mb, cb] : b.terms_) r.accumulate(ma * mb, ca * cb);
    return r;
  }
  DiffPoly &operator*=(const DiffPoly &o) { return *this = *this * o; }

  DiffPoly scaled(const Rat &c) const {
    if (c.is_zero()) return {};
    DiffPoly r = *this;
    for (auto &[m, v] : r.terms_) v *= c;
    return r;
  }

  DiffPoly pow(int e) const {
    if (e < 0) throw std::domain_error("DiffPoly: negative power");
    DiffPoly r(1), b = *this;
    while (e) {
      if (e & 1) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

  /// Total derivative: d(u_j^(m)) = u_j^(m+1), extended by the Leibniz rule.
  DiffPoly derivative() const {
    DiffPoly r;
    for (const auto &[m, c] : terms_) {
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        const auto &[g, p] = m.factors[i];
        DMonomial rest = m;
        if (p == 1)
          rest.factors.erase(rest.factors.begin() + static_cast<long>(i));
        else
          rest.factors[i].second -= 1;
        DMonomial next{{{Generator{g.family, g.order + 1}, 1}}};
        r.accumulate(rest * next, c * Rat(p));
      }
    }
    return r;
  }

  DiffPoly derivative(int times) const {
    if (times < 0) throw std::domain_error("DiffPoly: negative derivative count");
    DiffPoly r = *this;
    for (int i = 0; i < times; ++i) r = r.derivative();
    return r;
  }

  /// Partial derivative with respect to the generator g.
  DiffPoly partial(const Generator &g) const {
    DiffPoly r;
    for (const auto &[m, c] : terms_) {
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        if (m.factors[i].first != g) continue;
        int p = m.factors[i].second;
        DMonomial rest = m;
        if (p == 1)
          rest.factors.erase(rest.factors.begin() + static_cast<long>(i));
        else
          rest.factors[i].second -= 1;
        r.accumulate(rest, c * Rat(p));
      }
    }
    return r;
  }

  /// Highest derivative order of family j present, or -1.
  int max_order(int family) const {
    int r = -1;
    for (const auto &[m, c] : terms_)
      for (const auto &[g, p] : m.factors)
        if (g.family == family) r = std::max(r, g.order);
    return r;
  }

  int max_family() const {
    int r = -1;
    for (const auto &[m, c] : terms_)
      for (const auto &[g, p] : m.factors) r = std::max(r, g.family);
    return r;
  }

  /// Generators occurring in this polynomial.
  std::vector<Generator> generators() const {
    std::vector<Generator> out;
    for (const auto &[m, c] : terms_)
      for (const auto &[g, p] : m.factors)
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Replaces every generator u_j^(m) by the polynomial images[g]; generators
  /// absent from the map are an error.
  DiffPoly compose(const std::map<Generator, DiffPoly> &images) const {
    DiffPoly r;
    for (const auto &[m, c] : terms_) {
      DiffPoly t(c);
      for (const auto &[g, p] : m.factors) {
        auto it = images.find(g);
        if (it == images.end()) throw std::out_of_range("DiffPoly: unbound generator " + generator_name(g));
        t *= it->second.pow(p);
      }
      r += t;
    }
    return r;
  }

  friend bool operator==(const DiffPoly &a, const DiffPoly &b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const DiffPoly &a, const DiffPoly &b) { return !(a == b); }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[m, c0] : terms_) {
      Rat c = c0;
      bool neg = c.sign() < 0;
      if (neg) c = -c;
      if (first)
        os << (neg ? "-" : "");
      else
        os << (neg ? " - " : " + ");
      first = false;
      bool wrote = false;
      if (!c.is_one() || m.is_one()) {
        os << c.str();
        wrote = true;
      }
      for (const auto &[g, p] : m.factors) {
        if (wrote) os << "*";
        os << generator_name(g);
        if (p > 1) os << "^" << p;
        wrote = true;
      }
    }
    return os.str();
  }

  friend std::ostream &operator<<(std::ostream &os, const DiffPoly &p) { return os << p.str(); }

private:
  TermMap terms_;

  void accumulate(const DMonomial &m, const Rat &c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
};

/// Binds u_j to rational functions of x; u_j^(m) maps to the m-th
/// x-derivative of the binding.
class DiffPolyBinding {
public:
  explicit DiffPolyBinding(std::map<int, RatFunc> bindings) : base_(std::move(bindings)) {}

  const RatFunc &value(const Generator &g) {
    auto it = cache_.find(g);
    if (it != cache_.end()) return it->second;
    if (g.order == 0) {
      auto b = base_.find(g.family);
      if (b == base_.end()) throw std::out_of_range("DiffPoly: unbound generator " + generator_name(g));
      return cache_.emplace(g, b->second).first->second;
    }
    RatFunc d = value(Generator{g.family, g.order - 1}).derivative(Var::X);
    return cache_.emplace(g, std::move(d)).first->second;
  }

  RatFunc apply(const DiffPoly &p) {
    RatFunc r;
    for (const auto &[m, c] : p.terms()) {
      RatFunc t(c);
      for (const auto &[g, e] : m.factors) t *= value(g).pow(e);
      r += t;
    }
    return r;
  }

private:
  std::map<int, RatFunc> base_;
  std::map<Generator, RatFunc> cache_;
};

inline RatFunc substitute(const DiffPoly &p, const std::map<int, RatFunc> &bindings) {
  DiffPolyBinding b(bindings);
  return b.apply(p);
}

}  // namespace hk

#endif  // HK_DIFFPOLY_HPP
