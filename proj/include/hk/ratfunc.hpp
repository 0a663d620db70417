#ifndef HK_RATFUNC_HPP
#define HK_RATFUNC_HPP

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "hk/mpoly.hpp"

namespace hk {

/// Quotient of polynomials in lowest terms. The denominator carries coprime
/// integer coefficients and a positive lex-leading coefficient, which makes
/// the representation unique.
class RatFunc {
public:
  RatFunc() : den_(1) {}
  RatFunc(int c) : num_(c), den_(1) {}
  RatFunc(const Rat &c) : num_(c), den_(1) {}
  RatFunc(const MPoly &p) : num_(p), den_(1) {}
  RatFunc(MPoly num, MPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    normalize();
  }

  static RatFunc var(Var v) { return RatFunc(MPoly::var(v)); }

  const MPoly &num() const { return num_; }
  const MPoly &den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  Rat constant_value() const { return num_.constant_value() / den_.constant_value(); }
  bool depends_on(Var v) const { return num_.depends_on(v) || den_.depends_on(v); }

  RatFunc inverse() const {
    if (is_zero()) throw std::domain_error("RatFunc: division by zero");
    return RatFunc(den_, num_);
  }

  friend RatFunc operator+(const RatFunc &a, const RatFunc &b) { return add(a, b, false); }
  friend RatFunc operator-(const RatFunc &a, const RatFunc &b) { return add(a, b, true); }
  friend RatFunc operator-(const RatFunc &a) {
    RatFunc r = a;
    r.num_ = -r.num_;
    return r;
  }

  friend RatFunc operator*(const RatFunc &a, const RatFunc &b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_polynomial() && b.is_polynomial()) return RatFunc::raw(a.num_ * b.num_, MPoly(1));
    // Cancel crosswise first so the final gcd works on smaller inputs.
    MPoly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
    MPoly n1 = *divide_exact(a.num_, g1), d2 = *divide_exact(b.den_, g1);
    MPoly n2 = *divide_exact(b.num_, g2), d1 = *divide_exact(a.den_, g2);
    return RatFunc::coprime(n1 * n2, d1 * d2);
  }

  friend RatFunc operator/(const RatFunc &a, const RatFunc &b) { return a * b.inverse(); }

  RatFunc &operator+=(const RatFunc &o) { return *this = *this + o; }
  RatFunc &operator-=(const RatFunc &o) { return *this = *this - o; }
  RatFunc &operator*=(const RatFunc &o) { return *this = *this * o; }
  RatFunc &operator/=(const RatFunc &o) { return *this = *this / o; }

  RatFunc scaled(const Rat &c) const {
    RatFunc r = *this;
    r.num_ = r.num_.scaled(c);
    if (r.num_.is_zero()) r.den_ = MPoly(1);
    return r;
  }

  RatFunc pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    return RatFunc::raw(num_.pow(e), den_.pow(e));
  }

  RatFunc derivative(Var v) const {
    if (!depends_on(v)) return {};
    if (is_polynomial()) return RatFunc::raw(num_.derivative(v), den_);
    // d(n/d) = (n' (d/g) - n (d'/g)) / (d (d/g)) with g = gcd(d, d').
    // Irreducible factors of d involving v cannot divide the new numerator;
    // the others all divide g, so cancelling against g suffices.
    MPoly dd = den_.derivative(v);
    MPoly g = gcd(den_, dd);
    MPoly dg = *divide_exact(den_, g), ddg = *divide_exact(dd, g);
    MPoly n = num_.derivative(v) * dg - num_ * ddg;
    MPoly d = den_ * dg;
    if (n.is_zero()) return {};
    if (!g.is_constant()) {
      MPoly h = gcd(n, g);
      if (!h.is_constant()) {
        n = *divide_exact(n, h);
        d = *divide_exact(d, h);
      }
    }
    return RatFunc::coprime(std::move(n), std::move(d));
  }

  RatFunc substitute(Var v, const MPoly &q) const {
    MPoly d = den_.substitute(v, q);
    if (d.is_zero()) throw std::domain_error("RatFunc: substitution hits a pole");
    return RatFunc(num_.substitute(v, q), std::move(d));
  }

  RatFunc substitute(Var v, const Rat &c) const { return substitute(v, MPoly(c)); }

  RatFunc swapped(Var a, Var b) const { return RatFunc::raw(num_.swapped(a, b), den_.swapped(a, b)); }

  double evaluate(const std::array<double, kNumVars> &point) const {
    return num_.evaluate(point) / den_.evaluate(point);
  }

  friend bool operator==(const RatFunc &a, const RatFunc &b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RatFunc &a, const RatFunc &b) { return !(a == b); }

  /// Canonical "(num)/(den)" form.
  std::string str() const { return "(" + num_.str() + ")/(" + den_.str() + ")"; }

  friend std::ostream &operator<<(std::ostream &os, const RatFunc &r) { return os << r.str(); }

private:
  MPoly num_, den_;

  // Builds from num/den already known to be coprime; only rescales.
  static RatFunc coprime(MPoly num, MPoly den) {
    RatFunc r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    r.rescale();
    return r;
  }

  // Caller guarantees coprimality up to constants (e.g. powers of a reduced form).
  static RatFunc raw(MPoly num, MPoly den) { return coprime(std::move(num), std::move(den)); }

  void rescale() {
    if (num_.is_zero()) {
      den_ = MPoly(1);
      return;
    }
    Rat s = den_.integer_scale();
    if (den_.leading().coeff.sign() < 0) s = -s;
    if (!s.is_one()) {
      den_ = den_.scaled(s);
      num_ = num_.scaled(s);
    }
  }

  void normalize() {
    if (num_.is_zero()) {
      den_ = MPoly(1);
      return;
    }
    if (!den_.is_constant()) {
      MPoly g = gcd(num_, den_);
      if (!g.is_constant()) {
        num_ = *divide_exact(num_, g);
        den_ = *divide_exact(den_, g);
      }
    }
    rescale();
  }

  static RatFunc add(const RatFunc &a, const RatFunc &b, bool subtract) {
    const MPoly bn = subtract ? -b.num_ : b.num_;
    if (a.is_zero()) return RatFunc::raw(bn, b.den_);
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatFunc(a.num_ + bn, a.den_);
    if (a.is_polynomial() && b.is_polynomial())
      return RatFunc::raw(a.num_.scaled(a.den_.constant_value().inverse()) +
                              bn.scaled(b.den_.constant_value().inverse()),
                          MPoly(1));
    MPoly g = gcd(a.den_, b.den_);
    MPoly ad = *divide_exact(a.den_, g), bd = *divide_exact(b.den_, g);
    MPoly n = a.num_ * bd + bn * ad;
    if (n.is_zero()) return {};
    // Any common factor of n and the combined denominator divides g.
    MPoly den = a.den_ * bd;
    if (g.is_constant()) return RatFunc::coprime(std::move(n), std::move(den));
    MPoly h = gcd(n, g);
    if (!h.is_constant()) {
      n = *divide_exact(n, h);
      den = *divide_exact(den, h);
    }
    return RatFunc::coprime(std::move(n), std::move(den));
  }
};

}  // namespace hk

#endif  // HK_RATFUNC_HPP
