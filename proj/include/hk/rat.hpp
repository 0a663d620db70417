#ifndef HK_RAT_HPP
#define HK_RAT_HPP

#include <cctype>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hk {

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
class Rat {
public:
  Rat() = default;
  Rat(int v) : v_(v) {}
  Rat(long v) : v_(v) {}
  Rat(long long v) : v_(static_cast<long>(v)) {}
  Rat(const mpz_class &n) : v_(n) {}
  Rat(const mpz_class &n, const mpz_class &d) : v_(n, d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class &q) : v_(q) { v_.canonicalize(); }

  /// Parses "p", "-p" or "p/q".
  static Rat parse(std::string_view s) {
    std::string t(s);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    if (t.empty()) throw std::invalid_argument("Rat: empty literal");
    if (t.front() == '+') t.erase(t.begin());
    mpq_class q;
    if (q.set_str(t, 10) != 0) throw std::invalid_argument("Rat: bad literal '" + t + "'");
    if (q.get_den() == 0) throw std::domain_error("Rat: zero denominator");
    q.canonicalize();
    return Rat(q);
  }

  const mpq_class &raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  double to_double() const { return v_.get_d(); }

  Rat inverse() const {
    if (is_zero()) throw std::domain_error("Rat: division by zero");
    return Rat(mpq_class(1) / v_);
  }

  std::string str() const { return v_.get_str(10); }

  Rat &operator+=(const Rat &o) { v_ += o.v_; return *this; }
  Rat &operator-=(const Rat &o) { v_ -= o.v_; return *this; }
  Rat &operator*=(const Rat &o) { v_ *= o.v_; return *this; }
  Rat &operator/=(const Rat &o) {
    if (o.is_zero()) throw std::domain_error("Rat: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat &b) { return a += b; }
  friend Rat operator-(Rat a, const Rat &b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat &b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat &b) { return a /= b; }
  friend Rat operator-(const Rat &a) { return Rat(mpq_class(-a.v_)); }

  friend bool operator==(const Rat &a, const Rat &b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat &a, const Rat &b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat &a, const Rat &b) { return a.v_ < b.v_; }
  friend bool operator>(const Rat &a, const Rat &b) { return a.v_ > b.v_; }
  friend bool operator<=(const Rat &a, const Rat &b) { return a.v_ <= b.v_; }
  friend bool operator>=(const Rat &a, const Rat &b) { return a.v_ >= b.v_; }

  friend std::ostream &operator<<(std::ostream &os, const Rat &r) { return os << r.str(); }

private:
  mpq_class v_{0};
};

inline Rat pow(const Rat &base, int e) {
  if (e < 0) return pow(base.inverse(), -e);
  Rat r(1), b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline Rat factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rat(f);
}

/// Generalized binomial coefficient binom(k, i) = k(k-1)...(k-i+1)/i! for any
/// integer k and i >= 0.
inline Rat binom(long k, long i) {
  if (i < 0) return Rat(0);
  mpz_class num(1);
  for (long t = 0; t < i; ++t) num *= mpz_class(k - t);
  mpz_class den;
  mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(i));
  return Rat(num, den);
}

/// Rising factorial (a)_k = a(a+1)...(a+k-1).
inline Rat pochhammer(const Rat &a, int k) {
  Rat r(1);
  for (int i = 0; i < k; ++i) r *= a + Rat(i);
  return r;
}

inline mpz_class gcd(const mpz_class &a, const mpz_class &b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline mpz_class lcm(const mpz_class &a, const mpz_class &b) {
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

}  // namespace hk

#endif  // HK_RAT_HPP
