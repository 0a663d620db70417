#ifndef HK_LAURENT_HPP
#define HK_LAURENT_HPP

#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hk/rat.hpp"

namespace hk {

/// Laurent polynomial in a single variable h with rational coefficients and
/// derivation d/dh. Only monomials are units.
class LaurentH {
public:
  LaurentH() = default;
  LaurentH(int c) : LaurentH(Rat(c)) {}
  LaurentH(const Rat &c) {
    if (!c.is_zero()) c_.emplace(0, c);
  }

  static LaurentH monomial(int e, const Rat &c = Rat(1)) {
    LaurentH r;
    if (!c.is_zero()) r.c_.emplace(e, c);
    return r;
  }

  const std::map<int, Rat> &terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  bool is_monomial() const { return c_.size() == 1; }

  Rat coeff(int e) const {
    auto it = c_.find(e);
    return it == c_.end() ? Rat(0) : it->second;
  }

  LaurentH inverse() const {
    if (!is_monomial()) throw std::domain_error("LaurentH: only monomials are invertible");
    auto [e, c] = *c_.begin();
    return monomial(-e, c.inverse());
  }

  LaurentH derivative() const {
    LaurentH r;
    for (const auto &[e, c] : c_)
      if (e != 0) r.c_.emplace(e - 1, c * Rat(e));
    return r;
  }

  LaurentH &operator+=(const LaurentH &o) {
    for (const auto &[e, c] : o.c_) add(e, c);
    return *this;
  }
  LaurentH &operator-=(const LaurentH &o) {
    for (const auto &[e, c] : o.c_) add(e, -c);
    return *this;
  }
  friend LaurentH operator+(LaurentH a, const LaurentH &b) { return a += b; }
  friend LaurentH operator-(LaurentH a, const LaurentH &b) { return a -= b; }
  friend LaurentH operator-(const LaurentH &a) {
    LaurentH r;
    for (const auto &[e, c] : a.c_) r.c_.emplace(e, -c);
    return r;
  }
  friend LaurentH operator*(const LaurentH &a, const LaurentH &b) {
    LaurentH r;
    for (const auto &[ea, ca] : a.c_)
      for (const auto &[eb, cb] : b.c_) r.add(ea + eb, ca * cb);
    return r;
  }
  LaurentH &operator*=(const LaurentH &o) { return *this = *this * o; }

  friend bool operator==(const LaurentH &a, const LaurentH &b) { return a.c_ == b.c_; }
  friend bool operator!=(const LaurentH &a, const LaurentH &b) { return !(a == b); }

  std::string str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      auto [e, c] = *it;
      bool neg = c.sign() < 0;
      if (neg) c = -c;
      os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
      first = false;
      if (e == 0) {
        os << c;
        continue;
      }
      if (!c.is_one()) os << c << "*";
      os << "h";
      if (e != 1) os << "^" << e;
    }
    return os.str();
  }

  friend std::ostream &operator<<(std::ostream &os, const LaurentH &p) { return os << p.str(); }

private:
  std::map<int, Rat> c_;

  void add(int e, const Rat &c) {
    if (c.is_zero()) return;
    auto [it, inserted] = c_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) c_.erase(it);
    }
  }
};

}  // namespace hk

#endif  // HK_LAURENT_HPP
