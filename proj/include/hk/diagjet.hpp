#ifndef HK_DIAGJET_HPP
#define HK_DIAGJET_HPP

#include <algorithm>
#include <climits>
#include <concepts>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hk/ring.hpp"

namespace hk {

/// Truncated expansion sum_{m < order} c_m(x) h^m about the diagonal, h = x - y.
/// Coefficients at m >= order are unknown. kExact marks a jet whose stored
/// coefficients are the whole (polynomial in h) story.
template <class R>
class DiagJet {
public:
  static constexpr int kExact = INT_MAX / 4;

  DiagJet() : order_(kExact) {}
  DiagJet(int c) : DiagJet(R(c)) {}
  DiagJet(const Rat &q)
    requires(!std::same_as<R, Rat>)
      : DiagJet(R(q)) {}
  DiagJet(const R &c) : order_(kExact) {
    if (!ring::is_zero(c)) c_.push_back(c);
  }
  DiagJet(std::vector<R> coeffs, int order) : c_(std::move(coeffs)), order_(order) {
    if (order < 0) throw std::domain_error("DiagJet: negative order");
    if (order != kExact && static_cast<int>(c_.size()) > order) c_.resize(static_cast<std::size_t>(order));
    trim();
  }

  /// The jet h itself.
  static DiagJet h() { return DiagJet({R(0), R(1)}, kExact); }

  int order() const { return order_; }
  bool exact() const { return order_ == kExact; }

  /// Coefficient of h^m; m must be below the known order.
  R coeff(int m) const {
    if (m < 0) return R(0);
    if (m >= order_) throw std::out_of_range("DiagJet: coefficient beyond known order");
    return m < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(m)] : R(0);
  }
  const std::vector<R> &stored() const { return c_; }

  bool is_zero() const { return c_.empty(); }

  /// (d/dx J)_m = c_m' + (m+1) c_{m+1}; the known order drops by one.
  DiagJet derivative() const {
    if (!exact() && order_ == 0) return DiagJet({}, 0);
    int no = exact() ? kExact : order_ - 1;
    std::vector<R> out;
    std::size_t n = c_.size();
    for (std::size_t m = 0; m < n; ++m) {
      R v = ring::derive(c_[m]);
      if (m + 1 < n) v = v + c_[m + 1] * R(static_cast<int>(m + 1));
      out.push_back(std::move(v));
    }
    return DiagJet(std::move(out), no);
  }

  /// Multiplication by h^p, p >= 0.
  DiagJet shifted(int p) const {
    if (p < 0) throw std::domain_error("DiagJet: negative shift");
    std::vector<R> out(static_cast<std::size_t>(p), R(0));
    out.insert(out.end(), c_.begin(), c_.end());
    return DiagJet(std::move(out), exact() ? kExact : order_ + p);
  }

  /// Drops the known order to at most m.
  DiagJet truncated(int m) const { return DiagJet(c_, std::min(order_, m)); }

  friend DiagJet operator+(const DiagJet &a, const DiagJet &b) {
    int o = std::min(a.order_, b.order_);
    std::size_t n = std::max(a.c_.size(), b.c_.size());
    if (o != kExact) n = std::min(n, static_cast<std::size_t>(o));
    std::vector<R> out(n, R(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (i < a.c_.size()) out[i] = out[i] + a.c_[i];
      if (i < b.c_.size()) out[i] = out[i] + b.c_[i];
    }
    return DiagJet(std::move(out), o);
  }
  friend DiagJet operator-(const DiagJet &a) {
    std::vector<R> out;
    for (const auto &c : a.c_) out.push_back(-c);
    return DiagJet(std::move(out), a.order_);
  }
  friend DiagJet operator-(const DiagJet &a, const DiagJet &b) { return a + (-b); }

  friend DiagJet operator*(const DiagJet &a, const DiagJet &b) {
    int o = std::min(a.order_, b.order_);
    std::size_t n = a.c_.empty() || b.c_.empty() ? 0 : a.c_.size() + b.c_.size() - 1;
    if (o != kExact) n = std::min(n, static_cast<std::size_t>(o));
    std::vector<R> out(n, R(0));
    for (std::size_t i = 0; i < a.c_.size() && i < n; ++i) {
      if (ring::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size() && i + j < n; ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
    }
    return DiagJet(std::move(out), o);
  }

  DiagJet &operator+=(const DiagJet &o) { return *this = *this + o; }
  DiagJet &operator-=(const DiagJet &o) { return *this = *this - o; }
  DiagJet &operator*=(const DiagJet &o) { return *this = *this * o; }

  /// Equality on the common known range.
  friend bool operator==(const DiagJet &a, const DiagJet &b) {
    int o = std::min(a.order_, b.order_);
    std::size_t n = std::max(a.c_.size(), b.c_.size());
    if (o != kExact) n = std::min(n, static_cast<std::size_t>(o));
    for (std::size_t i = 0; i < n; ++i) {
      R x = i < a.c_.size() ? a.c_[i] : R(0);
      R y = i < b.c_.size() ? b.c_[i] : R(0);
      if (!(x == y)) return false;
    }
    return true;
  }
  friend bool operator!=(const DiagJet &a, const DiagJet &b) { return !(a == b); }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t m = 0; m < c_.size(); ++m) {
      if (ring::is_zero(c_[m])) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << ring::str(c_[m]) << ")";
      if (m > 0) os << "*h^" << m;
    }
    if (first) os << "0";
    if (!exact()) os << " + O(h^" << order_ << ")";
    return os.str();
  }

  friend std::ostream &operator<<(std::ostream &os, const DiagJet &j) { return os << j.str(); }

private:
  std::vector<R> c_;
  int order_;

  void trim() {
    while (!c_.empty() && ring::is_zero(c_.back())) c_.pop_back();
  }
};

/// Taylor jet of f(x, y) about y = x: c_m = (-1)^m / m! * d^m f/dy^m at y = x.
inline DiagJet<RatFunc> taylor_jet(const RatFunc &f, int order) {
  std::vector<RatFunc> c;
  RatFunc d = f;
  Rat scale(1);
  const MPoly x = MPoly::var(Var::X);
  for (int m = 0; m < order; ++m) {
    c.push_back(d.substitute(Var::Y, x).scaled(scale));
    d = d.derivative(Var::Y);
    scale = -scale / Rat(m + 1);
  }
  return DiagJet<RatFunc>(std::move(c), order);
}

namespace ring {
template <class R>
DiagJet<R> derive(const DiagJet<R> &j) {
  return j.derivative();
}
template <class R>
bool is_zero(const DiagJet<R> &j) {
  return j.is_zero();
}
template <class R>
bool derivatives_terminate(const DiagJet<R> &j) {
  if (!j.exact()) return false;
  for (const auto &c : j.stored())
    if (!derivatives_terminate(c)) return false;
  return true;
}
template <class R>
std::string str(const DiagJet<R> &j) {
  return j.str();
}
}  // namespace ring

}  // namespace hk

#endif  // HK_DIAGJET_HPP
