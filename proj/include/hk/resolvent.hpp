#ifndef HK_RESOLVENT_HPP
#define HK_RESOLVENT_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hk/grassmann.hpp"

namespace hk {

/// Coefficients of Psi(x,z) Psi*(y,z) = (sum_n omega_n(x,y) z^-n) e^{(x-y)z}.
struct ResolventTable {
  std::vector<RatFunc> exact;                   // omega_0, omega_1, ...
  std::map<std::pair<int, int>, DiffPoly> jets;  // (n, m) -> d_y^m omega_n |_{y=x}
  std::optional<int> vanishing_index;
  MPoly tau{1};  // every exact omega_n times tau(x) tau(y) is a polynomial

  RatFunc omega(int n) const {
    return n >= 0 && n < static_cast<int>(exact.size()) ? exact[static_cast<std::size_t>(n)] : RatFunc();
  }

  std::string str() const {
    std::string s;
    for (std::size_t n = 0; n < exact.size(); ++n) s += "omega[" + std::to_string(n) + "] = " + exact[n].str() + "\n";
    return s;
  }
};

/// f(x) -> f(y)
inline RatFunc at_y(const RatFunc &f) { return f.swapped(Var::X, Var::Y); }

inline ResolventTable res_exact(const WaveData &w) {
  ResolventTable t;
  const int top = w.m1() + w.m2();
  std::vector<RatFunc> star_y;
  for (int j = 0; j <= w.m2(); ++j) star_y.push_back(at_y(w.psi_star_k(j)));
  for (int n = 0; n <= top; ++n) {
    RatFunc s;
    for (int k = std::max(0, n - w.m2()); k <= std::min(n, w.m1()); ++k)
      s += w.psi_k(k) * star_y[static_cast<std::size_t>(n - k)];
    t.exact.push_back(std::move(s));
  }
  t.vanishing_index = top + 1;
  t.tau = w.tau;
  return t;
}

/// d_y^m f(x,y) restricted to y = x.
inline RatFunc diagonal_derivative(const RatFunc &f, int m) {
  RatFunc g = f;
  for (int i = 0; i < m && !g.is_zero(); ++i) g = g.derivative(Var::Y);
  return g.substitute(Var::Y, MPoly::var(Var::X));
}

/// Jets d_y^m omega_n(x,y)|_{y=x} of the resolvent of l, for n <= n_max, m <= m_max:
/// sum_p binom(m,p) (-1)^p res(P^{n-1+m-p} D^p), P = l^{1/N}.
template <class R>
std::map<std::pair<int, int>, R> res_diag_jets(const Pdo<R> &l, int n_max, int m_max) {
  const int N = require_normal_form(l);
  if (n_max < 0 || m_max < 0) throw std::invalid_argument("resolvent: negative jet range");
  const int a_max = std::max(0, n_max - 1 + m_max);
  const int trunc = -1 - m_max;
  Pdo<R> P = nth_root(l, N, trunc - a_max);
  // res(P^a D^p) is the coefficient of D^{-1-p} in P^a
  std::vector<Pdo<R>> powers{Pdo<R>::D(0)};
  // each later factor of P raises the floor by one
  for (int a = 1; a <= a_max; ++a) powers.push_back(mul(powers.back(), P, trunc - (a_max - a)));
  std::map<std::pair<int, int>, R> out;
  for (int m = 0; m <= m_max; ++m) out.emplace(std::pair{0, m}, R(m == 0 ? 1 : 0));
  for (int n = 1; n <= n_max; ++n)
    for (int m = 0; m <= m_max; ++m) {
      R s(0);
      for (int p = 0; p <= m; ++p) {
        const int a = n - 1 + m - p;
        const R &c = powers[static_cast<std::size_t>(a)].coeff(-1 - p);
        if (ring::is_zero(c)) continue;
        R term = R(binom(m, p)) * c;
        s = p % 2 ? s - term : s + term;
      }
      out.emplace(std::pair{n, m}, std::move(s));
    }
  return out;
}

template <class R>
R res_diag_jet(const Pdo<R> &l, int n, int m) {
  if (n < 0 || m < 0) throw std::invalid_argument("resolvent: negative jet index");
  return res_diag_jets(l, n, m).at({n, m});
}

/// Symbolic table for D^N + sum u_j D^j.
inline ResolventTable res_jets(int N, int n_max, int m_max) {
  ResolventTable t;
  t.jets = res_diag_jets(generic_operator(N), n_max, m_max);
  return t;
}

/// Wave data of (-1)^N L*: tilde psi_k = (-1)^k psi*_k, tilde psi*_k = (-1)^k psi_k.
inline WaveData dual_wave(const WaveData &w) {
  WaveData d;
  d.tau = w.tau;
  for (int k = 1; k <= w.m2(); ++k) d.psi.push_back(k % 2 ? -w.psi_star_k(k) : w.psi_star_k(k));
  for (int k = 1; k <= w.m1(); ++k) d.psi_star.push_back(k % 2 ? -w.psi_k(k) : w.psi_k(k));
  return d;
}

/// omega_n(x,y) == (-1)^n dual omega_n(y,x) for every n.
inline bool res_check_duality(const ResolventTable &a, const ResolventTable &dual) {
  if (a.exact.size() != dual.exact.size()) throw std::invalid_argument("resolvent: tables of unequal length");
  for (std::size_t n = 0; n < a.exact.size(); ++n) {
    RatFunc d = dual.exact[n].swapped(Var::X, Var::Y);
    if (!(a.exact[n] == (n % 2 ? -d : d))) return false;
  }
  return true;
}

}  // namespace hk

#endif  // HK_RESOLVENT_HPP
