#ifndef HK_HADAMARD_HPP
#define HK_HADAMARD_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hk/diagjet.hpp"
#include "hk/resolvent.hpp"

namespace hk {

/// Hadamard coefficients H_k^j, k >= 1, 0 <= j <= N-2, either as exact functions
/// of (x, y) or as jets in h = x - y with differential-polynomial coefficients.
struct HadamardTable {
  KappaSign kappa;
  std::map<std::pair<int, int>, RatFunc> entries;
  std::map<std::pair<int, int>, DiagJet<DiffPoly>> jets;
  int k_max = 0;  // exact entries are stored for k <= k_max
  bool finite = false;
  std::optional<int> cutoff;  // smallest k0 with H_k^j = 0 for all k >= k0

  int N() const { return kappa.N; }

  RatFunc entry(int k, int j) const {
    auto it = entries.find({k, j});
    if (it != entries.end()) return it->second;
    if (cutoff && k >= *cutoff && j >= 0 && j <= N() - 2) return RatFunc();
    throw std::out_of_range("hadamard: H_" + std::to_string(k) + "^" + std::to_string(j) + " not computed");
  }
};

/// b_{k,j,n} with H_k^j = sum_n b_{k,j,n} (x-y)^{n-1} omega_n / (x-y)^{kN-j-1}, computed as
/// (-kappa N)^k res[D^-n (h^-1 D^{N-1})^k D^{-j-1}] over Laurent polynomials in h = x - y.
inline std::map<int, Rat> had_residue_weights(const KappaSign &ks, int k, int j) {
  const int N = ks.N;
  if (k < 1 || j < 0 || j > N - 2) throw std::invalid_argument("hadamard: weights need k >= 1 and 0 <= j <= N-2");
  using P = Pdo<LaurentH>;
  const P step = P::term(N - 1, LaurentH::monomial(-1, Rat(1)));
  P a = P::D(0);
  for (int i = 0; i < k; ++i) a = mul(a, step);
  const Rat scale = pow(Rat(-ks.kappa * N), k);
  std::map<int, Rat> row;
  for (int n = 1; n <= k * (N - 1) - j; ++n) {
    // res[X D^{-j-1}] is the D^j coefficient of X
    LaurentH c = mul(P::D(-n), a, j).coeff(j);
    if (c.is_zero()) continue;
    const int e = n - k * N + j;
    if (!c.is_monomial() || c.terms().begin()->first != e)
      throw std::logic_error("hadamard: residue is not the expected power of h");
    row.emplace(n, scale * c.coeff(e));
  }
  return row;
}

struct FinitenessReport {
  std::optional<int> m;  // max over nonzero omega_n, n >= 1, of n - 1 + deg(omega_n tau(x) tau(y))
  int guaranteed_zero_from = 1;  // H_k^j = 0 for every k >= this, from (k-1)N >= m

  /// The sharper per-j statement: H_k^j = 0 once kN - j - 1 >= m + 1.
  bool guaranteed_zero(int N, int k, int j) const { return !m || k * N - j - 1 >= *m + 1; }
};

namespace detail {

inline MPoly tau_xy(const ResolventTable &t) { return t.tau * t.tau.swapped(Var::X, Var::Y); }

/// omega_n tau(x) tau(y), which must be a polynomial.
inline MPoly omega_numerator(const ResolventTable &t, int n, const MPoly &txy) {
  RatFunc w = t.omega(n) * RatFunc(txy);
  if (!w.is_polynomial()) throw std::domain_error("hadamard: omega_" + std::to_string(n) + " has a pole off tau(x) tau(y)");
  return w.num().scaled(w.den().constant_value().inverse());
}

}  // namespace detail

inline FinitenessReport had_finiteness(const ResolventTable &t, int N) {
  if (!t.vanishing_index) throw std::domain_error("hadamard: resolvent does not terminate; not a Gr0 operator");
  const MPoly txy = detail::tau_xy(t);
  FinitenessReport r;
  for (int n = 1; n < *t.vanishing_index; ++n) {
    MPoly w = detail::omega_numerator(t, n, txy);
    if (w.is_zero()) continue;
    const int d = n - 1 + w.total_degree_in({Var::X, Var::Y});
    r.m = r.m ? std::max(*r.m, d) : d;
  }
  if (r.m) r.guaranteed_zero_from = (std::max(*r.m, 0) + N - 1) / N + 1;
  return r;
}

/// Exact Hadamard coefficients from the resolvent, for k up to k_max (default: the
/// first k the finiteness bound guarantees to vanish). Aborts on a pole at y = x.
inline HadamardTable had_from_resolvent(const ResolventTable &t, const KappaSign &ks,
                                        std::optional<int> k_max = std::nullopt) {
  if (t.exact.empty()) throw std::invalid_argument("hadamard: exact resolvent table required");
  const int N = ks.N;
  FinitenessReport fin = had_finiteness(t, N);
  HadamardTable out;
  out.kappa = ks;
  out.k_max = k_max ? *k_max : fin.guaranteed_zero_from;
  out.finite = true;
  const MPoly txy = detail::tau_xy(t);
  const MPoly h = MPoly::var(Var::X) - MPoly::var(Var::Y);
  std::vector<MPoly> num;
  for (int n = 0; n < static_cast<int>(t.exact.size()); ++n) num.push_back(detail::omega_numerator(t, n, txy));
  int last_nonzero = 0;
  for (int k = 1; k <= out.k_max; ++k)
    for (int j = 0; j <= N - 2; ++j) {
      MPoly q;
      for (const auto &[n, b] : had_residue_weights(ks, k, j))
        if (n < static_cast<int>(num.size()) && !num[static_cast<std::size_t>(n)].is_zero())
          q += (h.pow(n - 1) * num[static_cast<std::size_t>(n)]).scaled(b);
      for (int p = k * N - j - 1; p > 0 && !q.is_zero(); --p) {
        auto d = divide_exact(q, h);
        if (!d)
          throw std::logic_error("hadamard: H_" + std::to_string(k) + "^" + std::to_string(j) + " is singular on the diagonal");
        q = std::move(*d);
      }
      RatFunc e(q, txy);
      if (!e.is_zero()) last_nonzero = k;
      out.entries.emplace(std::pair{k, j}, std::move(e));
    }
  // the bound guarantees zeros from guaranteed_zero_from on, so the tail is known
  if (out.k_max + 1 >= fin.guaranteed_zero_from) out.cutoff = last_nonzero + 1;
  return out;
}

/// Checks 1 + sum H_k^j kappa^k/N^k D^j D_N^k = sum omega_n D^-n down to degree floor,
/// with D_N = -(x-y) D^{1-N} + (N-1) D^-N and D acting on x only.
inline bool had_operator_identity(const HadamardTable &H, const ResolventTable &t, int floor) {
  const int N = H.N();
  using P = Pdo<RatFunc>;
  const RatFunc h = RatFunc::var(Var::X) - RatFunc::var(Var::Y);
  const P dn({{1 - N, -h}, {-N, RatFunc(N - 1)}});
  P lhs = P::D(0).truncated(floor);
  P dk = P::D(0);
  for (int k = 1; k * (1 - N) + N - 2 >= floor; ++k) {
    dk = mul(dk, dn);
    const Rat c = pow(Rat(H.kappa.kappa), k) / pow(Rat(N), k);
    for (int j = 0; j <= N - 2; ++j) {
      if (k * (1 - N) + j < floor) continue;
      RatFunc e;
      try {
        e = H.entry(k, j);
      } catch (const std::out_of_range &) {
        throw std::domain_error("hadamard: table does not reach the requested floor");
      }
      if (e.is_zero()) continue;
      lhs = lhs + (e * RatFunc(c)) * mul(P::D(j), dk).truncated(floor);
    }
  }
  std::map<int, RatFunc> r;
  for (int n = 0; n <= -floor; ++n)
    if (!t.omega(n).is_zero()) r.emplace(-n, t.omega(n));
  if (!t.vanishing_index && static_cast<int>(t.exact.size()) <= -floor)
    throw std::domain_error("hadamard: resolvent table does not reach the requested floor");
  return (lhs - P(std::move(r), floor)).is_zero();
}

/// H_k^j(x,x) = kappa^k / (1-(j+1)/N)_k * res L^{k-(j+1)/N}.
template <class R>
R had_diag(const Pdo<R> &l, const KappaSign &ks, int k, int j) {
  const int N = require_normal_form(l);
  if (N != ks.N) throw std::invalid_argument("hadamard: operator order does not match N");
  if (k < 1 || j < 0 || j > N - 2) throw std::invalid_argument("hadamard: need k >= 1 and 0 <= j <= N-2");
  const Rat c = pow(Rat(ks.kappa), k) / pochhammer(Rat(1) - Rat(j + 1, N), k);
  return R(c) * res_diag_jet(l, k * N - j, 0);
}

/// Table of the dual equation d_t v = kappa L* v, written for the monic operator
/// (-1)^N L* with sign (-1)^N kappa: H~_k^j(x,y) = (-1)^j H_k^j(y,x).
inline HadamardTable had_dual(const HadamardTable &H) {
  HadamardTable d = H;
  d.kappa = KappaSign(H.N(), H.N() % 2 ? -H.kappa.kappa : H.kappa.kappa);
  d.jets.clear();
  for (auto &[kj, e] : d.entries) {
    e = e.swapped(Var::X, Var::Y);
    if (kj.second % 2) e = -e;
  }
  return d;
}

/// d_x^j f(x,y) at y = x for a jet in h = x - y.
template <class R>
R diag_x_derivative(const DiagJet<R> &f, int j) {
  DiagJet<R> g = f;
  for (int i = 0; i < j; ++i) g = g.derivative();
  return g.coeff(0);
}

namespace detail {

// Unique smooth solution of (k+1) H + h d_x H = a as a jet in h.
inline DiagJet<DiffPoly> solve_transport(int k, const DiagJet<DiffPoly> &a) {
  const int order = a.order();
  std::vector<DiffPoly> c;
  for (int m = 0; m < order; ++m) {
    DiffPoly v = a.coeff(m);
    if (m > 0) v = v - c.back().derivative();
    c.push_back(v.scaled(Rat(1, k + 1 + m)));
  }
  return DiagJet<DiffPoly>(std::move(c), order);
}

inline DiagJet<DiffPoly> nth_derivative(DiagJet<DiffPoly> f, int n) {
  for (int i = 0; i < n; ++i) f = f.derivative();
  return f;
}

}  // namespace detail

inline constexpr int kMaxJetOrder = 64;

/// Hadamard coefficients of D^2 + u0 or D^3 + u1 D + u0 as jets of order M
/// (coefficients of h^0..h^{M-1}) for k <= k_max, from the transport recursions.
/// The odd-N sign enters through H_k(kappa) = kappa^k H_k(1).
inline HadamardTable had_jet_recursion(const KappaSign &ks, int k_max, int M) {
  const int N = ks.N;
  if (N != 2 && N != 3) throw std::invalid_argument("hadamard: jet recursion is available for N = 2 and N = 3 only");
  if (k_max < 1 || M < 1) throw std::invalid_argument("hadamard: need k_max >= 1 and M >= 1");
  const int m0 = N == 2 ? M + 2 * k_max : M + 3 * k_max + 1;
  if (m0 > kMaxJetOrder)
    throw std::domain_error("hadamard: requested depth needs jet order " + std::to_string(m0) + " > " +
                            std::to_string(kMaxJetOrder));
  using J = DiagJet<DiffPoly>;
  const J u0(DiffPoly::gen(0)), u1(DiffPoly::gen(1));
  auto L = [&](const J &f) {
    return N == 2 ? detail::nth_derivative(f, 2) + u0 * f
                  : detail::nth_derivative(f, 3) + u1 * f.derivative() + u0 * f;
  };
  HadamardTable out;
  out.kappa = ks;
  out.k_max = k_max;
  J h0 = J(1).truncated(m0), h1 = J(0).truncated(m0);
  for (int k = 0; k < k_max; ++k) {
    if (N == 2) {
      h0 = detail::solve_transport(k, L(h0));
    } else {
      J n1 = detail::solve_transport(k, L(h1) + J(3) * detail::nth_derivative(h0, 2) + u1 * h0);
      J rhs = L(h0) - detail::nth_derivative(n1, 2).shifted(1) - n1.derivative() -
              (u1 * n1).shifted(1) * J(Rat(1, 3));
      h0 = detail::solve_transport(k, rhs);
      h1 = n1;
    }
    const J sign(pow(Rat(ks.kappa), k + 1));
    if (h0.order() < M || (N == 3 && h1.order() < M)) throw std::logic_error("hadamard: jet budget miscomputed");
    out.jets.emplace(std::pair{k + 1, 0}, (sign * h0).truncated(M));
    if (N == 3) out.jets.emplace(std::pair{k + 1, 1}, (sign * h1).truncated(M));
  }
  return out;
}

}  // namespace hk

#endif  // HK_HADAMARD_HPP
