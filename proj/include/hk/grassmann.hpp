#ifndef HK_GRASSMANN_HPP
#define HK_GRASSMANN_HPP

#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hk/linalg.hpp"
#include "hk/parse.hpp"
#include "hk/pdo.hpp"

namespace hk {

/// A point of Gr_0 given by a polynomial tau function in s1..s3 or by
/// finitely many conditions sum_m a_m e(m, 0), e(m, 0): g -> g^(m)(0).
struct GrPoint {
  enum class Mode { Tau, Conditions };
  Mode mode = Mode::Tau;
  MPoly tau{1};
  std::vector<std::vector<Rat>> conditions;
  std::optional<int> N;
};

/// Psi = (1 + sum psi_k z^-k) e^{xz}, Psi* = (1 + sum psi*_k z^-k) e^{-xz}.
/// tau is the polynomial whose zeros carry all poles of the psi's.
struct WaveData {
  std::vector<RatFunc> psi;
  std::vector<RatFunc> psi_star;
  MPoly tau{1};

  int m1() const { return static_cast<int>(psi.size()); }
  int m2() const { return static_cast<int>(psi_star.size()); }
  /// psi_k with psi_0 = 1.
  RatFunc psi_k(int k) const { return k == 0 ? RatFunc(1) : (k <= m1() ? psi[k - 1] : RatFunc()); }
  RatFunc psi_star_k(int k) const { return k == 0 ? RatFunc(1) : (k <= m2() ? psi_star[k - 1] : RatFunc()); }
};

/// Values substituted for s1, s2, s3; nullopt keeps the time symbolic.
/// x always enters through s1 -> x + s1.
using Times = std::array<std::optional<Rat>, 3>;
inline Times zero_times() { return {Rat(0), Rat(0), Rat(0)}; }
inline Times symbolic_times() { return {std::nullopt, std::nullopt, std::nullopt}; }

namespace detail {

using WPoly = std::vector<MPoly>;  // polynomial in w with MPoly coefficients

inline WPoly wmul(const WPoly &a, const WPoly &b) {
  if (a.empty() || b.empty()) return {};
  WPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// tau(s + sign [w]) with [w] = (w, w^2/2, w^3/3), as coefficients of w^k.
inline WPoly miwa_shift(const MPoly &tau, int sign) {
  static constexpr Var times[3] = {Var::S1, Var::S2, Var::S3};
  WPoly out;
  for (const auto &t : tau.terms()) {
    Exponents rest = t.exp;
    WPoly acc{MPoly::monomial(Exponents{}, t.coeff)};
    for (int j = 0; j < 3; ++j) {
      const int e = rest[static_cast<int>(times[j])];
      rest[static_cast<int>(times[j])] = 0;
      if (e == 0) continue;
      WPoly base(static_cast<std::size_t>(j + 2));
      base[0] = MPoly::var(times[j]);
      base[static_cast<std::size_t>(j + 1)] = MPoly(Rat(sign, j + 1));
      WPoly p{MPoly(1)};
      for (int i = 0; i < e; ++i) p = wmul(p, base);
      acc = wmul(acc, p);
    }
    for (auto &c : acc) c = c.shifted(rest);
    if (out.size() < acc.size()) out.resize(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) out[k] += acc[k];
  }
  while (!out.empty() && out.back().is_zero()) out.pop_back();
  return out;
}

inline MPoly specialize(const MPoly &p, const Times &times) {
  const MPoly x = MPoly::var(Var::X);
  MPoly r = p.substitute(Var::S1, x + (times[0] ? MPoly(*times[0]) : MPoly::var(Var::S1)));
  if (times[1]) r = r.substitute(Var::S2, MPoly(*times[1]));
  if (times[2]) r = r.substitute(Var::S3, MPoly(*times[2]));
  return r;
}

inline std::vector<RatFunc> shifted_ratios(const MPoly &tau, int sign, const Times &times, const MPoly &den) {
  WPoly w = miwa_shift(tau, sign);
  std::vector<RatFunc> out;
  for (std::size_t k = 1; k < w.size(); ++k) out.push_back(RatFunc(specialize(w[k], times), den));
  while (!out.empty() && out.back().is_zero()) out.pop_back();
  return out;
}

}  // namespace detail

/// Sato's formulas: Psi = tau(s - [1/z]) / tau(s) e^{xz}, Psi* = tau(s + [1/z]) / tau(s) e^{-xz}.
inline WaveData baker_from_tau(const MPoly &tau, const Times &times = zero_times()) {
  if (tau.is_zero()) throw std::domain_error("baker: tau function is identically zero");
  for (Var v : {Var::X, Var::Y, Var::H})
    if (tau.depends_on(v)) throw std::invalid_argument("baker: tau must be a polynomial in s1, s2, s3");
  WaveData w;
  w.tau = detail::specialize(tau, times);
  if (w.tau.is_zero()) throw std::domain_error("baker: tau vanishes identically at the chosen times");
  w.psi = detail::shifted_ratios(tau, -1, times, w.tau);
  w.psi_star = detail::shifted_ratios(tau, +1, times, w.tau);
  return w;
}

/// 1 + sum psi_k D^-k
inline Pdo<RatFunc> dressing_S(const WaveData &w) {
  std::map<int, RatFunc> m{{0, RatFunc(1)}};
  for (int k = 1; k <= w.m1(); ++k) m.emplace(-k, w.psi_k(k));
  return Pdo<RatFunc>(std::move(m));
}

/// S^-1 = sum_j D^-j o psi*_j down to degree floor.
inline Pdo<RatFunc> dressing_S_inverse(const WaveData &w, int floor) {
  Pdo<RatFunc> r({{0, RatFunc(1)}}, floor);
  for (int j = 1; j <= w.m2() && -j >= floor; ++j)
    r = r + mul(Pdo<RatFunc>::D(-j), Pdo<RatFunc>::scalar(w.psi_star_k(j)), floor);
  return r;
}

namespace detail {

inline int max_condition_order(const std::vector<std::vector<Rat>> &conds) {
  int d = -1;
  for (const auto &c : conds)
    for (int m = static_cast<int>(c.size()) - 1; m >= 0; --m)
      if (!c[static_cast<std::size_t>(m)].is_zero()) {
        d = std::max(d, m);
        break;
      }
  return d;
}

inline void require_independent(const std::vector<std::vector<Rat>> &conds) {
  std::size_t width = 0;
  for (const auto &c : conds) width = std::max(width, c.size());
  Matrix<Rat> m;
  for (const auto &c : conds) {
    std::vector<Rat> row(width, Rat(0));
    std::copy(c.begin(), c.end(), row.begin());
    m.push_back(std::move(row));
  }
  if (rank(m) != conds.size()) throw std::invalid_argument("conditions are linearly dependent");
}

}  // namespace detail

/// Psi = q(x, z) e^{xz} / z^n with q monic of degree n in z, fixed by
/// <c_i, q e^{xz}> = 0; tau is the determinant of that linear system.
inline WaveData baker_from_conditions(const std::vector<std::vector<Rat>> &conds) {
  WaveData w;
  const int n = static_cast<int>(conds.size());
  if (n == 0) return w;
  detail::require_independent(conds);
  const MPoly x = MPoly::var(Var::X);
  // <sum_m a_m e(m,0), z^l e^{xz}> = sum_m a_m m!/(m-l)! x^{m-l}
  auto pairing = [&](const std::vector<Rat> &c, int l) {
    MPoly s;
    for (int m = l; m < static_cast<int>(c.size()); ++m) {
      const Rat &a = c[static_cast<std::size_t>(m)];
      if (a.is_zero()) continue;
      s += x.pow(m - l).scaled(a * factorial(m) / factorial(m - l));
    }
    return s;
  };
  Matrix<RatFunc> sys(static_cast<std::size_t>(n), std::vector<RatFunc>(static_cast<std::size_t>(n)));
  std::vector<RatFunc> rhs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto &c = conds[static_cast<std::size_t>(i)];
    for (int l = 0; l < n; ++l) sys[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] = RatFunc(pairing(c, l));
    rhs[static_cast<std::size_t>(i)] = -RatFunc(pairing(c, n));
  }
  RatFunc det = determinant(sys);
  if (det.is_zero()) throw std::domain_error("baker: degenerate condition system (determinant vanishes)");
  auto q = solve(sys, rhs);
  if (!q) throw std::domain_error("baker: degenerate condition system");
  w.tau = det.num().primitive();
  for (int k = 1; k <= n; ++k) w.psi.push_back((*q)[static_cast<std::size_t>(n - k)]);
  while (!w.psi.empty() && w.psi.back().is_zero()) w.psi.pop_back();

  // Psi* = (S*)^-1 e^{-xz}; W* contains z^{-M} C[z]... so at most M terms.
  const int depth = std::max(0, detail::max_condition_order(conds) + 1 - n);
  const int floor = -(depth + 2);
  Pdo<RatFunc> s_adj = adjoint(dressing_S(w), floor);
  Pdo<RatFunc> inv = inverse(s_adj, floor);
  for (int k = 1; k <= depth + 2; ++k) {
    RatFunc c = inv.coeff(-k);
    if (k > depth && !c.is_zero()) throw std::logic_error("baker: adjoint wave function is not finite");
    w.psi_star.push_back(k % 2 ? -c : c);
  }
  while (!w.psi_star.empty() && w.psi_star.back().is_zero()) w.psi_star.pop_back();
  return w;
}

inline WaveData baker(const GrPoint &p, const Times &times = zero_times()) {
  return p.mode == GrPoint::Mode::Tau ? baker_from_tau(p.tau, times) : baker_from_conditions(p.conditions);
}

struct KricheverResult {
  Pdo<RatFunc> op;        // S f(D) S^-1 down to the floor
  Pdo<RatFunc> diff;      // differential part
  Pdo<RatFunc> volterra;  // must vanish for f in A_W
  bool is_differential() const { return volterra.is_zero(); }
};

/// K_f = S f(D) S^-1 for f = sum_i f[i] z^i.
inline KricheverResult krichever_op(const WaveData &w, const std::vector<Rat> &f, int floor) {
  std::map<int, RatFunc> fm;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!f[i].is_zero()) fm.emplace(static_cast<int>(i), RatFunc(f[i]));
  Pdo<RatFunc> fd(std::move(fm));
  const int deg = fd.is_zero() ? 0 : fd.top();
  Pdo<RatFunc> left = mul(dressing_S(w), fd);
  KricheverResult r;
  r.op = mul(left, dressing_S_inverse(w, floor - deg), floor);
  auto [plus, minus] = split(r.op);
  r.diff = plus;
  r.volterra = minus;
  return r;
}

inline std::vector<Rat> monomial_symbol(int n) {
  std::vector<Rat> f(static_cast<std::size_t>(n + 1), Rat(0));
  f.back() = Rat(1);
  return f;
}

/// Whether z^N W is contained in W.
inline bool check_invariance(const GrPoint &p, int N) {
  if (N < 1) throw std::invalid_argument("invariance: N must be positive");
  if (p.mode == GrPoint::Mode::Conditions) {
    // z^N V_C in V_C iff each c o z^N lies in span(C);
    // <e(m,0), z^N g> = m!/(m-N)! <e(m-N,0), g>.
    std::size_t width = 0;
    for (const auto &c : p.conditions) width = std::max(width, c.size());
    Matrix<Rat> base;
    for (const auto &c : p.conditions) {
      std::vector<Rat> row(width, Rat(0));
      std::copy(c.begin(), c.end(), row.begin());
      base.push_back(std::move(row));
    }
    const std::size_t r0 = rank(base);
    for (const auto &c : p.conditions) {
      std::vector<Rat> moved(width, Rat(0));
      for (std::size_t m = static_cast<std::size_t>(N); m < c.size(); ++m)
        moved[m - static_cast<std::size_t>(N)] = c[m] * factorial(static_cast<int>(m)) / factorial(static_cast<int>(m) - N);
      Matrix<Rat> ext = base;
      ext.push_back(moved);
      if (rank(ext) != r0) return false;
    }
    return true;
  }
  WaveData w = baker_from_tau(p.tau, symbolic_times());
  return krichever_op(w, monomial_symbol(N), -(w.m1() + w.m2() + N + 2)).is_differential();
}

struct DressingResult {
  Pdo<RatFunc> V;
  bool intertwines = false;  // L V = V D^N
  std::vector<RatFunc> kernel;
  int degree_bound = 0;
  bool kernel_ok = false;  // m1 independent polynomial solutions found
};

/// V = sum_k psi_k D^{m1-k}, checked against L = K_{z^N}, with a search for
/// polynomial solutions of V p = 0 of degree <= bound.
inline DressingResult dressing_diffop(const WaveData &w, int N, std::optional<int> bound = std::nullopt) {
  DressingResult out;
  const int m1 = w.m1();
  std::map<int, RatFunc> vm;
  for (int k = 0; k <= m1; ++k) vm.emplace(m1 - k, w.psi_k(k));
  out.V = Pdo<RatFunc>(std::move(vm));

  KricheverResult k = krichever_op(w, monomial_symbol(N), -1);
  if (k.op.floor() > 0) throw std::logic_error("dressing: Krichever operator not resolved to degree 0");
  out.intertwines = k.volterra.is_zero() && (mul(k.diff, out.V) - mul(out.V, Pdo<RatFunc>::D(N))).is_zero();

  int d = m1;
  for (const auto &p : w.psi) d = std::max(d, m1 + p.num().degree(Var::X) + p.den().degree(Var::X));
  out.degree_bound = bound ? *bound : d;
  const int D = out.degree_bound;
  const MPoly x = MPoly::var(Var::X);

  std::vector<RatFunc> images;
  MPoly common(1);
  for (int e = 0; e <= D; ++e) {
    RatFunc img;
    RatFunc deriv(x.pow(e));
    for (int order = 0; order <= m1; ++order) {
      img += w.psi_k(m1 - order) * deriv;
      deriv = deriv.derivative(Var::X);
    }
    if (!img.is_zero()) {
      MPoly g = gcd(common, img.den());
      common = *divide_exact(common * img.den(), g);
    }
    images.push_back(std::move(img));
  }
  std::vector<std::vector<MPoly>> cols;
  std::size_t rows = 0;
  for (const auto &img : images) {
    MPoly n = img.is_zero() ? MPoly() : img.num() * *divide_exact(common, img.den());
    cols.push_back(n.coefficients_in(Var::X));
    rows = std::max(rows, cols.back().size());
  }
  Matrix<RatFunc> sys(rows, std::vector<RatFunc>(static_cast<std::size_t>(D + 1)));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < cols[c].size(); ++r) sys[r][c] = RatFunc(cols[c][r]);
  for (const auto &v : nullspace(sys, static_cast<std::size_t>(D + 1))) {
    RatFunc p;
    for (int e = 0; e <= D; ++e) p += v[static_cast<std::size_t>(e)] * RatFunc(x.pow(e));
    out.kernel.push_back(p);
  }
  out.kernel_ok = static_cast<int>(out.kernel.size()) == m1;
  return out;
}

/// Parses the line-oriented GrPoint format:
///   mode: tau|conditions
///   tau: <polynomial in s1, s2, s3>
///   c: a0 a1 a2 ...        (one line per condition)
///   N: <int>               (optional)
/// Blank lines and '#' comments are ignored.
inline GrPoint parse_grpoint(std::string_view text) {
  GrPoint p;
  std::optional<GrPoint::Mode> mode;
  bool have_tau = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string &msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto colon = line.find(':');
    std::string key = line.substr(0, colon == std::string::npos ? line.size() : colon);
    key.erase(0, key.find_first_not_of(" \t\r"));
    key.erase(key.find_last_not_of(" \t\r") + 1);
    if (key.empty() && colon == std::string::npos) continue;
    if (colon == std::string::npos) fail("expected 'key: value'");
    std::string value = line.substr(colon + 1);
    if (key == "mode") {
      std::istringstream v(value);
      std::string m;
      v >> m;
      if (m == "tau")
        mode = GrPoint::Mode::Tau;
      else if (m == "conditions")
        mode = GrPoint::Mode::Conditions;
      else
        fail("unknown mode '" + m + "'");
    } else if (key == "tau") {
      try {
        p.tau = parse_mpoly(value);
      } catch (const std::invalid_argument &e) {
        fail(e.what());
      }
      have_tau = true;
    } else if (key == "c") {
      std::istringstream v(value);
      std::vector<Rat> c;
      std::string tok;
      while (v >> tok) {
        try {
          c.push_back(Rat::parse(tok));
        } catch (const std::exception &e) {
          fail(e.what());
        }
      }
      if (c.empty()) fail("empty condition");
      p.conditions.push_back(std::move(c));
    } else if (key == "N") {
      try {
        std::size_t used = 0;
        std::string v = value;
        int n = std::stoi(v, &used);
        if (v.find_first_not_of(" \t\r", used) != std::string::npos || n < 2) fail("N must be an integer >= 2");
        p.N = n;
      } catch (const std::logic_error &) {
        fail("N must be an integer >= 2");
      }
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!mode) throw ParseError("missing 'mode:' line");
  p.mode = *mode;
  if (p.mode == GrPoint::Mode::Tau) {
    if (!have_tau) throw ParseError("tau mode requires a 'tau:' line");
    if (!p.conditions.empty()) throw ParseError("tau mode does not take conditions");
    if (p.tau.is_zero()) throw ParseError("tau must be nonzero");
  } else {
    if (have_tau) throw ParseError("conditions mode does not take a tau line");
    detail::require_independent(p.conditions);
  }
  if (p.N && !check_invariance(p, *p.N))
    throw ParseError("point is not invariant under multiplication by z^" + std::to_string(*p.N));
  return p;
}

}  // namespace hk

#endif  // HK_GRASSMANN_HPP
