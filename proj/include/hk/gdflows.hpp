#ifndef HK_GDFLOWS_HPP
#define HK_GDFLOWS_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "hk/hadamard.hpp"

namespace hk {

/// du_j/ds_m for the flow dL/ds_m = [(L^{m/N})_+, L].
struct FlowReport {
  int m = 0;
  std::map<int, DiffPoly> rhs;  // family j -> du_j/ds_m
  std::optional<std::string> matched_against;

  bool is_trivial() const {
    for (const auto &[j, p] : rhs)
      if (!p.is_zero()) return false;
    return true;
  }
};

/// Flow of index m for the operator l (monic, no D^{N-1} term).
template <class R>
std::map<int, R> gd_flow_coefficients(const Pdo<R> &l, int m) {
  const int N = require_normal_form(l);
  if (m < 1) throw std::invalid_argument("gdflows: flow index must be positive");
  Pdo<R> plus = split(fractional_power(l, m, N, 0)).first;
  Pdo<R> c = commutator(plus, l);
  for (const auto &[k, v] : c.coeffs())
    if (k >= N - 1 && !ring::is_zero(v))
      throw std::logic_error("gdflows: commutator has a term of order " + std::to_string(k));
  std::map<int, R> out;
  for (int j = 0; j <= N - 2; ++j) out.emplace(j, c.coeff(j));
  return out;
}

inline FlowReport gd_rhs(const Pdo<DiffPoly> &l, int m) {
  FlowReport r;
  r.m = m;
  r.rhs = gd_flow_coefficients(l, m);
  return r;
}

/// d/ds_m of p along the flow: sum over generators u_j^(i) of dp/du_j^(i) * D^i(rhs_j).
inline DiffPoly flow_derivative(const DiffPoly &p, const FlowReport &flow) {
  DiffPoly out;
  for (const Generator &g : p.generators()) {
    auto it = flow.rhs.find(g.family);
    if (it == flow.rhs.end()) throw std::invalid_argument("gdflows: no flow for " + generator_name(g));
    out += p.partial(g) * it->second.derivative(g.order);
  }
  return out;
}

/// True iff p is a total x-derivative of a differential polynomial.
inline bool gd_euler_test(const DiffPoly &p) {
  if (!p.constant_term().is_zero()) return false;
  std::map<int, DiffPoly> euler;
  for (const Generator &g : p.generators()) {
    DiffPoly t = p.partial(g).derivative(g.order);
    euler[g.family] += g.order % 2 ? -t : t;
  }
  for (const auto &[j, e] : euler)
    if (!e.is_zero()) return false;
  return true;
}

/// Integrand H_k^j(x,x) of the first integral J_{k,j}.
inline DiffPoly gd_first_integral_integrand(const Pdo<DiffPoly> &l, const KappaSign &ks, int k, int j) {
  return had_diag(l, ks, k, j);
}

/// Boussinesq flows m = 3k-2 and m = 3k-1 against their Hadamard form, kappa = 1.
/// Diagonal values come from the residues, first x-derivatives on the diagonal
/// from the transport recursion.
inline bool gd_boussinesq_check(const Pdo<DiffPoly> &l, int k) {
  if (require_normal_form(l) != 3 || !(l == generic_operator(3)))
    throw std::invalid_argument("gdflows: expects the generic operator D^3 + u1 D + u0");
  if (k < 1) throw std::invalid_argument("gdflows: k must be positive");
  const KappaSign ks(3, 1);
  HadamardTable J = had_jet_recursion(ks, k, 2);
  const DiffPoly h0 = had_diag(l, ks, k, 0), h1 = had_diag(l, ks, k, 1);
  const DiffPoly dh0 = diag_x_derivative(J.jets.at({k, 0}), 1);
  const DiffPoly dh1 = diag_x_derivative(J.jets.at({k, 1}), 1);
  const Rat a = pochhammer(Rat(1, 3), k) * Rat(3), b = pochhammer(Rat(2, 3), k) * Rat(3);

  FlowReport first = gd_rhs(l, 3 * k - 2), second = gd_rhs(l, 3 * k - 1);
  return first.rhs.at(1) == h1.derivative().scaled(a) && first.rhs.at(0) == (h0 + dh1).derivative().scaled(a) &&
         second.rhs.at(1) == h0.derivative().scaled(b) && second.rhs.at(0) == dh0.derivative().scaled(b);
}

/// Sign e with dL/ds = e [(L^{m/N})_+, L] for an operator whose coefficients
/// depend on the parameter s, or nullopt if neither sign fits.
inline std::optional<int> gd_parameter_sign(const Pdo<RatFunc> &l, Var s, int m) {
  const int N = require_normal_form(l);
  auto flow = gd_flow_coefficients(l, m);
  bool plus = true, minus = true;
  for (int j = 0; j <= N - 2; ++j) {
    RatFunc d = l.coeff(j).derivative(s);
    plus = plus && d == flow.at(j);
    minus = minus && d == -flow.at(j);
  }
  if (plus && !minus) return 1;
  if (minus && !plus) return -1;
  if (plus && minus) return 0;
  return std::nullopt;
}

}  // namespace hk

#endif  // HK_GDFLOWS_HPP
