#ifndef HK_IO_HPP
#define HK_IO_HPP

#include <string>

#include <json.hpp>

#include "hk/gdflows.hpp"

namespace hk {

inline std::string family_name(int j) { return "u" + std::to_string(j); }

inline nlohmann::json operator_json(const Pdo<RatFunc> &l) {
  nlohmann::json c = nlohmann::json::object();
  for (const auto &[k, v] : l.coeffs()) c[family_name(k)] = v.str();
  return {{"N", l.top()}, {"operator", l.str()}, {"coefficients", c}};
}

inline nlohmann::json resolvent_json(const ResolventTable &t) {
  nlohmann::json omega = nlohmann::json::array();
  for (const auto &w : t.exact) omega.push_back(w.str());
  nlohmann::json out{{"omega", omega}, {"tau", t.tau.str()}};
  out["vanishing_index"] = t.vanishing_index ? nlohmann::json(*t.vanishing_index) : nlohmann::json();
  return out;
}

/// Nonzero exact entries only, ordered by (k, j).
inline nlohmann::json hadamard_json(const HadamardTable &H) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto &[kj, e] : H.entries)
    if (!e.is_zero()) entries.push_back({{"k", kj.first}, {"j", kj.second}, {"value", e.str()}});
  nlohmann::json out{{"N", H.N()}, {"kappa", H.kappa.kappa}, {"entries", entries}, {"finite", H.finite}};
  out["cutoff"] = H.cutoff ? nlohmann::json(*H.cutoff) : nlohmann::json();
  return out;
}

inline nlohmann::json hadamard_jets_json(const HadamardTable &H) {
  nlohmann::json jets = nlohmann::json::array();
  for (const auto &[kj, jet] : H.jets) {
    nlohmann::json c = nlohmann::json::array();
    for (int m = 0; m < jet.order(); ++m) c.push_back(jet.coeff(m).str());
    jets.push_back({{"k", kj.first}, {"j", kj.second}, {"h_coefficients", c}});
  }
  return {{"N", H.N()}, {"kappa", H.kappa.kappa}, {"jets", jets}};
}

inline nlohmann::json flow_json(const FlowReport &f) {
  nlohmann::json rhs = nlohmann::json::object();
  for (const auto &[j, p] : f.rhs) rhs[family_name(j)] = p.str();
  return {{"m", f.m}, {"rhs", rhs}};
}

inline nlohmann::json finiteness_json(const FinitenessReport &f, const HadamardTable &H) {
  nlohmann::json out{{"N", H.N()}, {"guaranteed_zero_from", f.guaranteed_zero_from}};
  out["m"] = f.m ? nlohmann::json(*f.m) : nlohmann::json();
  out["cutoff"] = H.cutoff ? nlohmann::json(*H.cutoff) : nlohmann::json();
  return out;
}

}  // namespace hk

#endif  // HK_IO_HPP
