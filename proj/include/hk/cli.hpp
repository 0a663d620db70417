#ifndef HK_CLI_HPP
#define HK_CLI_HPP

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hk/airynum.hpp"
#include "hk/io.hpp"

namespace hk::cli {

enum Exit { kOk = 0, kFailed = 1, kInputError = 2 };

/// Input problems that are not parse errors (missing N, bad kappa text, ...).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string input;
  std::optional<int> N;
  std::string kappa;
  std::string format = "text";
  std::string s1, s2, s3;
  std::optional<int> floor, kmax;
  int jet_order = 6;
  bool jets = false, dual = false;
  int m = 1;
  std::optional<int> boussinesq;
  int m_max = 3, k_max = 4;
  std::vector<double> z;
  int deriv = 0;
  std::string grid = "default";
  double tol = 1e-6;
  double abs_tol = 1e-10, rel_tol = 1e-10;
};

namespace detail {

inline GrPoint load_point(const Options &o) {
  if (o.input.empty()) throw InputError("--input is required");
  std::ifstream f(o.input);
  if (!f) throw InputError("cannot read " + o.input);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_grpoint(ss.str());
}

inline int order(const Options &o, const GrPoint *p = nullptr) {
  if (o.N) return *o.N;
  if (p && p->N) return *p->N;
  throw InputError("N is required (--N or an 'N:' line)");
}

inline KappaSign kappa(const Options &o, int N) {
  if (o.kappa.empty()) return KappaSign::standard(N);
  int k = 0;
  if (o.kappa == "+1" || o.kappa == "1")
    k = 1;
  else if (o.kappa == "-1")
    k = -1;
  else
    throw InputError("kappa must be +1 or -1");
  return KappaSign(N, k);
}

inline Times times(const Options &o) {
  Times t = symbolic_times();
  const std::string *v[3] = {&o.s1, &o.s2, &o.s3};
  for (int i = 0; i < 3; ++i)
    if (!v[i]->empty()) t[static_cast<std::size_t>(i)] = parse_rat(*v[i]);
  return t;
}

inline WaveData wave(const Options &o, const GrPoint &p) { return baker(p, times(o)); }

inline void require_invariant(const GrPoint &p, int N) {
  if (!check_invariance(p, N)) throw InputError("the point is not invariant under z^" + std::to_string(N));
}

inline Pdo<RatFunc> operator_for(const WaveData &w, int N, int floor) {
  KricheverResult k = krichever_op(w, monomial_symbol(N), floor);
  if (!k.is_differential()) throw std::domain_error("z^" + std::to_string(N) + " does not preserve the point");
  return k.diff;
}

inline void require_format(const Options &o, std::initializer_list<const char *> allowed) {
  for (const char *a : allowed)
    if (o.format == a) return;
  throw InputError("format '" + o.format + "' is not available for this subcommand");
}

}  // namespace detail

inline int cmd_operator(const Options &o, std::ostream &out) {
  detail::require_format(o, {"text", "json"});
  GrPoint p = detail::load_point(o);
  const int N = detail::order(o, &p);
  KricheverResult k = krichever_op(detail::wave(o, p), monomial_symbol(N), o.floor.value_or(-3 * N));
  if (!k.is_differential()) {
    out << "not invariant: z^" << N << " leaves a Volterra part " << k.volterra.str() << "\n";
    return kFailed;
  }
  if (o.format == "json")
    out << operator_json(k.diff).dump(2) << "\n";
  else
    out << k.diff.str() << "\n";
  return kOk;
}

inline int cmd_resolvent(const Options &o, std::ostream &out) {
  detail::require_format(o, {"text", "json"});
  GrPoint p = detail::load_point(o);
  ResolventTable t = res_exact(detail::wave(o, p));
  if (o.format == "json")
    out << resolvent_json(t).dump(2) << "\n";
  else
    out << t.str();
  return kOk;
}

inline int cmd_hadamard(const Options &o, std::ostream &out) {
  detail::require_format(o, {"text", "json"});
  if (o.jets) {
    const int N = detail::order(o);
    HadamardTable J = had_jet_recursion(detail::kappa(o, N), o.kmax.value_or(2), o.jet_order);
    if (o.format == "json") {
      out << hadamard_jets_json(J).dump(2) << "\n";
    } else {
      for (const auto &[kj, jet] : J.jets)
        for (int m = 0; m < jet.order(); ++m)
          out << "H[" << kj.first << "][" << kj.second << "] h^" << m << ": " << jet.coeff(m).str() << "\n";
    }
    return kOk;
  }
  GrPoint p = detail::load_point(o);
  const int N = detail::order(o, &p);
  detail::require_invariant(p, N);
  WaveData w = detail::wave(o, p);
  ResolventTable t = res_exact(w);
  HadamardTable H = had_from_resolvent(t, detail::kappa(o, N), o.kmax);
  if (o.dual) H = had_dual(H);
  if (o.format == "json") {
    out << hadamard_json(H).dump(2) << "\n";
  } else {
    for (const auto &[kj, e] : H.entries)
      if (!e.is_zero()) out << "H[" << kj.first << "][" << kj.second << "] = " << e.str() << "\n";
    out << "cutoff = " << (H.cutoff ? std::to_string(*H.cutoff) : "unknown") << "\n";
  }
  if (!o.dual && H.cutoff && !had_operator_identity(H, t, o.floor.value_or(-2 * N))) return kFailed;
  return kOk;
}

inline int cmd_finiteness(const Options &o, std::ostream &out) {
  detail::require_format(o, {"text", "json"});
  GrPoint p = detail::load_point(o);
  const int N = detail::order(o, &p);
  detail::require_invariant(p, N);
  ResolventTable t = res_exact(detail::wave(o, p));
  FinitenessReport f = had_finiteness(t, N);
  HadamardTable H = had_from_resolvent(t, detail::kappa(o, N), f.guaranteed_zero_from + 1);
  if (o.format == "json") {
    out << finiteness_json(f, H).dump(2) << "\n";
  } else {
    out << "m = " << (f.m ? std::to_string(*f.m) : "none") << "\n";
    out << "guaranteed zero from k = " << f.guaranteed_zero_from << "\n";
    out << "observed cutoff = " << (H.cutoff ? std::to_string(*H.cutoff) : "unknown") << "\n";
  }
  return H.cutoff && *H.cutoff <= f.guaranteed_zero_from ? kOk : kFailed;
}

inline int cmd_flows(const Options &o, std::ostream &out) {
  detail::require_format(o, {"text", "json"});
  const int N = detail::order(o);
  const Pdo<DiffPoly> l = generic_operator(N);
  if (o.boussinesq) {
    if (N != 3) throw InputError("--boussinesq needs N = 3");
    const bool ok = gd_boussinesq_check(l, *o.boussinesq);
    if (o.format == "json")
      out << nlohmann::json{{"k", *o.boussinesq}, {"boussinesq", ok}}.dump(2) << "\n";
    else
      out << "boussinesq k=" << *o.boussinesq << ": " << (ok ? "ok" : "FAILED") << "\n";
    return ok ? kOk : kFailed;
  }
  FlowReport f = gd_rhs(l, o.m);
  if (o.format == "json") {
    out << flow_json(f).dump(2) << "\n";
  } else {
    for (const auto &[j, p] : f.rhs) out << "du" << j << "/ds" << o.m << " = " << p.str() << "\n";
  }
  return kOk;
}

inline int cmd_conserve(const Options &o, std::ostream &out) {
  detail::require_format(o, {"text", "json"});
  const int N = detail::order(o);
  const Pdo<DiffPoly> l = generic_operator(N);
  const KappaSign ks = detail::kappa(o, N);
  bool all = true;
  nlohmann::json rows = nlohmann::json::array();
  for (int m = 1; m <= o.m_max; ++m) {
    FlowReport f = gd_rhs(l, m);
    for (int k = 1; k <= o.k_max; ++k)
      for (int j = 0; j <= N - 2; ++j) {
        const bool ok = gd_euler_test(flow_derivative(gd_first_integral_integrand(l, ks, k, j), f));
        all = all && ok;
        rows.push_back({{"m", m}, {"k", k}, {"j", j}, {"total_derivative", ok}});
        if (o.format == "text") out << "m=" << m << " k=" << k << " j=" << j << ": " << (ok ? "ok" : "FAILED") << "\n";
      }
  }
  if (o.format == "json") out << nlohmann::json{{"N", N}, {"checks", rows}, {"all", all}}.dump(2) << "\n";
  return all ? kOk : kFailed;
}

inline int cmd_airy(const Options &o, std::ostream &out) {
  detail::require_format(o, {"text", "csv", "json"});
  const int N = detail::order(o);
  AiryEvalConfig cfg;
  cfg.kappa = detail::kappa(o, N);
  cfg.abs_tol = o.abs_tol;
  cfg.rel_tol = o.rel_tol;
  std::vector<double> zs = o.z.empty() ? std::vector<double>{-2, -1, 0, 1, 2} : o.z;
  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  if (o.format == "csv") out << "z,value,ode_residual\n";
  char buf[128];
  for (double z : zs) {
    const double v = airy_eval(cfg, z, o.deriv);
    const double r = airy_ode_residual(cfg, z);
    ok = ok && std::abs(r) < o.tol;
    if (o.format == "json") {
      rows.push_back({{"z", z}, {"value", v}, {"ode_residual", r}});
    } else {
      std::snprintf(buf, sizeof buf, o.format == "csv" ? "%.17g,%.17g,%.17g\n" : "z=%.17g value=%.17g ode_residual=%.3g\n",
                    z, v, r);
      out << buf;
    }
  }
  if (o.format == "json")
    out << nlohmann::json{{"N", N}, {"kappa", cfg.kappa.kappa}, {"deriv", o.deriv}, {"samples", rows}}.dump(2) << "\n";
  return ok ? kOk : kFailed;
}

inline int cmd_kernel_check(const Options &o, std::ostream &out, std::ostream &err) {
  if (o.format != "text" && o.format != "csv") throw InputError("kernel-check writes CSV");
  if (o.grid != "default") throw InputError("only --grid default is supported");
  GrPoint p = detail::load_point(o);
  const int N = detail::order(o, &p);
  detail::require_invariant(p, N);
  WaveData w = detail::wave(o, p);
  Pdo<RatFunc> l = detail::operator_for(w, N, -1);
  HadamardTable H = had_from_resolvent(res_exact(w), detail::kappa(o, N));
  if (o.dual) {
    H = had_dual(H);
    l = adjoint(l);
    if (N % 2) l = -l;
  }
  AiryEvalConfig cfg;
  cfg.abs_tol = o.abs_tol;
  cfg.rel_tol = o.rel_tol;
  KernelModel model(H, l, cfg);
  std::vector<KernelSample> samples;
  double worst = 0;
  for (const auto &[x, y, t] : default_kernel_grid()) {
    samples.push_back(model.sample(x, y, t));
    worst = std::max(worst, std::abs(samples.back().residual));
  }
  write_kernel_csv(out, samples);
  err << "max |residual| = " << worst << "\n";
  return worst < o.tol ? kOk : kFailed;
}

/// Runs one subcommand. Exit codes: 0 success, 1 verification failure or
/// computation error, 2 input error.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Hadamard coefficients and heat kernels for operators from the rational Grassmannian"};
  app.require_subcommand(1);
  Options o;

  auto input = [&](CLI::App *s) { s->add_option("--input", o.input, "GrPoint file")->check(CLI::ExistingFile); };
  auto order = [&](CLI::App *s) { s->add_option("--N", o.N, "operator order")->check(CLI::Range(2, 64)); };
  auto kappa = [&](CLI::App *s) { s->add_option("--kappa", o.kappa, "sign in d_t v = kappa L v (+1 or -1)"); };
  auto format = [&](CLI::App *s, const std::string &desc) { s->add_option("--format", o.format, desc); };
  auto params = [&](CLI::App *s) {
    s->add_option("--s1", o.s1, "value for s1 (p/q)");
    s->add_option("--s2", o.s2, "value for s2 (p/q)");
    s->add_option("--s3", o.s3, "value for s3 (p/q)");
  };

  CLI::App *op = app.add_subcommand("operator", "differential operator K_{z^N}");
  input(op), order(op), format(op, "text|json"), params(op);
  op->add_option("--floor", o.floor, "PDO precision floor (default -3N)");

  CLI::App *res = app.add_subcommand("resolvent", "resolvent coefficients omega_n(x,y)");
  input(res), format(res, "text|json"), params(res);

  CLI::App *had = app.add_subcommand("hadamard", "Hadamard coefficients H_k^j");
  input(had), order(had), kappa(had), format(had, "text|json"), params(had);
  had->add_option("--kmax", o.kmax, "largest k (default: finiteness bound)");
  had->add_option("--floor", o.floor, "floor for the operator identity check (default -2N)");
  had->add_flag("--jets", o.jets, "symbolic jets about the diagonal (N = 2, 3)");
  had->add_option("--jet-order", o.jet_order, "number of stored jet coefficients")->check(CLI::Range(1, 64));
  had->add_flag("--dual", o.dual, "table of the adjoint equation");

  CLI::App *fin = app.add_subcommand("finiteness", "finiteness bound and observed cutoff");
  input(fin), order(fin), kappa(fin), format(fin, "text|json"), params(fin);

  CLI::App *flows = app.add_subcommand("flows", "Gelfand-Dickey flows of the generic operator");
  order(flows), format(flows, "text|json");
  flows->add_option("--m", o.m, "flow index")->check(CLI::PositiveNumber);
  flows->add_option("--boussinesq", o.boussinesq, "check the Hadamard form of the Boussinesq flows at k")
      ->check(CLI::PositiveNumber);

  CLI::App *cons = app.add_subcommand("conserve", "first integrals via the Euler operator");
  order(cons), kappa(cons), format(cons, "text|json");
  cons->add_option("--mmax", o.m_max, "largest flow index")->check(CLI::PositiveNumber);
  cons->add_option("--kmax", o.k_max, "largest k")->check(CLI::PositiveNumber);

  CLI::App *airy = app.add_subcommand("airy", "Airy-type function values and ODE residuals");
  order(airy), kappa(airy), format(airy, "text|csv|json");
  airy->add_option("--z", o.z, "evaluation points");
  airy->add_option("--deriv", o.deriv, "derivative order")->check(CLI::NonNegativeNumber);
  airy->add_option("--tol", o.tol, "residual tolerance");
  airy->add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance");
  airy->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");

  CLI::App *kc = app.add_subcommand("kernel-check", "PDE residual of the finite heat kernel on a grid (CSV)");
  input(kc), order(kc), kappa(kc), format(kc, "csv"), params(kc);
  kc->add_option("--grid", o.grid, "grid name (default)");
  kc->add_option("--tol", o.tol, "residual tolerance");
  kc->add_flag("--dual", o.dual, "kernel of the adjoint equation");
  kc->add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance");
  kc->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (op->parsed()) return cmd_operator(o, out);
    if (res->parsed()) return cmd_resolvent(o, out);
    if (had->parsed()) return cmd_hadamard(o, out);
    if (fin->parsed()) return cmd_finiteness(o, out);
    if (flows->parsed()) return cmd_flows(o, out);
    if (cons->parsed()) return cmd_conserve(o, out);
    if (airy->parsed()) return cmd_airy(o, out);
    if (kc->parsed()) return cmd_kernel_check(o, out, err);
  } catch (const std::invalid_argument &e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kInputError;
}

}  // namespace hk::cli

#endif  // HK_CLI_HPP
