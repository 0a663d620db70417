// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "hk/hk.hpp"

using namespace hk;

namespace {

constexpr double kGaussianTol = 1e-10;
constexpr double kAiryTol = 1e-8;
constexpr double kOdeTol = 1e-6;
constexpr double kKernelTol = 1e-6;
constexpr int kPropertyCases = 100;

struct Failure {
  std::string what;
};

void require(bool ok, const std::string &what) {
  if (!ok) throw Failure{what};
}

RatFunc rf(const char *s) { return parse_ratfunc(s); }

const DiffPoly u0 = DiffPoly::gen(0);
const DiffPoly u1 = DiffPoly::gen(1);
const RatFunc kTau = parse_ratfunc("(x + s1)^2/2 + s2");
const RatFunc kTauXY = parse_ratfunc("((x + s1)^2/2 + s2) * ((y + s1)^2/2 + s2)");
const RatFunc kH11 = parse_ratfunc("-3*(x*y + s1*(x + y) + s1^2 - 2*s2)/2") / kTauXY;
const RatFunc kH10 = parse_ratfunc("-3*(x + s1)/2") / kTauXY;

WaveData schur_two() { return baker_from_tau(parse_mpoly("s1^2/2 + s2"), symbolic_times()); }
WaveData rational_kdv() { return baker_from_tau(parse_mpoly("s1^3/3 - s3"), Times{Rat(0), Rat(0), std::nullopt}); }
WaveData tau_s1() { return baker_from_tau(parse_mpoly("s1"), symbolic_times()); }

Pdo<RatFunc> operator_of(const WaveData &w, int N) {
  KricheverResult k = krichever_op(w, monomial_symbol(N), -1);
  require(k.is_differential(), "z^N does not give a differential operator");
  return k.diff;
}

DiagJet<RatFunc> bind_jet(const DiagJet<DiffPoly> &j, const std::map<int, RatFunc> &b) {
  DiffPolyBinding bind(b);
  std::vector<RatFunc> c;
  for (const auto &d : j.stored()) c.push_back(bind.apply(d));
  return DiagJet<RatFunc>(std::move(c), j.order());
}

// Ai and Ai' by Maclaurin series.
std::pair<double, double> airy_series(double x) {
  const double c1 = 0.355028053887817239260, c2 = 0.258819403792806798405;
  double f = 0, g = 0, df = 0, dg = 0, a = 1, b = x;
  for (int k = 0; k < 80; ++k) {
    f += a;
    g += b;
    if (x != 0) {
      if (k > 0) df += a * 3 * k / x;
      dg += b * (3 * k + 1) / x;
    }
    a *= x * x * x / ((3.0 * k + 2) * (3.0 * k + 3));
    b *= x * x * x / ((3.0 * k + 3) * (3.0 * k + 4));
  }
  if (x == 0) dg = 1;
  return {c1 * f - c2 * g, c1 * df - c2 * dg};
}

// [A, B] read off from A(Bf) - B(Af) for a test function f.
std::map<int, DiffPoly> brute_commutator(const std::map<int, DiffPoly> &a, const std::map<int, DiffPoly> &b) {
  constexpr int kF = 9;
  const DiffPoly f = DiffPoly::gen(kF);
  auto act = [](const std::map<int, DiffPoly> &op, const DiffPoly &g) {
    DiffPoly r;
    for (const auto &[i, c] : op) r += c * g.derivative(i);
    return r;
  };
  DiffPoly g = act(a, act(b, f)) - act(b, act(a, f));
  std::map<int, DiffPoly> out;
  for (const Generator &gen : g.generators())
    if (gen.family == kF) out[gen.order] = g.partial(gen);
  return out;
}

DiffPoly random_coeff(std::mt19937 &rng) {
  std::uniform_int_distribution<int> pick(0, 4), c(-3, 3);
  switch (pick(rng)) {
    case 0: return DiffPoly(c(rng));
    case 1: return u0.scaled(Rat(c(rng)));
    case 2: return u1 + DiffPoly(c(rng));
    case 3: return u0.derivative();
    default: return u0 * u1;
  }
}

Pdo<DiffPoly> random_op(std::mt19937 &rng, int lo, int hi) {
  std::map<int, DiffPoly> m;
  for (int d = lo; d <= hi; ++d)
    if (rng() % 3 != 0) m.emplace(d, random_coeff(rng));
  if (m.empty()) m.emplace(hi, DiffPoly(1));
  return Pdo<DiffPoly>(m);
}

MPoly random_poly(std::mt19937 &rng) {
  std::uniform_int_distribution<int> nterms(1, 3), deg(0, 2), coef(-5, 5), var(0, 2);
  MPoly p;
  const int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    Exponents e{};
    e[static_cast<std::size_t>(var(rng))] += deg(rng);
    p += MPoly::monomial(e, Rat(coef(rng), 1 + (coef(rng) + 5) % 3));
  }
  return p.is_zero() ? MPoly(1) : p;
}

void golden_pipeline() {
  WaveData w = schur_two();
  Pdo<RatFunc> L = operator_of(w, 3);
  require(L.coeff(3) == RatFunc(1) && L.coeff(2).is_zero(), "operator is not monic normal form");
  require(L.coeff(1) == rf("-3*(x^2 + 2*s1*x + s1^2 - 2*s2)/2") / kTau.pow(2), "u1");
  require(L.coeff(0) == rf("-6*s2*(x + s1)") / kTau.pow(3), "u0");

  ResolventTable t = res_exact(w);
  require(t.omega(1) == rf("(x - y)*(x*y + s1*(x + y) + s1^2 - 2*s2)/2") / kTauXY, "omega_1");
  require(t.omega(2) == rf("(x^2 - 2*x*y - 2*s1*y - s1^2 + 2*s2)/2") / kTauXY, "omega_2");
  require(t.omega(3) == -rf("x + s1") / kTauXY, "omega_3");
  require(t.vanishing_index == 4, "omega_k must vanish from k = 4");
  for (int k = 4; k <= 8; ++k) require(t.omega(k).is_zero(), "omega_k nonzero for k >= 4");

  HadamardTable H = had_from_resolvent(t, KappaSign(3, 1), 6);
  require(H.entry(1, 1) == kH11, "H_1^1");
  require(H.entry(1, 0) == kH10, "H_1^0");
  for (const auto &[kj, e] : H.entries)
    if (kj.first >= 2) require(e.is_zero(), "H_k^j nonzero for k >= 2");
}

void duality() {
  WaveData w = schur_two();
  Pdo<RatFunc> L = operator_of(w, 3);
  const RatFunc u0star = rf("-3*(x + s1)*((s1 + x)^2 - 2*s2)/2") / kTau.pow(3);
  require(u0star == L.coeff(0) - L.coeff(1).derivative(Var::X), "u0* = u0 - u1'");
  require(adjoint(L) == Pdo<RatFunc>({{3, RatFunc(-1)}, {1, -L.coeff(1)}, {0, u0star}}), "adjoint operator");

  HadamardTable D = had_dual(had_from_resolvent(res_exact(w), KappaSign(3, 1)));
  require(D.entry(1, 1) == rf("3*(x*y + s1*(x + y) + s1^2 - 2*s2)/2") / kTauXY, "dual H_1^1");
  require(D.entry(1, 0) == rf("-3*(y + s1)/2") / kTauXY, "dual H_1^0");
  for (const auto &[kj, e] : D.entries)
    if (kj.first >= 2) require(e.is_zero(), "dual H_k^j nonzero for k >= 2");
  // the dual point gives the same table independently
  HadamardTable direct = had_from_resolvent(res_exact(dual_wave(w)), KappaSign(3, -1), D.k_max);
  require(direct.entries == D.entries, "dual table disagrees with the dual point");
}

void higher_order_same_point() {
  WaveData w = schur_two();
  ResolventTable t = res_exact(w);
  for (int N : {4, 5}) {
    const KappaSign ks = KappaSign::standard(N);
    FinitenessReport f = had_finiteness(t, N);
    require(f.m == 3, "m = 3");
    require(f.guaranteed_zero_from == 2, "bound predicts cutoff 2");
    HadamardTable H = had_from_resolvent(t, ks, 4);
    require(H.cutoff == 2, "observed cutoff");
    const RatFunc kN(Rat(ks.kappa * N));
    for (const auto &[kj, e] : H.entries) {
      const auto [k, j] = kj;
      RatFunc expect;
      if (k == 1 && j == N - 2) expect = -kN * rf("(x*y + s1*(x + y) + s1^2 - 2*s2)/2") / kTauXY;
      if (k == 1 && j == N - 3) expect = -kN * rf("(x + s1)/2") / kTauXY;
      require(e == expect, "N=" + std::to_string(N) + " H_" + std::to_string(k) + "^" + std::to_string(j));
    }
    require(agree(operator_of(w, N), fractional_power(operator_of(w, 3), N, 3, 0)), "K_{z^N} = L^{N/3}");
  }
}

void cross_method() {
  constexpr int kMaxK = 3, kJetOrder = 4;
  for (int N : {2, 3}) {
    const Pdo<DiffPoly> generic = generic_operator(N);
    for (int kappa : {1, -1}) {
      if (N == 2 && kappa == -1) continue;
      const KappaSign ks(N, kappa);
      HadamardTable jets = had_jet_recursion(ks, kMaxK, kJetOrder);
      for (int k = 1; k <= kMaxK; ++k)
        for (int j = 0; j <= N - 2; ++j)
          require(jets.jets.at({k, j}).coeff(0) == had_diag(generic, ks, k, j), "jet recursion vs diagonal formula");

      std::vector<WaveData> examples = N == 3 ? std::vector<WaveData>{schur_two()}
                                              : std::vector<WaveData>{rational_kdv(), tau_s1()};
      for (const WaveData &w : examples) {
        Pdo<RatFunc> L = operator_of(w, N);
        const auto b = coefficient_bindings(L);
        HadamardTable exact = had_from_resolvent(res_exact(w), ks, kMaxK);
        for (int k = 1; k <= kMaxK; ++k)
          for (int j = 0; j <= N - 2; ++j) {
            DiagJet<RatFunc> from_exact = taylor_jet(exact.entry(k, j), kJetOrder);
            require(bind_jet(jets.jets.at({k, j}), b) == from_exact, "jet recursion vs exact table");
            require(had_diag(L, ks, k, j) == from_exact.coeff(0), "diagonal formula vs exact table");
          }
      }
    }
  }
}

void second_order_closed_form() {
  const RatFunc h = rf("x - y");
  for (const WaveData &w : {tau_s1(), rational_kdv()}) {
    ResolventTable t = res_exact(w);
    HadamardTable H = had_from_resolvent(t, KappaSign(2, 1), 5);
    for (int k = 1; k <= 5; ++k) {
      RatFunc s;
      for (int n = 1; n <= k; ++n)
        s += RatFunc(pow(Rat(2), n) * pochhammer(Rat(n), 2 * k - 2 * n) / factorial(k - n)) * t.omega(n) /
             h.pow(2 * k - n);
      require(H.entry(k, 0) == (k % 2 ? -s : s), "closed form at k=" + std::to_string(k));
    }
  }
}

void structural_identities() {
  for (int N : {2, 3, 4}) {
    const Pdo<DiffPoly> l = generic_operator(N);
    for (int e = 1; e <= 3; ++e) require(residue(power(l, e)).is_zero(), "res L^l");
    auto jets = res_diag_jets(l, 3 * N + 1, 0);
    for (int e = 1; e <= 3; ++e) require(jets.at({e * N + 1, 0}).is_zero(), "omega_{lN+1}(x,x)");
  }
  struct Case {
    WaveData w;
    int N;
  };
  GrPoint cusp;
  cusp.mode = GrPoint::Mode::Conditions;
  cusp.conditions = {{Rat(0), Rat(0), Rat(1)}};
  std::vector<Case> cases{{WaveData{}, 2}, {WaveData{}, 3},   {WaveData{}, 4},   {schur_two(), 3},
                          {schur_two(), 4}, {schur_two(), 5}, {rational_kdv(), 2}, {tau_s1(), 2},
                          {baker(cusp, symbolic_times()), 3}, {baker(cusp, symbolic_times()), 4}};
  for (const auto &[w, N] : cases) {
    ResolventTable t = res_exact(w);
    HadamardTable H = had_from_resolvent(t, KappaSign::standard(N));
    require(H.cutoff.has_value(), "finite table");
    require(had_operator_identity(H, t, -2 * N), "operator identity at N=" + std::to_string(N));
  }
}

void gelfand_dickey() {
  for (int N = 2; N <= 5; ++N) {
    FlowReport t = gd_rhs(generic_operator(N), 1);
    for (int j = 0; j <= N - 2; ++j) require(t.rhs.at(j) == DiffPoly::gen(j).derivative(), "m = 1 is d_x");
    require(gd_rhs(generic_operator(N), N).is_trivial(), "m = N is trivial");
  }
  const DiffPoly kdv = u0.derivative(3).scaled(Rat(1, 4)) + (u0 * u0.derivative()).scaled(Rat(3, 2));
  require(gd_rhs(generic_operator(2), 3).rhs.at(0) == kdv, "KdV flow");
  std::map<int, DiffPoly> p{{3, DiffPoly(1)}, {1, u0.scaled(Rat(3, 2))}, {0, u0.derivative().scaled(Rat(3, 4))}};
  auto c = brute_commutator(p, {{2, DiffPoly(1)}, {0, u0}});
  require(c.size() == 1 && c.at(0) == kdv, "KdV flow vs brute force commutator");
  for (int k : {1, 2}) require(gd_boussinesq_check(generic_operator(3), k), "Boussinesq k=" + std::to_string(k));
}

void conservation() {
  for (int N : {2, 3}) {
    const Pdo<DiffPoly> l = generic_operator(N);
    const KappaSign ks = KappaSign::standard(N);
    for (int m = 1; m <= 3; ++m) {
      FlowReport f = gd_rhs(l, m);
      for (int k = 1; k <= 4; ++k)
        for (int j = 0; j <= N - 2; ++j)
          require(gd_euler_test(flow_derivative(gd_first_integral_integrand(l, ks, k, j), f)),
                  "N=" + std::to_string(N) + " m=" + std::to_string(m) + " k=" + std::to_string(k));
    }
  }
}

void numerics() {
  AiryEvalConfig two;
  two.kappa = KappaSign(2, 1);
  for (double z = -5; z <= 5.0001; z += 0.25) {
    const double g = std::exp(-z * z / 4) / std::sqrt(4 * std::numbers::pi);
    require(std::abs(airy_eval(two, z, 0) - g) < kGaussianTol, "A_2 vs Gaussian");
  }
  AiryEvalConfig three;
  three.kappa = KappaSign(3, 1);
  const double r = std::cbrt(3.0);
  for (double z = -4; z <= 4.0001; z += 0.25)
    require(std::abs(airy_eval(three, z, 0) - airy_series(-z / r).first / r) < kAiryTol, "A_3 vs Ai series");
  for (int N : {3, 4, 5}) {
    AiryEvalConfig c;
    c.kappa = KappaSign::standard(N);
    for (double z = -3; z <= 3.0001; z += 0.5)
      require(std::abs(airy_ode_residual(c, z)) < kOdeTol, "ODE residual N=" + std::to_string(N));
  }
  WaveData w = baker_from_tau(parse_mpoly("s1^2/2 + s2"), Times{Rat(0), Rat(1), Rat(0)});
  Pdo<RatFunc> L = operator_of(w, 3);
  HadamardTable H = had_from_resolvent(res_exact(w), KappaSign(3, 1));
  for (bool dual : {false, true}) {
    KernelModel m(dual ? had_dual(H) : H, dual ? -adjoint(L) : L, AiryEvalConfig{});
    for (const auto &[x, y, t] : default_kernel_grid())
      require(std::abs(m.sample(x, y, t).residual) < kKernelTol, dual ? "dual kernel residual" : "kernel residual");
  }
}

void property_suites() {
  using DP = Pdo<DiffPoly>;
  std::mt19937 rng(2026);
  for (int i = 0; i < kPropertyCases; ++i) {
    DP a = random_op(rng, -1, 1), b = random_op(rng, -2, 1), c = random_op(rng, -1, 2);
    require(agree(mul(mul(a, b, -4), c, -2), mul(a, mul(b, c, -4), -2)), "associativity");
  }
  for (int i = 0; i < kPropertyCases; ++i) {
    DP a = random_op(rng, -1, 2), b = random_op(rng, -1, 1);
    require(agree(adjoint(mul(a, b, -6), -3), mul(adjoint(b, -6), adjoint(a, -6), -3)), "adjoint antiautomorphism");
    require(agree(adjoint(adjoint(a, -3), -3), a.truncated(-3)), "adjoint involution");
  }
  for (int i = 0; i < kPropertyCases; ++i) {
    const int n = 2 + i % 2;
    std::map<int, DiffPoly> m{{n, DiffPoly(1)}, {0, random_coeff(rng)}};
    if (n == 3) m.emplace(1, random_coeff(rng));
    DP l(m);
    const int e = 1 + i % 3;
    require(fractional_power(l, e, n, -4).truncated(-2) == fractional_power(l, e, n, -2), "floor soundness (power)");
    require(inverse(nth_root(l, n, -5), -5).truncated(-3) == inverse(nth_root(l, n, -3), -3),
            "floor soundness (inverse root)");
  }
  for (int i = 0; i < kPropertyCases; ++i) {
    MPoly a = random_poly(rng), b = random_poly(rng), g = random_poly(rng);
    Rat k(i % 7 + 1, i % 5 + 1);
    if (i % 2) k = -k;
    RatFunc r1(a, b), r2((a * g).scaled(k), (b * g).scaled(k));
    require(r1 == r2 && r1.str() == r2.str(), "RatFunc canonical form");
  }
  ResolventTable t = res_exact(schur_two());
  HadamardTable plus = had_from_resolvent(t, KappaSign(3, 1), 3), minus = had_from_resolvent(t, KappaSign(3, -1), 3);
  for (const auto &[kj, e] : plus.entries) require(minus.entries.at(kj) == (kj.first % 2 ? -e : e), "kappa flip");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<void()>>> criteria{
      {"golden pipeline: operator, resolvent and Hadamard table of the cubic example", golden_pipeline},
      {"duality: adjoint operator and dual Hadamard table", duality},
      {"same point for N = 4, 5: two nonzero entries, cutoff 2", higher_order_same_point},
      {"cross-method Hadamard agreement for N = 2, 3", cross_method},
      {"second-order closed form vs contraction, k <= 5", second_order_closed_form},
      {"structural identities and operator identity", structural_identities},
      {"Gelfand-Dickey flows and Boussinesq form", gelfand_dickey},
      {"first integrals under the flows", conservation},
      {"Airy-type numerics and kernel PDE residuals", numerics},
      {"PDO, RatFunc and kappa-flip property suites", property_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string why;
    try {
      criteria[i].second();
    } catch (const Failure &f) {
      why = f.what;
    } catch (const std::exception &e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu %s  %s (%.1fs)%s%s\n", i + 1, why.empty() ? "PASS" : "FAIL", criteria[i].first, secs,
                why.empty() ? "" : ": ", why.c_str());
    if (!why.empty()) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
