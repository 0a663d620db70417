#include <gtest/gtest.h>

#include <random>

#include "hk/resolvent.hpp"

using namespace hk;

namespace {

RatFunc rf(const char *s) { return parse_ratfunc(s); }

const DiffPoly u0 = DiffPoly::gen(0);

WaveData example_wave() { return baker_from_tau(parse_mpoly("s1^2/2 + s2"), symbolic_times()); }

Pdo<RatFunc> example_operator(const WaveData &w) { return krichever_op(w, monomial_symbol(3), -4).diff; }

// Random one-point condition sets together with the N values they are invariant under.
std::vector<std::pair<GrPoint, int>> random_points(unsigned seed, int count) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> d(-3, 3);
  std::vector<std::pair<GrPoint, int>> out;
  while (static_cast<int>(out.size()) < count) {
    GrPoint p;
    p.mode = GrPoint::Mode::Conditions;
    const int n = 1 + static_cast<int>(out.size()) % 2;
    const int width = 2 + static_cast<int>(out.size()) % 3;
    for (int i = 0; i < n; ++i) {
      std::vector<Rat> c(static_cast<std::size_t>(width));
      for (auto &a : c) a = Rat(d(rng));
      p.conditions.push_back(c);
    }
    try {
      baker_from_conditions(p.conditions);
    } catch (const std::exception &) {
      continue;
    }
    int N = 2;
    while (!check_invariance(p, N)) ++N;
    out.emplace_back(p, N);
  }
  return out;
}

}  // namespace

TEST(ResolventExact, TrivialWave) {
  ResolventTable t = res_exact(baker_from_tau(MPoly(1)));
  ASSERT_EQ(t.exact.size(), 1u);
  EXPECT_EQ(t.exact[0], RatFunc(1));
  EXPECT_EQ(t.vanishing_index, 1);
  EXPECT_TRUE(t.omega(5).is_zero());
  EXPECT_EQ(t.str(), "omega[0] = (1)/(1)\n");
}

TEST(ResolventExact, SchurTwoTable) {
  ResolventTable t = res_exact(example_wave());
  const RatFunc tt = rf("((x + s1)^2/2 + s2) * ((y + s1)^2/2 + s2)");
  ASSERT_EQ(t.exact.size(), 4u);
  EXPECT_EQ(t.vanishing_index, 4);
  EXPECT_EQ(t.omega(0), RatFunc(1));
  EXPECT_EQ(t.omega(1), rf("(x - y)*(x*y + s1*(x + y) + s1^2 - 2*s2)/2") / tt);
  EXPECT_EQ(t.omega(2), rf("(x^2 - 2*x*y - 2*s1*y - s1^2 + 2*s2)/2") / tt);
  EXPECT_EQ(t.omega(3), -rf("x + s1") / tt);
  for (int n = 4; n < 8; ++n) EXPECT_TRUE(t.omega(n).is_zero());
}

TEST(ResolventExact, DualOfSchurTwo) {
  WaveData w = example_wave();
  WaveData d = dual_wave(w);
  // the dual wave dresses (-1)^3 L*
  Pdo<RatFunc> L = example_operator(w);
  KricheverResult kd = krichever_op(d, monomial_symbol(3), -4);
  ASSERT_TRUE(kd.is_differential());
  EXPECT_EQ(kd.diff, -adjoint(L));
  EXPECT_EQ(-kd.diff.coeff(0), rf("-3*(x + s1)*((s1 + x)^2 - 2*s2)/2") / rf("((x + s1)^2/2 + s2)^3"));

  ResolventTable a = res_exact(w), b = res_exact(d);
  EXPECT_TRUE(res_check_duality(a, b));
  EXPECT_TRUE(res_check_duality(b, a));
  ResolventTable bad = b;
  bad.exact[2] = bad.exact[2] + rf("1/(x^2+1)");
  EXPECT_FALSE(res_check_duality(a, bad));
  bad = b;
  bad.exact[1] = -bad.exact[1];
  EXPECT_FALSE(res_check_duality(a, bad));
  bad.exact.pop_back();
  EXPECT_THROW(res_check_duality(a, bad), std::invalid_argument);

  ResolventTable trivial = res_exact(WaveData{});
  EXPECT_TRUE(res_check_duality(trivial, res_exact(dual_wave(WaveData{}))));
}

TEST(ResolventJets, SchrodingerSecondCoefficient) {
  EXPECT_EQ(res_diag_jet(generic_operator(2), 2, 0), u0.scaled(Rat(1, 2)));
  EXPECT_EQ(res_diag_jet(generic_operator(2), 1, 0), DiffPoly(0));
  EXPECT_EQ(res_diag_jet(generic_operator(2), 0, 0), DiffPoly(1));
}

TEST(ResolventJets, RejectsNonNormalForm) {
  Pdo<DiffPoly> bad = generic_operator(3) + Pdo<DiffPoly>::term(2, u0);
  EXPECT_THROW(res_diag_jet(bad, 1, 0), std::domain_error);
  EXPECT_THROW(res_diag_jet(Pdo<DiffPoly>::D(-1), 1, 0), std::domain_error);
}

TEST(ResolventJets, DiagonalVanishesWhenNIsOneModN) {
  for (int N = 2; N <= 4; ++N) {
    auto jets = res_diag_jets(generic_operator(N), 3 * N + 1, 0);
    for (int n = 1; n <= 3 * N + 1; n += N) EXPECT_TRUE(jets.at({n, 0}).is_zero()) << "N=" << N << " n=" << n;
    EXPECT_FALSE(jets.at({2, 0}).is_zero());
  }
}

TEST(ResolventJets, MatchExactSchurTwoTable) {
  WaveData w = example_wave();
  ResolventTable exact = res_exact(w);
  ResolventTable sym = res_jets(3, 6, 2);
  auto b = coefficient_bindings(example_operator(w));
  for (int n = 0; n <= 6; ++n)
    for (int m = 0; m <= 2; ++m)
      EXPECT_EQ(substitute(sym.jets.at({n, m}), b), diagonal_derivative(exact.omega(n), m)) << n << "," << m;
}

// Exact and jet resolvents agree on random Gr0 points, and the exact table vanishes
// on the diagonal for n = 1 mod N.
TEST(ResolventProperty, ExactMatchesJetsOnRandomPoints) {
  int cases = 0;
  for (const auto &[p, N] : random_points(99, 24)) {
    WaveData w = baker_from_conditions(p.conditions);
    ResolventTable t = res_exact(w);
    Pdo<RatFunc> L = krichever_op(w, monomial_symbol(N), -1).diff;
    const int n_max = t.exact.size() + 1;
    auto jets = res_diag_jets(L, n_max, 2);
    for (int n = 0; n <= n_max; ++n)
      for (int m = 0; m <= 2; ++m) EXPECT_EQ(jets.at({n, m}), diagonal_derivative(t.omega(n), m));
    for (int n = 1; n <= n_max; n += N) EXPECT_TRUE(diagonal_derivative(t.omega(n), 0).is_zero());
    EXPECT_TRUE(res_check_duality(t, res_exact(dual_wave(w))));
    ++cases;
  }
  EXPECT_EQ(cases, 24);
}

// L = D^2 + u0 is formally self-adjoint, so omega_n(x,y) = (-1)^n omega_n(y,x).
// On jets J_m = d_y^m omega_n|_{y=x} this reads
// J_m = (-1)^n sum_p binom(m,p) (-1)^p D^{m-p} J_p.
TEST(ResolventProperty, SelfAdjointSymmetryOnJets) {
  const int n_max = 7, m_max = 4;
  auto jets = res_diag_jets(generic_operator(2), n_max, m_max);
  for (int n = 0; n <= n_max; ++n)
    for (int m = 0; m <= m_max; ++m) {
      DiffPoly rhs;
      for (int p = 0; p <= m; ++p) {
        DiffPoly t = jets.at({n, p}).derivative(m - p).scaled(binom(m, p));
        rhs = p % 2 ? rhs - t : rhs + t;
      }
      if (n % 2) rhs = -rhs;
      EXPECT_EQ(jets.at({n, m}), rhs) << n << "," << m;
    }
}
