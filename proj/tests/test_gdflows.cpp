#include <gtest/gtest.h>

#include "hk/gdflows.hpp"

using namespace hk;

namespace {

const DiffPoly u0 = DiffPoly::gen(0);
const DiffPoly u1 = DiffPoly::gen(1);

// Oracle: a differential operator acting on a test function f (family 9).
constexpr int kF = 9;

DiffPoly act(const std::map<int, DiffPoly> &op, const DiffPoly &f) {
  DiffPoly r;
  for (const auto &[i, a] : op) r += a * f.derivative(i);
  return r;
}

// Coefficients of [A, B] read off from A(Bf) - B(Af).
std::map<int, DiffPoly> brute_commutator(const std::map<int, DiffPoly> &a, const std::map<int, DiffPoly> &b) {
  const DiffPoly f = DiffPoly::gen(kF);
  DiffPoly g = act(a, act(b, f)) - act(b, act(a, f));
  std::map<int, DiffPoly> out;
  for (const Generator &gen : g.generators())
    if (gen.family == kF) out[gen.order] = g.partial(gen);
  return out;
}

Pdo<RatFunc> schur_two_operator() {
  WaveData w = baker_from_tau(parse_mpoly("s1^2/2 + s2"), symbolic_times());
  return krichever_op(w, monomial_symbol(3), -1).diff;
}

}  // namespace

TEST(GdRhs, TranslationAndTrivialFlows) {
  for (int N = 2; N <= 5; ++N) {
    FlowReport t = gd_rhs(generic_operator(N), 1);
    for (int j = 0; j <= N - 2; ++j) EXPECT_EQ(t.rhs.at(j), DiffPoly::gen(j).derivative());
    EXPECT_TRUE(gd_rhs(generic_operator(N), N).is_trivial());
    EXPECT_TRUE(gd_rhs(generic_operator(N), 2 * N).is_trivial());
    EXPECT_FALSE(gd_rhs(generic_operator(N), N + 1).is_trivial());
  }
  EXPECT_THROW(gd_rhs(generic_operator(2), 0), std::invalid_argument);
  EXPECT_THROW(gd_rhs(Pdo<DiffPoly>::D(3) + Pdo<DiffPoly>::term(2, u0), 1), std::domain_error);
}

TEST(GdRhs, KdvAgainstBruteForceCommutator) {
  FlowReport r = gd_rhs(generic_operator(2), 3);
  const DiffPoly kdv = u0.derivative(3).scaled(Rat(1, 4)) + (u0 * u0.derivative()).scaled(Rat(3, 2));
  EXPECT_EQ(r.rhs.at(0), kdv);

  std::map<int, DiffPoly> p{{3, DiffPoly(1)}, {1, u0.scaled(Rat(3, 2))}, {0, u0.derivative().scaled(Rat(3, 4))}};
  std::map<int, DiffPoly> l{{2, DiffPoly(1)}, {0, u0}};
  auto c = brute_commutator(p, l);
  EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(c.at(0), kdv);
}

TEST(GdRhs, BoussinesqSecondFlowAgainstBruteForce) {
  // (L^{2/3})_+ = D^2 + (2/3) u1
  std::map<int, DiffPoly> p{{2, DiffPoly(1)}, {0, u1.scaled(Rat(2, 3))}};
  std::map<int, DiffPoly> l{{3, DiffPoly(1)}, {1, u1}, {0, u0}};
  auto c = brute_commutator(p, l);
  FlowReport r = gd_rhs(generic_operator(3), 2);
  EXPECT_EQ(r.rhs.at(1), c.at(1));
  EXPECT_EQ(r.rhs.at(0), c.at(0));
  EXPECT_EQ(r.rhs.at(1), (u0 - u1.derivative().scaled(Rat(1, 2))).derivative().scaled(Rat(2)));
}

TEST(Boussinesq, HadamardFormLowOrder) {
  const Pdo<DiffPoly> l = generic_operator(3);
  for (int k = 1; k <= 3; ++k) EXPECT_TRUE(gd_boussinesq_check(l, k)) << k;
  EXPECT_THROW(gd_boussinesq_check(generic_operator(2), 1), std::invalid_argument);
}

// The diagonal x-derivative of H_k^0 equals that of omega_{3k} up to (2/3)_k.
TEST(Boussinesq, DiagonalDerivativeScaling) {
  const Pdo<DiffPoly> l = generic_operator(3);
  HadamardTable J = had_jet_recursion(KappaSign(3, 1), 2, 2);
  auto w = res_diag_jets(l, 6, 1);
  for (int k = 1; k <= 2; ++k) {
    // d_x at the diagonal = D(value) - d_y at the diagonal
    DiffPoly dx = w.at({3 * k, 0}).derivative() - w.at({3 * k, 1});
    EXPECT_EQ(dx, diag_x_derivative(J.jets.at({k, 0}), 1).scaled(pochhammer(Rat(2, 3), k)));
  }
}

TEST(EulerTest, Basics) {
  EXPECT_TRUE(gd_euler_test(u0 * u0.derivative()));
  EXPECT_FALSE(gd_euler_test(u0 * u0));
  EXPECT_TRUE(gd_euler_test(DiffPoly()));
  EXPECT_FALSE(gd_euler_test(DiffPoly(1)));
  EXPECT_TRUE(gd_euler_test((u0 * u1.derivative(2) + u1.pow(3)).derivative()));
  EXPECT_FALSE(gd_euler_test(u0 * u1.derivative()));
}

TEST(FirstIntegrals, IntegrandsMatchDiagonalValues) {
  EXPECT_EQ(gd_first_integral_integrand(generic_operator(2), KappaSign(2, 1), 1, 0), u0);
  EXPECT_EQ(gd_first_integral_integrand(generic_operator(3), KappaSign(3, 1), 1, 0),
            u0 - u1.derivative().scaled(Rat(1, 2)));
  EXPECT_EQ(gd_first_integral_integrand(generic_operator(3), KappaSign(3, 1), 1, 1), u1);
}

// First integrals: every flow changes H_k^j(x,x) and res L^{k/N} by a total derivative.
TEST(FirstIntegrals, ConservedUnderFlows) {
  for (int N = 2; N <= 3; ++N) {
    const Pdo<DiffPoly> l = generic_operator(N);
    const KappaSign ks = KappaSign::standard(N);
    for (int m = 1; m <= 3; ++m) {
      FlowReport f = gd_rhs(l, m);
      for (int k = 1; k <= 4; ++k) {
        for (int j = 0; j <= N - 2; ++j) {
          DiffPoly h = gd_first_integral_integrand(l, ks, k, j);
          EXPECT_TRUE(gd_euler_test(flow_derivative(h, f))) << "N=" << N << " m=" << m << " k=" << k << " j=" << j;
        }
        DiffPoly r = residue(fractional_power(l, k, N, -1));
        EXPECT_TRUE(gd_euler_test(flow_derivative(r, f)));
      }
    }
  }
  // a density that is not conserved
  EXPECT_FALSE(gd_euler_test(flow_derivative(u0 * u0.derivative(2) * u0, gd_rhs(generic_operator(2), 3))));
}

TEST(FlowsCommute, OnResidues) {
  for (int N = 2; N <= 3; ++N) {
    const Pdo<DiffPoly> l = generic_operator(N);
    for (int a = 1; a <= 3; ++a)
      for (int b = a + 1; b <= 4; ++b) {
        FlowReport fa = gd_rhs(l, a), fb = gd_rhs(l, b);
        for (int k = 1; k <= 3; ++k) {
          DiffPoly r = residue(fractional_power(l, k, N, -1));
          EXPECT_EQ(flow_derivative(flow_derivative(r, fb), fa), flow_derivative(flow_derivative(r, fa), fb))
              << N << " " << a << " " << b << " " << k;
        }
      }
  }
}

// The parameters of the two-dimensional Schur family act as the first two flows.
TEST(ParameterFlows, SchurTwoFamily) {
  Pdo<RatFunc> l = schur_two_operator();
  EXPECT_EQ(gd_parameter_sign(l, Var::S1, 1), 1);
  EXPECT_EQ(gd_parameter_sign(l, Var::S2, 2), 1);
  EXPECT_EQ(gd_parameter_sign(l, Var::S2, 1), std::nullopt);
}
