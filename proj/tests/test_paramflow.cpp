#include <gtest/gtest.h>

#include <cmath>

#include "sumprod/harness.hpp"
#include "sumprod/paramflow.hpp"

using namespace sumprod;

namespace {

constexpr double kE = 2.718281828459045;

// Closed forms evaluated directly in log space.
double freiman_log_phi(double lN, double ld, double lK, double C) { return C * (ld - lK) + lN; }
double freiman_log_psi(double lN, double ld, double lK, double C) { return std::min(std::exp(C * (lK - ld)), lN); }

double better_log_phi(double lN, double ld, double lK, double C) {
  const double ell = std::max(lK - ld, kE);
  return -C * std::log(ell) * (lK - ld) + lN;
}
double better_log_psi(double lN, double ld, double lK, double C, double g) {
  const double ell = std::max(lK - ld, kE);
  return std::pow(ell, C / g) + g * lN;
}

double strong_log_phi(double lN, double ld, double lK, const StrongPairConstants& k) {
  const double ll = std::log(lN);
  return -k.A1 * lK + k.A2 * ll * ld + k.A3 * ll * ll + (1 - k.tau) * lN;
}
double strong_log_psi(double lN, double ld, double lK, const StrongPairConstants& k) {
  const double ll = std::log(lN);
  return k.B1 * lK - k.B2 * ll * ld - k.B3 * ll * ll + k.gamma * lN;
}

PairEvaluator freiman_eval(double C = 1) {
  return [C](const LogTriple& t) { return freiman_pair(t, C); };
}

}  // namespace

TEST(Pairs, InputValidation) {
  EXPECT_THROW((ParamTriple{0.5, 1, 1}.validate()), Error);
  EXPECT_THROW((ParamTriple{10, 0, 1}.validate()), Error);
  EXPECT_THROW((ParamTriple{10, 1.5, 1}.validate()), Error);
  EXPECT_THROW((ParamTriple{10, 1, 0.5}.validate()), Error);
  EXPECT_NO_THROW((ParamTriple{10, 0.5, 3}.validate()));
}

TEST(Pairs, TrivialAndFreimanExamples) {
  const LogTriple t = LogTriple::from({1e6, 1, 2});
  const PairValue tr = trivial_pair(t);
  EXPECT_NEAR(tr.psi(), 1e6, 1e-6);
  const PairValue f = freiman_pair(t);
  EXPECT_NEAR(f.psi(), std::exp(2.0), 1e-12);
  EXPECT_NEAR(f.phi(), 5e5, 1e-6);
  // ψ saturates at N once (K/δ)^C exceeds log N.
  EXPECT_NEAR(freiman_pair(ParamTriple{1e6, 1, 100}).psi(), 1e6, 1e-3);
}

TEST(Pairs, ClosedFormsAgainstDirectEvaluation) {
  Rng rng(61);
  const StrongPairConstants k;
  for (int trial = 0; trial < 200; ++trial) {
    const double lN = 15 + 200 * rng.unit(), ld = -10 * rng.unit(), lK = 10 * rng.unit();
    const double C = 0.5 + 2 * rng.unit();
    const LogTriple t{lN, ld, lK};
    EXPECT_NEAR(freiman_pair(t, C).log_phi, freiman_log_phi(lN, ld, lK, C), 1e-9);
    EXPECT_NEAR(freiman_pair(t, C).log_psi, freiman_log_psi(lN, ld, lK, C), 1e-9 * lN);
    EXPECT_NEAR(better_pair(t, C).log_phi, better_log_phi(lN, ld, lK, C), 1e-9 * lN);
    const double bpsi = better_log_psi(lN, ld, lK, C, 0.25);
    EXPECT_NEAR(better_pair(t, C).log_psi, bpsi, 1e-9 * std::fabs(bpsi));
    EXPECT_NEAR(strong_formula(t, k).log_phi, strong_log_phi(lN, ld, lK, k), 1e-7);
    EXPECT_NEAR(strong_formula(t, k).log_psi, strong_log_psi(lN, ld, lK, k), 1e-7);
  }
}

TEST(Pairs, GuardModes) {
  const LogTriple small = LogTriple::from({1e6, 1, 2});
  try {
    better_pair(small, 1, 0.25, Guard::kStrict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomainGuard);
  }
  EXPECT_NO_THROW(better_pair(small, 1, 0.25, Guard::kClamp));
  EXPECT_THROW(strong_pair(LogTriple::from({10, 1, 2}), StrongPairConstants{}, Guard::kStrict), Error);
}

TEST(Pairs, StrongBootstrapsFromBetterBelowNbar) {
  const StrongPairConstants k;
  const LogTriple low = LogTriple::from({1e5, 0.5, 10});
  EXPECT_EQ(strong_pair(low, k).formula, PairFormula::kBetter);
  EXPECT_DOUBLE_EQ(strong_pair(low, k).log_phi, better_pair(low, k.better_C, k.gamma).log_phi);
  const LogTriple high = LogTriple::from({1e12, 1, 1e3});
  const PairValue s = strong_pair(high, k);
  EXPECT_EQ(s.formula, PairFormula::kStrong);
  EXPECT_NEAR(s.log_phi, strong_log_phi(high.log_N, high.log_delta, high.log_K, k), 1e-8);
  EXPECT_NEAR(s.log_phi, 11032.626104755545, 1e-6);
  EXPECT_NEAR(s.log_psi, -4395.781053704763, 1e-6);
}

TEST(Pairs, ConstantValidation) {
  StrongPairConstants k;
  k.tau = 0.6;
  EXPECT_THROW(k.validate(), Error);
  k = {};
  k.B3 = 10;
  EXPECT_THROW(k.validate(), Error);
  k = {};
  k.A2 = 0.5;
  EXPECT_THROW(k.validate(), Error);
}

TEST(Pairs, BetterMatchesFreimanBelowClampAndWinsAbove) {
  for (double K : {2.0, 5.0, 10.0, 15.0}) {
    const LogTriple t = LogTriple::from({1e9, 1, K});
    EXPECT_NEAR(better_pair(t).log_phi, freiman_pair(t).log_phi, 1e-12);
  }
  for (double K : {20.0, 1e3, 1e6}) {
    const LogTriple t = LogTriple::from({1e9, 1, K});
    EXPECT_LT(better_pair(t).log_phi, freiman_pair(t).log_phi);
  }
}

TEST(Pairs, Crossover) {
  const auto eq = better_freiman_crossover(1e9, 1, 1, 0.25);
  ASSERT_TRUE(eq);
  EXPECT_NEAR(*eq, std::exp(kE), 1e-6 * std::exp(kE));
  const auto wide = better_freiman_crossover(1e9, 2, 1, 0.25);
  ASSERT_TRUE(wide);
  EXPECT_NEAR(*wide, std::exp(kE * kE), 1e-6 * std::exp(kE * kE));
  EXPECT_NEAR(*wide, 1618.18, 0.01);
  EXPECT_FALSE(better_freiman_crossover(1e9, 5, 1, 0.25, 1e6));
}

TEST(Induction, SymmetricSplitAtUnitRatio) {
  const LogTriple root = LogTriple::from({1e12, 1, 1});
  const InductionConstants ic;
  const LogTriple half{root.log_N / 2, 0, 0};
  EXPECT_TRUE(children_satisfy_constraints(root, half, half, ic));
  const auto v = induction_log_psi_at(freiman_eval(), root, half, half, ic);
  ASSERT_TRUE(v);
  EXPECT_NEAR(*v, std::log(100.0) + 2.0, 1e-12);
  // N'N'' above N is infeasible.
  const LogTriple big{root.log_N * 0.6, 0, 0};
  EXPECT_FALSE(children_satisfy_constraints(root, big, big, ic));
  EXPECT_FALSE(induction_log_psi_at(freiman_eval(), root, big, big, ic));
}

TEST(Induction, GridOptimumIsConsistent) {
  const LogTriple root = LogTriple::from({1e12, 1, 1e3});
  const InductionConstants ic;
  const InductionResult r = induction_step(freiman_eval(), root, ic);
  EXPECT_TRUE(r.approximate);
  EXPECT_GT(r.feasible, 0u);
  const auto at = induction_log_psi_at(freiman_eval(), root, r.psi_first, r.psi_second, ic);
  ASSERT_TRUE(at);
  EXPECT_NEAR(*at, r.pair.log_psi, 1e-9);
  EXPECT_TRUE(children_satisfy_constraints(root, r.phi_first, r.phi_second, ic));
  EXPECT_NEAR(freiman_pair(r.phi_first).log_phi + freiman_pair(r.phi_second).log_phi, r.pair.log_phi, 1e-9);
  // Frozen regression values of the 33-point grid.
  EXPECT_NEAR(r.pair.log_psi, 32.23619130191664, 1e-9);
  EXPECT_NEAR(r.pair.log_phi, -47.78029211177134, 1e-9);
  EXPECT_EQ(r.feasible, 71874u);
}

TEST(Induction, MonotoneInK) {
  const InductionConstants ic;
  double prev = -1e300;
  for (double K : {1e2, 1e3, 1e4, 1e5}) {
    const InductionResult r = induction_step(freiman_eval(), LogTriple::from({1e12, 1, K}), ic);
    EXPECT_GE(r.pair.log_psi, prev - 1e-9);
    prev = r.pair.log_psi;
  }
}

TEST(Induction, RejectsBadGrid) {
  InductionConstants ic;
  ic.grid = 1;
  EXPECT_THROW(induction_step(freiman_eval(), LogTriple::from({1e12, 1, 10}), ic), Error);
}

TEST(Tree, DepthZeroIsTheRoot) {
  const ParamTriple t{1e20, 1, 1e4};
  const TreeResult r = tree_simulate(t, 0);
  ASSERT_EQ(r.nodes.size(), 1u);
  const LogTriple root = LogTriple::from(t);
  EXPECT_NEAR(r.leaf_log_phi, freiman_pair(root).log_phi, 1e-9);
  EXPECT_NEAR(r.leaf_log_psi, std::log(100.0) + freiman_pair(root).log_psi, 1e-9);
  EXPECT_NEAR(r.closed_form.log_phi, better_pair(root).log_phi, 1e-9);
  EXPECT_TRUE(r.bounds_ok());
}

TEST(Tree, ChildrenRespectConstraints) {
  for (SplitMode mode : {SplitMode::kConcentrated, SplitMode::kBalanced}) {
    TreeOptions o;
    o.mode = mode;
    for (std::size_t l = 1; l <= 4; ++l) {
      const TreeResult r = tree_simulate({1e20, 1, 1e4}, l, o);
      EXPECT_EQ(r.nodes.size(), (std::size_t{1} << (l + 1)) - 1);
      EXPECT_TRUE(r.bounds_ok()) << l;
      for (const TreeNode& n : r.nodes) {
        if (!n.child0) continue;
        EXPECT_TRUE(children_satisfy_constraints(n.data, r.nodes[*n.child0].data, r.nodes[*n.child1].data,
                                                 o.constants, 1e-6));
        EXPECT_EQ(r.nodes[*n.child0].index, n.index + "0");
        EXPECT_EQ(r.nodes[*n.child1].level, n.level + 1);
      }
    }
  }
  EXPECT_THROW(tree_simulate({1e20, 1, 1e4}, 21), Error);
}

TEST(Tree, StrictGuardRejectsSmallRatios) {
  TreeOptions o;
  o.guard = Guard::kStrict;
  EXPECT_THROW(tree_simulate({1e20, 1, 1}, 1, o), Error);
}

TEST(Monotonicity, FreimanAndBetterAreMonotone) {
  GridSpec g;
  g.points = 17;
  for (const PairEvaluator& e : {freiman_eval(), PairEvaluator([](const LogTriple& t) { return better_pair(t); })}) {
    const MonotonicityReport m = monotonicity_grid(e, g);
    EXPECT_GT(m.comparisons, 0u);
    EXPECT_TRUE(m.ratio_ok());
    EXPECT_TRUE(m.N_ok());
  }
}

TEST(Monotonicity, StrongIsMonotoneInRatioOnly) {
  GridSpec g;
  g.points = 17;
  const StrongPairConstants k;
  const MonotonicityReport m = monotonicity_grid([&](const LogTriple& t) { return strong_pair(t, k); }, g);
  EXPECT_TRUE(m.ratio_ok());
  // The -B3·loglog²N term makes ψ fall with N over this window.
  EXPECT_GT(m.psi_N_violations, 0u);
}

TEST(Strong, SublinearAtLargeN) {
  const StrongPairConstants k;
  double prev = 1e300;
  for (double lN = 1e6; lN <= 1e7; lN += 1e6) {
    const double excess = strong_formula({lN, -2, 3}, k).log_phi - lN;
    EXPECT_LT(excess, prev);
    prev = excess;
  }
}

TEST(Strong, ContractionHoldsOnDefaultGrid) {
  const ContractionReport r = strong_contraction_grid(StrongPairConstants{}, GridSpec{});
  EXPECT_GT(r.points, 0u);
  EXPECT_TRUE(r.pass());
  EXPECT_GT(r.worst_phi, 0);
  EXPECT_LT(r.worst_psi, 0);
}

TEST(Exponent, LambdaFormula) {
  Rng rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    StrongPairConstants k;
    k.A1 = 0.5 + 3 * rng.unit();
    k.B1 = 0.5 + 3 * rng.unit();
    k.A2 = k.A1 + 50;
    k.A3 = k.A1 + 500;
    k.B2 = k.B1 + 40;
    k.B3 = k.B1 + 400;
    k.tau = 0.01 + 0.4 * rng.unit();
    k.gamma = 0.01 + 0.4 * rng.unit();
    const ExponentReport r = theorem1_exponent(k, 100);
    EXPECT_DOUBLE_EQ(r.Lambda, 2 * k.B1 + 8 + 4 * k.A1);
    EXPECT_DOUBLE_EQ(r.energy_exponent, 2 + 8 * k.tau + k.gamma);
    EXPECT_NEAR(r.log_bound_factor, r.Lambda * std::log(100.0), 1e-12);
  }
  StrongPairConstants k;
  k.tau = k.gamma = 0.05;
  EXPECT_NEAR(theorem1_exponent(k, 2).energy_exponent, 2.45, 1e-12);
  EXPECT_DOUBLE_EQ(theorem1_exponent(StrongPairConstants{}, 2).Lambda, 14);
}

TEST(Exponent, BudgetSplit) {
  for (double g : {0.05, 0.1, 0.5, 0.9}) {
    const StrongPairConstants k = split_exponent_budget(g);
    EXPECT_NEAR(8 * k.tau + k.gamma, g, 1e-15);
    EXPECT_NEAR(theorem1_exponent(k, 2).energy_exponent, 2 + g, 1e-15);
  }
  EXPECT_THROW(split_exponent_budget(1.5), Error);
}

TEST(LogGrid, Endpoints) {
  const auto g = log_grid(1, 1e4, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_NEAR(g.front(), 1, 1e-12);
  EXPECT_NEAR(g[2], 100, 1e-9);
  EXPECT_NEAR(g.back(), 1e4, 1e-8);
}
