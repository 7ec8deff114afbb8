#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sumprod/harness.hpp"
#include "sumprod/intset.hpp"

using namespace sumprod;

namespace {

oracle::Vec to_vec(const IntSet& s) {
  oracle::Vec v;
  for (const Integer& x : s) v.push_back(x.get_si());
  return v;
}

IntSet random_set(Rng& rng, std::size_t max_size, long lo, long hi) {
  const std::size_t n = 1 + rng.below(max_size);
  std::vector<Integer> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(Integer(static_cast<long>(rng.uniform(lo, hi))));
  return IntSet(std::move(v));
}

}  // namespace

TEST(IntSet, SortsAndDeduplicates) {
  const IntSet s{5, 1, 3, 1, 5};
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(to_literal(s), "1,3,5");
  EXPECT_TRUE(s.contains(3));
  EXPECT_FALSE(s.contains(2));
  EXPECT_EQ(*s.index_of(5), 2u);
  EXPECT_TRUE(IntSet({1, 3}).is_subset_of(s));
  EXPECT_FALSE(IntSet({1, 2}).is_subset_of(s));
}

TEST(IntSet, ParsesLinesAndLiterals) {
  EXPECT_EQ(parse_set_lines("3\n# comment\n\n1\n2\n"), IntSet({1, 2, 3}));
  EXPECT_EQ(parse_set_literal("[0, 1, 2]"), IntSet({0, 1, 2}));
  EXPECT_EQ(parse_set_literal("{-4 7}"), IntSet({-4, 7}));
  EXPECT_EQ(to_lines(IntSet{2, -1}), "-1\n2\n");
  EXPECT_THROW(parse_set_literal("1,x"), Error);
  const IntSet big = parse_set_literal("340282366920938463463374607431768211457");
  EXPECT_FALSE(big.fits_int64());
}

TEST(IntSet, SetOperationsMatchBruteForce) {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const IntSet a = random_set(rng, 15, -50, 50), b = random_set(rng, 15, -50, 50);
    EXPECT_EQ(to_vec(sumset(a, b)), oracle::sumset(to_vec(a), to_vec(b)));
    EXPECT_EQ(to_vec(productset(a, b)), oracle::productset(to_vec(a), to_vec(b)));
    EXPECT_EQ(to_vec(difference_set(a, b)), oracle::difference_set(to_vec(a), to_vec(b)));
  }
}

TEST(IntSet, EmptyOperandsAreRejected) {
  const IntSet e, a{1};
  try {
    sumset(e, a);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kEmptyOperand);
  }
  EXPECT_THROW(productset(a, e), Error);
  EXPECT_THROW(energy_plus(e), Error);
}

TEST(IntSet, DilateAndTranslate) {
  EXPECT_EQ(dilate(IntSet{1, 2}, Integer(3)), IntSet({3, 6}));
  EXPECT_EQ(translate(IntSet{1, 2}, Integer(-1)), IntSet({0, 1}));
}

TEST(Energy, SmallExamples) {
  EXPECT_EQ(energy_plus(IntSet{0, 1, 2}).energy, 19);
  EXPECT_EQ(energy_plus(IntSet{5}).energy, 1);
  // A Sidon set reaches the minimum 2|A|^2 - |A|.
  EXPECT_EQ(energy_plus(IntSet{1, 2, 4, 8, 13}).energy, 2 * 25 - 5);
}

TEST(Energy, ArithmeticProgressionClosedFormAgainstOracle) {
  // The closed form is checked against brute force first, then used alone.
  for (long n = 1; n <= 10; ++n) {
    const IntSet a = IntSet::range(0, n);
    EXPECT_EQ(Integer(static_cast<long>(oracle::energy4(to_vec(a), to_vec(a)))), oracle::ap_energy(n));
  }
  for (long n = 1; n <= 50; ++n) EXPECT_EQ(energy_plus(IntSet::range(0, n)).energy, oracle::ap_energy(n)) << n;
}

TEST(Energy, MethodsAndPathsAgree) {
  Rng rng(11);
  RepOptions sorted;
  sorted.allow_dense = false;
  RepOptions mapped;
  mapped.allow_dense = false;
  mapped.allow_int64 = false;
  for (int trial = 0; trial < 60; ++trial) {
    const IntSet a = random_set(rng, 20, -300, 300), b = random_set(rng, 20, -300, 300);
    const Integer expected(static_cast<long>(oracle::energy4(to_vec(a), to_vec(b))));
    EXPECT_EQ(energy_plus(a, b, EnergyMethod::kConvolution).energy, expected);
    EXPECT_EQ(energy_plus(a, b, EnergyMethod::kQuadrupleOracle).energy, expected);
    EXPECT_EQ(energy_plus(a, b, EnergyMethod::kConvolution, {}, sorted).energy, expected);
    EXPECT_EQ(energy_plus(a, b, EnergyMethod::kConvolution, {}, mapped).energy, expected);
  }
}

TEST(Energy, RepresentationPathSelection) {
  const IntSet a{0, 1, 2};
  EXPECT_EQ(rep_function(a, a, Sign::kPlus).path, RepPath::kDense);
  RepOptions o;
  o.allow_dense = false;
  EXPECT_EQ(rep_function(a, a, Sign::kPlus, o).path, RepPath::kSorted);
  const IntSet huge = parse_set_literal("0, 100000000000000000000000");
  EXPECT_EQ(rep_function(huge, huge, Sign::kPlus).path, RepPath::kOrderedMap);
}

TEST(Energy, RepresentationFunctionInvariants) {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const IntSet a = random_set(rng, 25, -100, 100), b = random_set(rng, 25, -100, 100);
    const RepFunction r = rep_function(a, b, Sign::kPlus);
    EXPECT_EQ(r.total_mass(), Integer(static_cast<unsigned long>(a.size() * b.size())));
    EXPECT_EQ(r.support_set(), sumset(a, b));
    const RepFunction d = rep_function(a, b, Sign::kMinus);
    EXPECT_EQ(d.support_set(), difference_set(a, b));
    EXPECT_EQ(r.sum_of_squares(), energy_plus(a, b).energy);
  }
}

TEST(Energy, PropertyBounds) {
  Rng rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const IntSet a = random_set(rng, 30, -1000, 1000);
    const Integer n(static_cast<unsigned long>(a.size()));
    const Integer e = energy_plus(a).energy;
    EXPECT_GE(e, 2 * n * n - n);
    EXPECT_LE(e, (2 * n * n * n + n) / 3);
    EXPECT_EQ(energy_plus(translate(a, Integer(17))).energy, e);
    EXPECT_EQ(energy_plus(dilate(a, Integer(-3))).energy, e);
    const IntSet b = random_set(rng, 30, -1000, 1000);
    const Integer eab = energy_plus(a, b).energy;
    EXPECT_LE(eab * eab, e * energy_plus(b).energy);  // Cauchy-Schwarz
  }
}

TEST(Energy, OracleCapIsEnforced) {
  EnergyCaps caps;
  caps.oracle_pairs = 10;
  try {
    energy_plus(IntSet::range(0, 4), IntSet::range(0, 4), EnergyMethod::kQuadrupleOracle, caps);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapExceeded);
  }
}

TEST(Energy, HigherEnergyMatchesEnumeration) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const IntSet a = random_set(rng, 8, -20, 20);
    for (unsigned k = 2; k <= 4; ++k) {
      EXPECT_EQ(energy_k(a, k), Integer(static_cast<long>(oracle::energy_k(to_vec(a), k))));
    }
  }
  EXPECT_EQ(energy_k(IntSet{0, 1, 2}, 2), 19);
  EXPECT_THROW(energy_k(IntSet{1}, 1), Error);
  EnergyCaps caps;
  caps.k_tuples = 100;
  EXPECT_THROW(energy_k(IntSet::range(0, 10), 3, caps), Error);
}

TEST(Energy, ArbitraryPrecisionElements) {
  const IntSet a = parse_set_literal("100000000000000000000000000000, 200000000000000000000000000000, "
                                     "300000000000000000000000000000");
  EXPECT_EQ(energy_plus(a).energy, 19);
  EXPECT_EQ(energy_plus(a, a, EnergyMethod::kQuadrupleOracle).energy, 19);
}

TEST(RestrictedSumset, FollowsEdges) {
  const IntSet a{0, 1}, b{10, 20};
  const IntGraph g = IntGraph::from_pairs({0, 1}, {10, 20}, {{Integer(0), Integer(10)}, {Integer(1), Integer(20)}});
  EXPECT_EQ(restricted_sumset(a, b, g), IntSet({10, 21}));
  const IntGraph stray = IntGraph::from_pairs({5}, {10}, {{Integer(5), Integer(10)}});
  EXPECT_THROW(restricted_sumset(a, b, stray), Error);
}

TEST(Doubling, Statistics) {
  const IntSet a{1, 2, 4, 8};
  const DoublingStats s = doubling_stats(a, a);
  ASSERT_TRUE(s.k_mult);
  EXPECT_EQ(*s.k_mult, Rational(7, 4));
  EXPECT_EQ(s.sumset_size, sumset(a, a).size());
  EXPECT_EQ(s.k_plus, RootRatio(Integer(static_cast<unsigned long>(s.sumset_size)), Integer(16)));
  EXPECT_FALSE(doubling_stats(a, IntSet{1, 2}).k_mult);
}
