#pragma once

// Exact sign decisions for sums of k-th roots of non-negative integers.

#include <span>
#include <utility>
#include <vector>

#include "sumprod/numeric.hpp"

namespace sumprod {

struct RootCompareOptions {
  unsigned long start_bits = 64;
  unsigned long max_bits = 1u << 16;
};

// Sign of x^(1/k) - q · Σ t_i^(1/k), for x, t_i >= 0, q >= 0, k >= 1.
// Outward-rounded interval arithmetic with doubling precision; ties are
// settled by comparing k-th-power-free canonical forms. Throws kUndecided
// if neither settles within max_bits.
int compare_root_sum(const Integer& x, const Rational& q, std::span<const Integer> terms, unsigned k,
                     const RootCompareOptions& opts = {});

// (q · Σ t_i^(1/k))^k, rounded to nearest at the given precision.
double root_sum_power(const Rational& q, std::span<const Integer> terms, unsigned k, unsigned long bits = 256);

// n = c^k · r with r k-th-power-free, when n factors by trial division below
// the default prime ceiling (or is 0 / 1). Returns {c, r}.
std::optional<std::pair<Integer, Integer>> kth_power_split(const Integer& n, unsigned k);

}  // namespace sumprod
