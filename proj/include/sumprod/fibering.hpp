#pragma once

// Uniform-fiber refinement of a graph between two lattice sets.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sumprod/bigraph.hpp"
#include "sumprod/lattice.hpp"
#include "sumprod/numeric.hpp"

namespace sumprod {

struct ConstantsConfig {
  Rational c_small{1};
  Rational C_big{10};
  // Swap sides when the right set has the larger maximal fiber.
  bool symmetrize = true;
  static constexpr unsigned approx_factor = 2;

  // c = 1/1000, C = 1000.
  static ConstantsConfig relaxed();
  void validate() const;
};

struct PigeonholeResult {
  long exponent = 0;                 // chosen bucket [2^k, 2^(k+1))
  std::vector<std::size_t> members;  // indices into the input, ascending
  Integer mass;
  Integer total;
  std::size_t buckets = 0;  // floor(log2 max) - floor(log2 min) + 1
};

// Buckets positive weights dyadically and returns the bucket of largest mass,
// ties toward the larger exponent. Asserts mass · buckets >= total.
PigeonholeResult dyadic_pigeonhole(std::span<const Integer> weights);

// Same, but bucketing by `keys` (positive rationals) while scoring by `masses`.
PigeonholeResult dyadic_pigeonhole(std::span<const Rational> keys, std::span<const Integer> masses);

struct SplitChoice {
  std::size_t t = 0;
  bool degenerate = false;    // no prefix reached below N^(1/4)
  std::vector<Integer> f;     // f(0), ..., f(n)
  Integer n_product;          // N = |A1||A2|
};

// Largest prefix length t with f(t) >= N^(1/4), where
// f(t) = max_x |A1(x)| + max_y |A2(y)| over the split I = {0, ..., t-1}.
SplitChoice choose_split(std::span<const LatticePoint> a1, std::span<const LatticePoint> a2);

struct FiberingDecomposition {
  std::vector<LatticePoint> refined_left;
  std::vector<LatticePoint> refined_right;
  LatticeGraph graph;  // G' over refined_left × refined_right
  CoordSplit split;
  std::size_t M1 = 0, M2 = 0;
  Integer m1, m2;
  Rational delta1, delta2;
  RootRatio K1, K2;
};

struct QuantCheck {
  std::string label;
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
  double slack() const;  // lhs / rhs for lower bounds, rhs / lhs for upper bounds
  bool upper = false;
};

struct ConclusionTable {
  bool fiber_sizes = false;       // (1)
  bool graph_fibering = false;    // (2)
  bool bounded_doubling = false;  // (3)
  std::vector<std::string> failures;
  bool all() const { return fiber_sizes && graph_fibering && bounded_doubling; }
};

// Recomputes every structural conclusion from the decomposition itself.
ConclusionTable verify(const FiberingDecomposition& d);

struct StepRecord {
  std::string name;
  std::size_t left = 0;   // surviving left points
  std::size_t right = 0;  // surviving right points
  std::size_t edges = 0;
  std::optional<long> bucket;
  Integer mass;
  Integer total;
};

struct FiberingTrace {
  ConstantsConfig config;
  std::size_t N1 = 0, N2 = 0, edges = 0;
  Rational delta;
  RootRatio K;
  double log_term = 0;  // log(max(K/δ, 2))
  bool swapped = false;
  bool degenerate_split = false;
  std::size_t n1 = 0;
  std::size_t h_size = 0;
  bool step1_mass_ok = false;  // |A1 × Ā'2 ∩ G| >= c·(δ/10)·N1·|Ā'2|
  std::vector<StepRecord> steps;
  ConclusionTable conclusions;
  std::vector<QuantCheck> checks;
};

struct FiberingResult {
  FiberingDecomposition decomposition;
  FiberingTrace trace;
};

// Steps 0-4. Throws kEmptyGraph on an edgeless input and kEmptySurvivor when a
// step leaves a side empty. A returned decomposition always passes verify().
FiberingResult fibering_lemma(const LatticeGraph& g, const CoordSplit& split, const ConstantsConfig& cfg = {});

}  // namespace sumprod
