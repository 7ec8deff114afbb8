#pragma once

// The prime-valuation map, multiplicative dimension and Freiman's lemma.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sumprod/intset.hpp"
#include "sumprod/lattice.hpp"
#include "sumprod/numeric.hpp"

namespace sumprod {

// Miller-Rabin with the first thirteen prime bases, deterministic below 3.3e24;
// larger inputs fall back to GMP's BPSW test.
bool is_prime(const Integer& n);

class PrimeIndex {
 public:
  PrimeIndex() = default;
  // Sorted and checked; a composite or repeated entry throws kInvalidArgument.
  explicit PrimeIndex(std::vector<Integer> primes);

  const std::vector<Integer>& primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  bool empty() const { return primes_.empty(); }
  std::optional<std::size_t> position(const Integer& p) const;

  bool operator==(const PrimeIndex&) const = default;

 private:
  std::vector<Integer> primes_;
};

struct FactorOptions {
  unsigned long prime_ceiling = 1'000'000;
};

// n = ∏ p^e with p ascending. n must be positive. A leftover cofactor above
// the ceiling is accepted only when it is itself prime; otherwise
// kFactorization is thrown.
std::vector<std::pair<Integer, unsigned long>> factorize(const Integer& n, const FactorOptions& opts = {});

// vectors[i] is the exponent profile of source[i] over index.
struct LatticeSet {
  PrimeIndex index;
  std::vector<LatticePoint> vectors;
  IntSet source;

  std::size_t dim() const { return index.size(); }
  Integer reconstruct(std::size_t i) const;
};

LatticeSet valuate(const IntSet& a, const FactorOptions& opts = {});
// Over a prescribed index. A prime factor outside it throws kFactorization.
LatticeSet valuate(const IntSet& a, const PrimeIndex& index, const FactorOptions& opts = {});

// Sorted union of the primes dividing elements of either set.
PrimeIndex joint_index(const IntSet& a, const IntSet& b, const FactorOptions& opts = {});

struct RankReport {
  std::size_t affine_rank = 0;
  std::vector<std::size_t> witness;  // indices of affinely independent points, size rank + 1
};

// Exact over Q. Empty input throws kEmptyOperand.
RankReport affine_rank(std::span<const LatticePoint> points);
std::size_t linear_rank(std::span<const LatticePoint> rows);

RankReport mult_dimension(const IntSet& a, const FactorOptions& opts = {});

struct FreimanReport {
  std::size_t rank = 0;
  std::size_t sumset_size = 0;  // |AA|, counted as |𝒫(A) + 𝒫(A)|
  Integer lower_bound;          // (m+1)|A| - m(m+1)/2
  bool tight() const { return lower_bound == static_cast<unsigned long>(sumset_size); }
};

FreimanReport freiman_check(const IntSet& a, const FactorOptions& opts = {});

struct Projection {
  PrimeIndex primes;                    // the selected sub-index I
  std::vector<std::size_t> coordinates; // positions of I inside the full index
  std::vector<LatticePoint> projected;  // aligned with the source set
};

// Greedy column selection, lowest prime first, keeping a column when it raises
// the rank of the difference matrix. The result is certified injective.
Projection injective_projection(const IntSet& a, const FactorOptions& opts = {});

// Restricts every vector to the given coordinates.
std::vector<LatticePoint> restrict_coordinates(std::span<const LatticePoint> points,
                                               std::span<const std::size_t> coords);

}  // namespace sumprod
