#pragma once

// Finite sets of arbitrary-precision integers and their additive statistics.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sumprod/bigraph.hpp"
#include "sumprod/numeric.hpp"

namespace sumprod {

class IntSet {
 public:
  IntSet() = default;
  // Sorts and deduplicates.
  explicit IntSet(std::vector<Integer> elements);
  IntSet(std::initializer_list<long> elements);

  static IntSet range(long first, long last_exclusive);

  const std::vector<Integer>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const Integer& operator[](std::size_t i) const { return elems_[i]; }
  const Integer& min() const { return elems_.front(); }
  const Integer& max() const { return elems_.back(); }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  bool contains(const Integer& x) const;
  std::optional<std::size_t> index_of(const Integer& x) const;
  bool is_subset_of(const IntSet& other) const;
  // Every element fits a signed 64-bit word.
  bool fits_int64() const;

  bool operator==(const IntSet&) const = default;

 private:
  std::vector<Integer> elems_;
};

// One integer per line, any order; blank lines and lines starting with '#' are skipped.
IntSet parse_set_lines(std::string_view text);
// "0,1,2" or "0 1 2", optionally wrapped in brackets or braces.
IntSet parse_set_literal(std::string_view text);
// Sorted, one element per line, trailing newline.
std::string to_lines(const IntSet& s);
std::string to_literal(const IntSet& s);

IntSet sumset(const IntSet& a, const IntSet& b);
IntSet productset(const IntSet& a, const IntSet& b);
IntSet difference_set(const IntSet& a, const IntSet& b);
IntSet dilate(const IntSet& a, const Integer& c);
IntSet translate(const IntSet& a, const Integer& d);

enum class Sign { kPlus, kMinus };

struct RepOptions {
  // Dense counting array is used when the value range is at most this many
  // slots and no more than `dense_ratio` times the number of pairs.
  std::size_t dense_limit = std::size_t{1} << 24;
  std::size_t dense_ratio = 16;
  bool allow_dense = true;
  bool allow_int64 = true;
};

enum class RepPath { kDense, kSorted, kOrderedMap };

// x -> #{(a, b) : a ± b = x}, ascending in x, counts >= 1.
struct RepFunction {
  std::vector<std::pair<Integer, std::uint64_t>> support;
  RepPath path = RepPath::kOrderedMap;

  std::uint64_t at(const Integer& x) const;
  Integer total_mass() const;
  Integer sum_of_squares() const;
  IntSet support_set() const;
};

RepFunction rep_function(const IntSet& a, const IntSet& b, Sign sign, const RepOptions& opts = {});

enum class EnergyMethod { kConvolution, kQuadrupleOracle };
const char* to_string(EnergyMethod m);

struct EnergyCaps {
  std::uint64_t oracle_pairs = 1'000'000;  // |A||B| allowed for the enumeration oracle
  std::uint64_t k_tuples = 100'000'000;    // |A|^k allowed for energy_k
};

struct EnergyReport {
  Integer energy;
  EnergyMethod method = EnergyMethod::kConvolution;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
};

EnergyReport energy_plus(const IntSet& a, const IntSet& b, EnergyMethod method = EnergyMethod::kConvolution,
                         const EnergyCaps& caps = {}, const RepOptions& opts = {});
inline EnergyReport energy_plus(const IntSet& a, EnergyMethod method = EnergyMethod::kConvolution,
                                const EnergyCaps& caps = {}) {
  return energy_plus(a, a, method, caps);
}

// Number of 2k-tuples with a_1 + ... + a_k = a'_1 + ... + a'_k.
Integer energy_k(const IntSet& a, unsigned k, const EnergyCaps& caps = {});

// {a + b : (a, b) ∈ G}. Edge endpoints are matched by value against A and B.
IntSet restricted_sumset(const IntSet& a, const IntSet& b, const IntGraph& g);

struct DoublingStats {
  std::optional<Rational> k_mult;  // |AA|/|A|, present when A = B
  RootRatio k_plus;                // |A +_G B| / sqrt(|A||B|)
  std::size_t sumset_size = 0;
};

// G defaults to the complete graph.
DoublingStats doubling_stats(const IntSet& a, const IntSet& b, const std::optional<IntGraph>& g = std::nullopt);

}  // namespace sumprod
