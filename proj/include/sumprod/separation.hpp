#pragma once

// Separating constants: theoretical bounds, measured ratios, energy covers.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "sumprod/intset.hpp"
#include "sumprod/numeric.hpp"
#include "sumprod/valuation.hpp"

namespace sumprod {

// Coefficients a with slices X_a; gcd(a, x) = 1 for every coefficient and
// every element of every slice.
struct SlicedFamily {
  IntSet coefficients;
  std::map<Integer, IntSet> slices;

  // Throws kEmptySlice, kCoprimalityViolation, or kInvalidArgument when the
  // slice keys differ from the coefficients.
  void validate() const;
  // Y = ∪ a·X_a.
  IntSet union_set() const;
};

enum class Provenance { kTrivial, kOnePrime, kChang, kComposed, kEmpirical };
const char* to_string(Provenance p);

struct SeparationBound {
  Rational value;
  Provenance provenance = Provenance::kTrivial;
};

struct EmpiricalRatio {
  IntSet union_set;
  Integer union_energy;                // E(Y)
  std::vector<Integer> slice_energies; // E(X_a), coefficient order
  double lhs = 0;                      // sqrt E(Y)
  double rhs = 0;                      // Σ sqrt E(X_a)
  double ratio = 0;

  // Exact sign of ratio - psi.
  int compare(const Rational& psi) const;
  bool within(const Rational& psi) const { return compare(psi) <= 0; }
};

EmpiricalRatio empirical_ratio(const SlicedFamily& fam);

SeparationBound trivial_bound(const IntSet& a);

// Every element must be a power of p (p^0 = 1 included); otherwise kStructureViolation.
SeparationBound one_prime_bound(const IntSet& a, const Integer& p);

struct ChangReport {
  SeparationBound bound;  // the rank version, 6^m
  Rational K;             // |AA| / |A|
  Integer by_doubling;    // 6^ceil(K)
  Integer by_rank;        // 6^m, m = multiplicative dimension
  std::size_t rank = 0;
  Projection witness;
};

ChangReport chang_bound(const IntSet& a, const FactorOptions& opts = {});

// A = ∪ b_i·C_i with gcd(b_i, c) = 1 across all parts.
struct ProductDecomposition {
  IntSet b;
  std::vector<IntSet> c;  // c[i] pairs with b[i]
  IntSet assemble() const;
};

SeparationBound compose_bounds(const SeparationBound& psi1, const SeparationBound& psi2);
// Checks the decomposition first; kOrthogonalityViolation on a shared prime.
SeparationBound compose_bounds(const SeparationBound& psi1, const SeparationBound& psi2,
                               const ProductDecomposition& decomposition);

struct CoverSystem {
  IntSet covered;
  std::vector<IntSet> parts;
  Integer multiplicity{1};

  // Throws kMultiplicityViolation when some element lies in fewer than M parts.
  void validate() const;
};

struct CoverBound {
  double bound = 0;                    // M^-4 (Σ E_i^(1/4))^4
  std::optional<Rational> exact_bound; // when every part energy is the same
  Integer actual;                      // E(A)
  std::vector<Integer> part_energies;
  int sign = 0;                        // sign of E(A)^(1/4) - (1/M) Σ E_i^(1/4); 0 is equality
};

CoverBound energy_cover_bound(const CoverSystem& cov);

struct FinalAssembly {
  std::vector<Rational> ratio_set;  // A / A', ascending
  std::size_t L = 0;
  std::size_t M = 0;
  std::size_t min_cover = 0;        // least number of parts covering an element of A
  Integer aprime_energy;
  std::vector<Integer> part_energies;  // E(α·A') with denominators cleared
  Rational energy_bound;               // (L/M)^4 · E(A')
  Integer actual;                      // E(A)
  std::size_t quotient_size = 0;       // |A / A|
  Rational K;                          // |AA| / |A|
  bool ratio_within_quotient = false;  // L <= |A/A|
  bool quotient_within_plunnecke = false;  // |A/A| <= K^2 |A|
  Rational chain_bound;                // K^8 (|A| / |A'|)^4 · E(A')
};

// A' ⊆ A, both non-empty and positive; kSubsetViolation otherwise.
FinalAssembly final_assembly(const IntSet& a, const IntSet& aprime);

}  // namespace sumprod
