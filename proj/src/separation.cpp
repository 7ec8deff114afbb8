#include "sumprod/separation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sumprod/root_compare.hpp"

namespace sumprod {

namespace {

Integer big(std::size_t n) { return Integer(static_cast<unsigned long>(n)); }

Integer energy_or_zero(const IntSet& s) { return s.empty() ? Integer(0) : energy_plus(s).energy; }

Integer pow_ui(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational pow4(const Rational& q) { return q * q * q * q; }

Integer ceil_rational(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kTrivial: return "trivial";
    case Provenance::kOnePrime: return "one_prime";
    case Provenance::kChang: return "chang";
    case Provenance::kComposed: return "composed";
    case Provenance::kEmpirical: return "empirical";
  }
  return "unknown";
}

void SlicedFamily::validate() const {
  if (coefficients.empty()) throw Error(ErrorCode::kEmptyOperand, "family without coefficients");
  if (slices.size() != coefficients.size()) {
    throw Error(ErrorCode::kInvalidArgument, "slice keys do not match the coefficients");
  }
  for (const Integer& a : coefficients) {
    const auto it = slices.find(a);
    if (it == slices.end()) throw Error(ErrorCode::kInvalidArgument, "no slice for coefficient " + a.get_str());
    if (it->second.empty()) throw Error(ErrorCode::kEmptySlice, "empty slice for coefficient " + a.get_str());
  }
  for (const auto& [key, xs] : slices) {
    for (const Integer& x : xs) {
      for (const Integer& a : coefficients) {
        if (gcd(a, x) != 1) {
          throw Error(ErrorCode::kCoprimalityViolation,
                      "gcd(" + a.get_str() + ", " + x.get_str() + ") != 1 in slice " + key.get_str());
        }
      }
    }
  }
}

IntSet SlicedFamily::union_set() const {
  std::vector<Integer> y;
  for (const auto& [a, xs] : slices) {
    for (const Integer& x : xs) y.push_back(a * x);
  }
  return IntSet(std::move(y));
}

int EmpiricalRatio::compare(const Rational& psi) const {
  return compare_root_sum(union_energy, psi, slice_energies, 2);
}

EmpiricalRatio empirical_ratio(const SlicedFamily& fam) {
  fam.validate();
  EmpiricalRatio r;
  r.union_set = fam.union_set();
  r.union_energy = energy_plus(r.union_set).energy;
  for (const Integer& a : fam.coefficients) {
    const Integer e = energy_plus(fam.slices.at(a)).energy;
    r.slice_energies.push_back(e);
    r.rhs += std::sqrt(e.get_d());
  }
  r.lhs = std::sqrt(r.union_energy.get_d());
  r.ratio = r.lhs / r.rhs;
  // Cauchy-Schwarz gives ratio <= |A| for every family.
  if (r.compare(Rational(big(fam.coefficients.size()))) > 0) {
    throw std::logic_error("empirical_ratio: ratio exceeds |A|");
  }
  return r;
}

SeparationBound trivial_bound(const IntSet& a) {
  if (a.empty()) throw Error(ErrorCode::kEmptyOperand, "trivial_bound of an empty set");
  return {Rational(big(a.size())), Provenance::kTrivial};
}

SeparationBound one_prime_bound(const IntSet& a, const Integer& p) {
  if (a.empty()) throw Error(ErrorCode::kEmptyOperand, "one_prime_bound of an empty set");
  if (!is_prime(p)) throw Error(ErrorCode::kInvalidArgument, p.get_str() + " is not prime");
  for (Integer x : a) {
    if (x <= 0) throw Error(ErrorCode::kStructureViolation, x.get_str() + " is not a power of " + p.get_str());
    while (mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) x /= p;
    if (x != 1) throw Error(ErrorCode::kStructureViolation, "element is not a power of " + p.get_str());
  }
  return {Rational(6), Provenance::kOnePrime};
}

ChangReport chang_bound(const IntSet& a, const FactorOptions& opts) {
  if (a.empty()) throw Error(ErrorCode::kEmptyOperand, "chang_bound of an empty set");
  ChangReport r;
  r.K = *doubling_stats(a, a).k_mult;
  r.witness = injective_projection(a, opts);
  r.rank = mult_dimension(a, opts).affine_rank;
  r.by_doubling = pow_ui(Integer(6), ceil_rational(r.K).get_ui());
  r.by_rank = pow_ui(Integer(6), r.rank);
  r.bound = {Rational(r.by_rank), Provenance::kChang};
  return r;
}

IntSet ProductDecomposition::assemble() const {
  if (b.size() != c.size()) throw Error(ErrorCode::kInvalidArgument, "decomposition needs one C_i per b_i");
  std::vector<Integer> out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (const Integer& x : c[i]) out.push_back(b[i] * x);
  }
  return IntSet(std::move(out));
}

SeparationBound compose_bounds(const SeparationBound& psi1, const SeparationBound& psi2) {
  return {psi1.value * psi2.value, Provenance::kComposed};
}

SeparationBound compose_bounds(const SeparationBound& psi1, const SeparationBound& psi2,
                               const ProductDecomposition& decomposition) {
  if (decomposition.b.size() != decomposition.c.size()) {
    throw Error(ErrorCode::kInvalidArgument, "decomposition needs one C_i per b_i");
  }
  for (const Integer& bi : decomposition.b) {
    for (const IntSet& ci : decomposition.c) {
      for (const Integer& x : ci) {
        if (gcd(bi, x) != 1) {
          throw Error(ErrorCode::kOrthogonalityViolation,
                      "gcd(" + bi.get_str() + ", " + x.get_str() + ") != 1");
        }
      }
    }
  }
  return compose_bounds(psi1, psi2);
}

void CoverSystem::validate() const {
  if (multiplicity < 1) throw Error(ErrorCode::kInvalidArgument, "cover multiplicity must be positive");
  if (covered.empty()) throw Error(ErrorCode::kEmptyOperand, "cover of an empty set");
  for (const Integer& a : covered) {
    std::size_t n = 0;
    for (const IntSet& p : parts) n += p.contains(a) ? 1 : 0;
    if (big(n) < multiplicity) {
      throw Error(ErrorCode::kMultiplicityViolation,
                  a.get_str() + " is covered " + std::to_string(n) + " times, below " + multiplicity.get_str());
    }
  }
}

CoverBound energy_cover_bound(const CoverSystem& cov) {
  cov.validate();
  CoverBound r;
  r.actual = energy_plus(cov.covered).energy;
  for (const IntSet& p : cov.parts) r.part_energies.push_back(energy_or_zero(p));
  const Rational inv_m = make_rational(Integer(1), cov.multiplicity);
  r.bound = root_sum_power(inv_m, r.part_energies, 4);
  if (std::adjacent_find(r.part_energies.begin(), r.part_energies.end(), std::not_equal_to<>()) ==
      r.part_energies.end()) {
    r.exact_bound = pow4(Rational(big(r.part_energies.size())) * inv_m) * r.part_energies.front();
  }
  r.sign = compare_root_sum(r.actual, inv_m, r.part_energies, 4);
  if (r.sign > 0) throw std::logic_error("energy_cover_bound: E(A) exceeds the cover bound");
  return r;
}

FinalAssembly final_assembly(const IntSet& a, const IntSet& aprime) {
  if (a.empty() || aprime.empty()) throw Error(ErrorCode::kEmptyOperand, "final_assembly needs non-empty sets");
  if (!aprime.is_subset_of(a)) throw Error(ErrorCode::kSubsetViolation, "A' is not a subset of A");
  if (a.min() <= 0) throw Error(ErrorCode::kNonPositiveElement, "final_assembly needs positive elements");
  FinalAssembly r;

  for (const Integer& x : a) {
    for (const Integer& y : aprime) r.ratio_set.push_back(make_rational(x, y));
  }
  std::sort(r.ratio_set.begin(), r.ratio_set.end());
  r.ratio_set.erase(std::unique(r.ratio_set.begin(), r.ratio_set.end()), r.ratio_set.end());
  r.L = r.ratio_set.size();
  r.M = aprime.size();

  // a ∈ α·A'  <=>  a·q / p ∈ A' for α = p/q.
  r.min_cover = r.L;
  for (const Integer& x : a) {
    std::size_t n = 0;
    for (const Rational& alpha : r.ratio_set) {
      const Integer t = x * alpha.get_den();
      if (mpz_divisible_p(t.get_mpz_t(), alpha.get_num_mpz_t()) && aprime.contains(t / alpha.get_num())) ++n;
    }
    r.min_cover = std::min(r.min_cover, n);
  }
  if (r.min_cover < r.M) throw std::logic_error("final_assembly: an element is covered fewer than |A'| times");

  // q·(α·A') = p·A' is an integer dilate with the same energy.
  r.aprime_energy = energy_plus(aprime).energy;
  for (const Rational& alpha : r.ratio_set) {
    r.part_energies.push_back(energy_plus(dilate(aprime, alpha.get_num())).energy);
  }
  if (std::any_of(r.part_energies.begin(), r.part_energies.end(),
                  [&](const Integer& e) { return e != r.aprime_energy; })) {
    throw std::logic_error("final_assembly: dilation changed the energy");
  }
  r.energy_bound = pow4(make_rational(big(r.L), big(r.M))) * r.aprime_energy;
  r.actual = energy_plus(a).energy;
  if (Rational(r.actual) > r.energy_bound) throw std::logic_error("final_assembly: bound below E(A)");

  std::vector<Rational> q;
  for (const Integer& x : a) {
    for (const Integer& y : a) q.push_back(make_rational(x, y));
  }
  std::sort(q.begin(), q.end());
  r.quotient_size = static_cast<std::size_t>(std::unique(q.begin(), q.end()) - q.begin());
  r.K = *doubling_stats(a, a).k_mult;
  r.ratio_within_quotient = r.L <= r.quotient_size;
  r.quotient_within_plunnecke = Rational(big(r.quotient_size)) <= r.K * r.K * big(a.size());
  const Rational K8 = pow4(r.K) * pow4(r.K);
  r.chain_bound = K8 * pow4(make_rational(big(a.size()), big(aprime.size()))) * r.aprime_energy;
  return r;
}

}  // namespace sumprod
