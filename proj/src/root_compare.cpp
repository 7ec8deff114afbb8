#include "sumprod/root_compare.hpp"

#include <mpfr.h>

#include <map>

#include "sumprod/valuation.hpp"

namespace sumprod {

namespace {

// RAII wrapper; MPFR has no C++ value type of its own.
class Real {
 public:
  explicit Real(unsigned long bits) { mpfr_init2(v_, static_cast<mpfr_prec_t>(bits)); }
  ~Real() { mpfr_clear(v_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// [lo, hi] ⊇ q · Σ t_i^(1/k).
void enclose_sum(const Rational& q, std::span<const Integer> terms, unsigned k, unsigned long bits, Real& lo,
                 Real& hi) {
  mpfr_set_ui(lo.get(), 0, MPFR_RNDD);
  mpfr_set_ui(hi.get(), 0, MPFR_RNDU);
  Real t(bits), r(bits);
  for (const Integer& x : terms) {
    mpfr_set_z(t.get(), x.get_mpz_t(), MPFR_RNDD);
    mpfr_rootn_ui(r.get(), t.get(), k, MPFR_RNDD);
    mpfr_add(lo.get(), lo.get(), r.get(), MPFR_RNDD);
    mpfr_set_z(t.get(), x.get_mpz_t(), MPFR_RNDU);
    mpfr_rootn_ui(r.get(), t.get(), k, MPFR_RNDU);
    mpfr_add(hi.get(), hi.get(), r.get(), MPFR_RNDU);
  }
  mpfr_mul_q(lo.get(), lo.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_mul_q(hi.get(), hi.get(), q.get_mpq_t(), MPFR_RNDU);
}

void enclose_root(const Integer& x, unsigned k, unsigned long bits, Real& lo, Real& hi) {
  Real t(bits);
  mpfr_set_z(t.get(), x.get_mpz_t(), MPFR_RNDD);
  mpfr_rootn_ui(lo.get(), t.get(), k, MPFR_RNDD);
  mpfr_set_z(t.get(), x.get_mpz_t(), MPFR_RNDU);
  mpfr_rootn_ui(hi.get(), t.get(), k, MPFR_RNDU);
}

// k-th roots of distinct k-th-power-free integers are linearly independent
// over Q, so equality reduces to matching a single radical.
std::optional<bool> exactly_equal(const Integer& x, const Rational& q, std::span<const Integer> terms, unsigned k) {
  std::map<Integer, Integer> groups;
  for (const Integer& t : terms) {
    if (t == 0) continue;
    const auto s = kth_power_split(t, k);
    if (!s) return std::nullopt;
    groups[s->second] += s->first;
  }
  if (q == 0) groups.clear();
  if (x == 0) return groups.empty();
  const auto sx = kth_power_split(x, k);
  if (!sx) return std::nullopt;
  if (groups.size() != 1) return false;
  const auto& [r, c] = *groups.begin();
  return r == sx->second && q * c == Rational(sx->first);
}

}  // namespace

std::optional<std::pair<Integer, Integer>> kth_power_split(const Integer& n, unsigned k) {
  if (n < 0 || k == 0) throw Error(ErrorCode::kInvalidArgument, "kth_power_split needs n >= 0, k >= 1");
  if (n <= 1) return std::make_pair(Integer(1), n);
  std::vector<std::pair<Integer, unsigned long>> f;
  try {
    f = factorize(n);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kFactorization) return std::nullopt;
    throw;
  }
  Integer c(1), r(1);
  for (const auto& [p, e] : f) {
    Integer pk;
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), e / k);
    c *= pk;
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), e % k);
    r *= pk;
  }
  return std::make_pair(c, r);
}

int compare_root_sum(const Integer& x, const Rational& q, std::span<const Integer> terms, unsigned k,
                     const RootCompareOptions& opts) {
  if (k == 0 || x < 0 || q < 0) throw Error(ErrorCode::kInvalidArgument, "compare_root_sum domain");
  for (const Integer& t : terms) {
    if (t < 0) throw Error(ErrorCode::kInvalidArgument, "compare_root_sum needs non-negative terms");
  }
  std::optional<bool> equal;
  bool equality_tested = false;
  for (unsigned long bits = opts.start_bits; bits <= opts.max_bits; bits *= 2) {
    Real xl(bits), xh(bits), sl(bits), sh(bits);
    enclose_root(x, k, bits, xl, xh);
    enclose_sum(q, terms, k, bits, sl, sh);
    if (mpfr_less_p(sh.get(), xl.get())) return 1;
    if (mpfr_less_p(xh.get(), sl.get())) return -1;
    if (!equality_tested) {
      equal = exactly_equal(x, q, terms, k);
      equality_tested = true;
      if (equal && *equal) return 0;
    }
  }
  throw Error(ErrorCode::kUndecided, "root-sum comparison not settled within the precision limit");
}

double root_sum_power(const Rational& q, std::span<const Integer> terms, unsigned k, unsigned long bits) {
  Real lo(bits), hi(bits);
  enclose_sum(q, terms, k, bits, lo, hi);
  mpfr_pow_ui(hi.get(), hi.get(), k, MPFR_RNDN);
  return mpfr_get_d(hi.get(), MPFR_RNDN);
}

}  // namespace sumprod
