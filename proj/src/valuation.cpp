#include "sumprod/valuation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sumprod {

namespace {

const Integer& mr_limit() {
  static const Integer limit("3317044064679887385961981");
  return limit;
}

bool miller_rabin(const Integer& n, unsigned long base) {
  Integer d = n - 1;
  unsigned long s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  Integer x;
  const Integer b(base);
  mpz_powm(x.get_mpz_t(), b.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const Integer nm1 = n - 1;
  if (x == 1 || x == nm1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == nm1) return true;
  }
  return false;
}

std::vector<unsigned long> sieve(unsigned long limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<unsigned long> primes;
  for (unsigned long i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (unsigned long j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

const std::vector<unsigned long>& primes_up_to(unsigned long limit, std::vector<unsigned long>& scratch) {
  static const unsigned long kDefault = FactorOptions{}.prime_ceiling;
  if (limit == kDefault) {
    static const std::vector<unsigned long> cached = sieve(kDefault);
    return cached;
  }
  scratch = sieve(limit);
  return scratch;
}

// Row-echelon basis over Q with incremental insertion.
class EchelonBasis {
 public:
  // Reduces v against the basis; keeps it and returns true when independent.
  bool insert(std::vector<Rational> v) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::size_t p = pivots_[r];
      if (v[p] != 0) {
        const Rational f = v[p];
        for (std::size_t c = 0; c < v.size(); ++c) {
          if (rows_[r][c] != 0) v[c] -= f * rows_[r][c];
        }
      }
    }
    const auto it = std::find_if(v.begin(), v.end(), [](const Rational& q) { return q != 0; });
    if (it == v.end()) return false;
    const std::size_t p = static_cast<std::size_t>(it - v.begin());
    const Rational inv = 1 / v[p];
    for (auto& q : v) q *= inv;
    // Keep the basis fully reduced so later reductions stay one pass.
    for (auto& row : rows_) {
      if (row[p] != 0) {
        const Rational f = row[p];
        for (std::size_t c = 0; c < v.size(); ++c) {
          if (v[c] != 0) row[c] -= f * v[c];
        }
      }
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }
  std::size_t rank() const { return rows_.size(); }

 private:
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> pivots_;
};

std::vector<Rational> to_rational(const LatticePoint& p) {
  std::vector<Rational> v;
  v.reserve(p.size());
  for (const auto x : p) v.emplace_back(Integer(static_cast<long>(x)));
  return v;
}

}  // namespace

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  static const unsigned long bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (const unsigned long p : bases) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  if (n >= mr_limit()) return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
  return std::all_of(std::begin(bases), std::end(bases), [&](unsigned long b) { return miller_rabin(n, b); });
}

PrimeIndex::PrimeIndex(std::vector<Integer> primes) : primes_(std::move(primes)) {
  std::sort(primes_.begin(), primes_.end());
  if (std::adjacent_find(primes_.begin(), primes_.end()) != primes_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "repeated prime in index");
  }
  for (const Integer& p : primes_) {
    if (!is_prime(p)) throw Error(ErrorCode::kInvalidArgument, p.get_str() + " is not prime");
  }
}

std::optional<std::size_t> PrimeIndex::position(const Integer& p) const {
  auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - primes_.begin());
}

std::vector<std::pair<Integer, unsigned long>> factorize(const Integer& n, const FactorOptions& opts) {
  if (n <= 0) throw Error(ErrorCode::kNonPositiveElement, "cannot factor " + n.get_str());
  std::vector<std::pair<Integer, unsigned long>> out;
  Integer m = n;
  std::vector<unsigned long> scratch;
  const auto& primes = primes_up_to(opts.prime_ceiling, scratch);
  for (const unsigned long p : primes) {
    if (m == 1) break;
    if (Integer(p) * p > m) break;
    if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) continue;
    unsigned long e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    out.emplace_back(Integer(p), e);
  }
  if (m > 1) {
    // Either every prime up to sqrt(m) was tried, or m must pass a primality test.
    const Integer ceiling(opts.prime_ceiling);
    if (m > ceiling * ceiling && !is_prime(m)) {
      throw Error(ErrorCode::kFactorization,
                  n.get_str() + " has a composite cofactor beyond the prime ceiling");
    }
    out.emplace_back(m, 1);
  }
  return out;
}

Integer LatticeSet::reconstruct(std::size_t i) const {
  Integer x(1);
  for (std::size_t c = 0; c < index.size(); ++c) {
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), index.primes()[c].get_mpz_t(), static_cast<unsigned long>(vectors[i][c]));
    x *= pe;
  }
  return x;
}

LatticeSet valuate(const IntSet& a, const PrimeIndex& index, const FactorOptions& opts) {
  LatticeSet out;
  out.index = index;
  out.source = a;
  out.vectors.reserve(a.size());
  for (const Integer& x : a) {
    LatticePoint v(index.size(), 0);
    for (const auto& [p, e] : factorize(x, opts)) {
      const auto pos = index.position(p);
      if (!pos) throw Error(ErrorCode::kFactorization, "prime " + p.get_str() + " missing from the index");
      v[*pos] = static_cast<std::int64_t>(e);
    }
    out.vectors.push_back(std::move(v));
  }
  return out;
}

LatticeSet valuate(const IntSet& a, const FactorOptions& opts) {
  std::vector<Integer> primes;
  for (const Integer& x : a) {
    for (const auto& [p, e] : factorize(x, opts)) primes.push_back(p);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return valuate(a, PrimeIndex(std::move(primes)), opts);
}

PrimeIndex joint_index(const IntSet& a, const IntSet& b, const FactorOptions& opts) {
  std::vector<Integer> p = valuate(a, opts).index.primes();
  const std::vector<Integer> q = valuate(b, opts).index.primes();
  p.insert(p.end(), q.begin(), q.end());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return PrimeIndex(std::move(p));
}

RankReport affine_rank(std::span<const LatticePoint> points) {
  if (points.empty()) throw Error(ErrorCode::kEmptyOperand, "affine rank of an empty set");
  RankReport rep;
  rep.witness.push_back(0);
  EchelonBasis basis;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (basis.insert(to_rational(subtract(points[i], points[0])))) rep.witness.push_back(i);
  }
  rep.affine_rank = basis.rank();
  return rep;
}

std::size_t linear_rank(std::span<const LatticePoint> rows) {
  EchelonBasis basis;
  for (const auto& r : rows) basis.insert(to_rational(r));
  return basis.rank();
}

RankReport mult_dimension(const IntSet& a, const FactorOptions& opts) {
  const LatticeSet v = valuate(a, opts);
  return affine_rank(v.vectors);
}

FreimanReport freiman_check(const IntSet& a, const FactorOptions& opts) {
  const LatticeSet v = valuate(a, opts);
  FreimanReport rep;
  rep.rank = affine_rank(v.vectors).affine_rank;
  rep.sumset_size = point_sumset(v.vectors, v.vectors).size();
  const Integer m(static_cast<unsigned long>(rep.rank));
  rep.lower_bound = (m + 1) * static_cast<unsigned long>(a.size()) - m * (m + 1) / 2;
  if (rep.lower_bound > static_cast<unsigned long>(rep.sumset_size)) {
    throw std::logic_error("freiman_check: |AA| below the Freiman lower bound");
  }
  return rep;
}

std::vector<LatticePoint> restrict_coordinates(std::span<const LatticePoint> points,
                                               std::span<const std::size_t> coords) {
  std::vector<LatticePoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    LatticePoint q;
    q.reserve(coords.size());
    for (const auto c : coords) q.push_back(p.at(c));
    out.push_back(std::move(q));
  }
  return out;
}

Projection injective_projection(const IntSet& a, const FactorOptions& opts) {
  const LatticeSet v = valuate(a, opts);
  Projection out;
  if (a.empty()) throw Error(ErrorCode::kEmptyOperand, "injective_projection of an empty set");
  const std::size_t target = affine_rank(v.vectors).affine_rank;

  // Columns of the difference matrix, one per prime, tested in index order.
  EchelonBasis columns;
  for (std::size_t c = 0; c < v.dim() && columns.rank() < target; ++c) {
    std::vector<Rational> col;
    col.reserve(v.vectors.size() - 1);
    for (std::size_t i = 1; i < v.vectors.size(); ++i) {
      col.emplace_back(Integer(static_cast<long>(v.vectors[i][c] - v.vectors[0][c])));
    }
    if (columns.insert(std::move(col))) out.coordinates.push_back(c);
  }
  std::vector<Integer> chosen;
  for (const auto c : out.coordinates) chosen.push_back(v.index.primes()[c]);
  out.primes = PrimeIndex(std::move(chosen));
  out.projected = restrict_coordinates(v.vectors, out.coordinates);

  auto sorted = out.projected;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || out.coordinates.size() > target) {
    throw std::logic_error("injective_projection: certificate failed");
  }
  return out;
}

}  // namespace sumprod
