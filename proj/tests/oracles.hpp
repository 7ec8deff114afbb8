#pragma once

// Brute-force reference implementations. They share no code with the library
// beyond the Integer type and exist only to be obviously correct.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "sumprod/numeric.hpp"

namespace oracle {

using sumprod::Integer;
using sumprod::Rational;
using Vec = std::vector<long long>;

inline Vec unique_sorted(Vec v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// #{(a1, b1, a2, b2) : a1 + b1 = a2 + b2}, four nested loops.
inline long long energy4(const Vec& a, const Vec& b) {
  long long n = 0;
  for (long long a1 : a)
    for (long long b1 : b)
      for (long long a2 : a)
        for (long long b2 : b) n += (a1 + b1 == a2 + b2);
  return n;
}

// Number of 2k-tuples with equal k-fold sums, by enumerating all k-tuples.
inline long long energy_k(const Vec& a, unsigned k) {
  std::map<long long, long long> count;
  std::vector<std::size_t> idx(k, 0);
  for (;;) {
    long long s = 0;
    for (std::size_t i : idx) s += a[i];
    ++count[s];
    std::size_t pos = 0;
    while (pos < k && ++idx[pos] == a.size()) idx[pos++] = 0;
    if (pos == k) break;
  }
  long long e = 0;
  for (const auto& [s, c] : count) e += c * c;
  return e;
}

inline Vec sumset(const Vec& a, const Vec& b) {
  std::set<long long> s;
  for (long long x : a)
    for (long long y : b) s.insert(x + y);
  return Vec(s.begin(), s.end());
}

inline Vec productset(const Vec& a, const Vec& b) {
  std::set<long long> s;
  for (long long x : a)
    for (long long y : b) s.insert(x * y);
  return Vec(s.begin(), s.end());
}

inline Vec difference_set(const Vec& a, const Vec& b) {
  std::set<long long> s;
  for (long long x : a)
    for (long long y : b) s.insert(x - y);
  return Vec(s.begin(), s.end());
}

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Trial division, ascending primes.
inline std::vector<std::pair<long long, unsigned>> factor(long long n) {
  std::vector<std::pair<long long, unsigned>> out;
  for (long long d = 2; d * d <= n; ++d) {
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) out.push_back({d, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

// Rank of an integer matrix by fraction-free (Bareiss) elimination.
inline std::size_t bareiss_rank(std::vector<std::vector<Integer>> m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t rank = 0;
  Integer prev(1);
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        m[r][k] = (m[rank][c] * m[r][k] - m[r][c] * m[rank][k]) / prev;
      }
      m[r][c] = 0;
    }
    prev = m[rank][c];
    ++rank;
  }
  return rank;
}

// Affine rank of integer points: rank of the differences to the first point.
inline std::size_t affine_rank(const std::vector<std::vector<long long>>& pts) {
  if (pts.size() <= 1) return 0;
  std::vector<std::vector<Integer>> m;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<Integer> row;
    for (std::size_t k = 0; k < pts[i].size(); ++k) row.push_back(Integer(static_cast<long>(pts[i][k] - pts[0][k])));
    m.push_back(row);
  }
  return bareiss_rank(m);
}

// (2n^3 + n) / 3, the additive energy of {0, ..., n-1}.
inline Integer ap_energy(long n) {
  const Integer N(n);
  return (2 * N * N * N + N) / 3;
}

inline long long gcd(long long a, long long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    const long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// The squared separation inequality E(Y) <= psi^2 (sum sqrt E(X_a))^2 in
// long double; only used where the margin is far from the rounding error.
inline long double ratio(long long union_energy, const std::vector<long long>& slice_energies) {
  long double s = 0;
  for (long long e : slice_energies) s += std::sqrt(static_cast<long double>(e));
  return std::sqrt(static_cast<long double>(union_energy)) / s;
}

// Degree-based check of the five cheap-regularity conclusions, in rationals.
inline bool regularity_holds(std::size_t X, std::size_t Y, std::size_t E, const std::vector<std::size_t>& left_deg,
                             const std::vector<std::size_t>& right_deg, std::size_t kept_edges) {
  const Rational delta(Integer(static_cast<unsigned long>(E)),
                       Integer(static_cast<unsigned long>(X)) * Integer(static_cast<unsigned long>(Y)));
  Rational d4 = delta, d2 = delta;
  d4.canonicalize();
  d4 /= 4;
  d2.canonicalize();
  d2 /= 2;
  for (std::size_t d : left_deg)
    if (Rational(Integer(static_cast<unsigned long>(d))) < d4 * Integer(static_cast<unsigned long>(Y))) return false;
  for (std::size_t d : right_deg)
    if (Rational(Integer(static_cast<unsigned long>(d))) < d4 * Integer(static_cast<unsigned long>(X))) return false;
  if (Rational(Integer(static_cast<unsigned long>(left_deg.size()))) < d2 * Integer(static_cast<unsigned long>(X)))
    return false;
  if (Rational(Integer(static_cast<unsigned long>(right_deg.size()))) < d2 * Integer(static_cast<unsigned long>(Y)))
    return false;
  return Rational(Integer(static_cast<unsigned long>(kept_edges))) >=
         d2 * Integer(static_cast<unsigned long>(X)) * Integer(static_cast<unsigned long>(Y));
}

}  // namespace oracle
