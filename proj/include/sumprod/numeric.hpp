#pragma once

// Shared scalar types and the library-wide error type.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sumprod {

using Integer = mpz_class;
using Rational = mpq_class;

enum class ErrorCode {
  kEmptyOperand,
  kCapExceeded,
  kDanglingEdge,
  kInvalidArgument,
  kNonPositiveElement,
  kFactorization,
  kIndexOutOfRange,
  kBasePointAbsent,
  kEmptyGraph,
  kEmptySurvivor,
  kStructureViolation,
  kCoprimalityViolation,
  kEmptySlice,
  kOrthogonalityViolation,
  kMultiplicityViolation,
  kSubsetViolation,
  kDomainGuard,
  kInfeasibleRegion,
  kParse,
  kUndecided,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

Rational make_rational(const Integer& num, const Integer& den);

// floor(log2(q)) for q > 0, exact.
long floor_log2(const Rational& q);

// 2^k as an exact rational; k may be negative.
Rational pow2(long k);

std::string to_string(const Integer& z);
// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

Integer parse_integer(std::string_view text);
// Accepts "p/q", an integer, or a decimal literal such as "0.001" / "1e-3".
Rational parse_rational(std::string_view text);

bool fits_int64(const Integer& z);
std::int64_t to_int64(const Integer& z);
double to_double(const Rational& q);

// log(max(x, 2)): every logarithm of a measured quantity goes through this.
double guarded_log(double x);

// num / sqrt(radicand), num >= 0, radicand > 0. Ordered by value.
class RootRatio {
 public:
  RootRatio() : num_(0), radicand_(1) {}
  RootRatio(Integer num, Integer radicand);

  const Integer& numerator() const { return num_; }
  const Integer& radicand() const { return radicand_; }

  Rational squared() const;
  // Present when the value is rational.
  std::optional<Rational> exact() const;
  double value() const;
  std::string to_string() const;

  friend bool operator==(const RootRatio& a, const RootRatio& b) {
    return a.squared() == b.squared();
  }
  friend std::strong_ordering operator<=>(const RootRatio& a, const RootRatio& b) {
    const int c = cmp(a.squared(), b.squared());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Integer num_;
  Integer radicand_;
};

}  // namespace sumprod
