#include "sumprod/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace sumprod {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyOperand: return "empty_operand";
    case ErrorCode::kCapExceeded: return "cap_exceeded";
    case ErrorCode::kDanglingEdge: return "dangling_edge";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNonPositiveElement: return "non_positive_element";
    case ErrorCode::kFactorization: return "factorization";
    case ErrorCode::kIndexOutOfRange: return "index_out_of_range";
    case ErrorCode::kBasePointAbsent: return "base_point_absent";
    case ErrorCode::kEmptyGraph: return "empty_graph";
    case ErrorCode::kEmptySurvivor: return "empty_survivor";
    case ErrorCode::kStructureViolation: return "structure_violation";
    case ErrorCode::kCoprimalityViolation: return "coprimality_violation";
    case ErrorCode::kEmptySlice: return "empty_slice";
    case ErrorCode::kOrthogonalityViolation: return "orthogonality_violation";
    case ErrorCode::kMultiplicityViolation: return "multiplicity_violation";
    case ErrorCode::kSubsetViolation: return "subset_violation";
    case ErrorCode::kDomainGuard: return "domain_guard";
    case ErrorCode::kInfeasibleRegion: return "infeasible_region";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kUndecided: return "undecided";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

long floor_log2(const Rational& q) {
  if (q <= 0) throw Error(ErrorCode::kInvalidArgument, "floor_log2 of non-positive value");
  const long k = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) -
                 static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  // 2^(k-1) < q < 2^(k+1); settle which side of 2^k it falls.
  return q >= pow2(k) ? k : k - 1;
}

Rational pow2(long k) {
  Integer p(1);
  if (k >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
  return make_rational(Integer(1), p);
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Integer parse_integer(std::string_view text) {
  std::string s(trim(text));
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  const bool ok = !s.empty() &&
                  std::all_of(s.begin() + (s.front() == '-' ? 1 : 0), s.end(),
                              [](unsigned char c) { return std::isdigit(c); }) &&
                  s != "-";
  if (!ok) throw Error(ErrorCode::kParse, "not an integer: '" + s + "'");
  return Integer(s, 10);
}

Rational parse_rational(std::string_view text) {
  const std::string_view t = trim(text);
  if (const auto slash = t.find('/'); slash != std::string_view::npos) {
    return make_rational(parse_integer(t.substr(0, slash)), parse_integer(t.substr(slash + 1)));
  }
  // Decimal with optional exponent, converted exactly.
  std::string s(t);
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
    exponent = static_cast<long>(parse_integer(s.substr(e + 1)).get_si());
    s.erase(e);
  }
  if (const auto dot = s.find('.'); dot != std::string::npos) {
    exponent -= static_cast<long>(s.size() - dot - 1);
    s.erase(dot, 1);
  }
  if (s.empty() || s == "-" || s == "+") throw Error(ErrorCode::kParse, "not a number: '" + std::string(t) + "'");
  const Integer mantissa = parse_integer(s);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  return exponent >= 0 ? Rational(mantissa * scale) : make_rational(mantissa, scale);
}

bool fits_int64(const Integer& z) {
  static const Integer lo(std::to_string(std::numeric_limits<std::int64_t>::min()));
  static const Integer hi(std::to_string(std::numeric_limits<std::int64_t>::max()));
  return z >= lo && z <= hi;
}

std::int64_t to_int64(const Integer& z) {
  if (!fits_int64(z)) throw Error(ErrorCode::kCapExceeded, "integer does not fit 64 bits");
  return static_cast<std::int64_t>(std::stoll(z.get_str()));
}

double to_double(const Rational& q) { return q.get_d(); }

double guarded_log(double x) { return std::log(std::max(x, 2.0)); }

RootRatio::RootRatio(Integer num, Integer radicand) : num_(std::move(num)), radicand_(std::move(radicand)) {
  if (num_ < 0 || radicand_ <= 0) throw Error(ErrorCode::kInvalidArgument, "RootRatio needs num >= 0, radicand > 0");
}

Rational RootRatio::squared() const { return make_rational(num_ * num_, radicand_); }

std::optional<Rational> RootRatio::exact() const {
  if (num_ == 0) return Rational(0);
  if (!mpz_perfect_square_p(radicand_.get_mpz_t())) return std::nullopt;
  const Integer root = sqrt(radicand_);
  return make_rational(num_, root);
}

double RootRatio::value() const { return num_.get_d() / std::sqrt(radicand_.get_d()); }

std::string RootRatio::to_string() const {
  if (const auto q = exact()) return sumprod::to_string(*q);
  return num_.get_str() + "/sqrt(" + radicand_.get_str() + ")";
}

}  // namespace sumprod
