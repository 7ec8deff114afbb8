#include "sumprod/intset.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace sumprod {

namespace {

// Elements strictly inside ±2^62, so that pairwise sums and differences fit.
bool small_enough(const IntSet& s) {
  if (s.empty()) return true;
  static const Integer bound = Integer(1) << 62;
  return abs(s.min()) < bound && abs(s.max()) < bound;
}

std::vector<std::int64_t> as_int64(const IntSet& s) {
  std::vector<std::int64_t> out;
  out.reserve(s.size());
  for (const Integer& x : s) out.push_back(static_cast<std::int64_t>(mpz_get_si(x.get_mpz_t())));
  return out;
}

Integer from_u128(unsigned __int128 v) {
  Integer hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  Integer lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  return (hi << 64) + lo;
}

Integer from_u64(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

void require_nonempty(const IntSet& a, const IntSet& b, const char* op) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::kEmptyOperand, std::string(op) + " needs non-empty operands");
}

// Sorts (value, count) items and merges equal values.
template <class T>
std::vector<std::pair<T, std::uint64_t>> merge_counts(std::vector<std::pair<T, std::uint64_t>> items) {
  std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::pair<T, std::uint64_t>> out;
  for (auto& [v, c] : items) {
    if (!out.empty() && out.back().first == v) {
      out.back().second += c;
    } else {
      out.emplace_back(std::move(v), c);
    }
  }
  return out;
}

template <class F>
IntSet pairwise(const IntSet& a, const IntSet& b, F op) {
  std::vector<Integer> out;
  out.reserve(a.size() * b.size());
  for (const Integer& x : a) {
    for (const Integer& y : b) out.push_back(op(x, y));
  }
  return IntSet(std::move(out));
}

}  // namespace

IntSet::IntSet(std::vector<Integer> elements) : elems_(std::move(elements)) {
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

IntSet::IntSet(std::initializer_list<long> elements) {
  elems_.reserve(elements.size());
  for (const long x : elements) elems_.emplace_back(x);
  *this = IntSet(std::move(elems_));
}

IntSet IntSet::range(long first, long last_exclusive) {
  std::vector<Integer> v;
  for (long x = first; x < last_exclusive; ++x) v.emplace_back(x);
  return IntSet(std::move(v));
}

bool IntSet::contains(const Integer& x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

std::optional<std::size_t> IntSet::index_of(const Integer& x) const {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
  if (it == elems_.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - elems_.begin());
}

bool IntSet::is_subset_of(const IntSet& other) const {
  return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
}

bool IntSet::fits_int64() const {
  return empty() || (sumprod::fits_int64(min()) && sumprod::fits_int64(max()));
}

IntSet parse_set_lines(std::string_view text) {
  std::vector<Integer> v;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    v.push_back(parse_integer(line));
  }
  return IntSet(std::move(v));
}

IntSet parse_set_literal(std::string_view text) {
  std::string s(text);
  for (char& ch : s) {
    if (ch == ',' || ch == '[' || ch == ']' || ch == '{' || ch == '}' || ch == ';') ch = ' ';
  }
  std::vector<Integer> v;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) v.push_back(parse_integer(tok));
  return IntSet(std::move(v));
}

std::string to_lines(const IntSet& s) {
  std::string out;
  for (const Integer& x : s) {
    out += x.get_str();
    out += '\n';
  }
  return out;
}

std::string to_literal(const IntSet& s) {
  std::string out;
  for (const Integer& x : s) {
    if (!out.empty()) out += ',';
    out += x.get_str();
  }
  return out;
}

IntSet sumset(const IntSet& a, const IntSet& b) {
  require_nonempty(a, b, "sumset");
  if (small_enough(a) && small_enough(b)) {
    const auto x = as_int64(a), y = as_int64(b);
    std::vector<std::int64_t> s;
    s.reserve(x.size() * y.size());
    for (const auto u : x) {
      for (const auto v : y) s.push_back(u + v);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::vector<Integer> out;
    out.reserve(s.size());
    for (const auto v : s) out.emplace_back(static_cast<long>(v));
    return IntSet(std::move(out));
  }
  return pairwise(a, b, [](const Integer& x, const Integer& y) { return Integer(x + y); });
}

IntSet productset(const IntSet& a, const IntSet& b) {
  require_nonempty(a, b, "productset");
  return pairwise(a, b, [](const Integer& x, const Integer& y) { return Integer(x * y); });
}

IntSet difference_set(const IntSet& a, const IntSet& b) {
  require_nonempty(a, b, "difference_set");
  return pairwise(a, b, [](const Integer& x, const Integer& y) { return Integer(x - y); });
}

IntSet dilate(const IntSet& a, const Integer& c) {
  std::vector<Integer> v;
  v.reserve(a.size());
  for (const Integer& x : a) v.push_back(c * x);
  return IntSet(std::move(v));
}

IntSet translate(const IntSet& a, const Integer& d) {
  std::vector<Integer> v;
  v.reserve(a.size());
  for (const Integer& x : a) v.push_back(x + d);
  return IntSet(std::move(v));
}

std::uint64_t RepFunction::at(const Integer& x) const {
  auto it = std::lower_bound(support.begin(), support.end(), x,
                             [](const auto& entry, const Integer& v) { return entry.first < v; });
  return (it != support.end() && it->first == x) ? it->second : 0;
}

Integer RepFunction::total_mass() const {
  unsigned __int128 t = 0;
  for (const auto& [v, c] : support) t += c;
  return from_u128(t);
}

Integer RepFunction::sum_of_squares() const {
  unsigned __int128 t = 0;
  for (const auto& [v, c] : support) t += static_cast<unsigned __int128>(c) * c;
  return from_u128(t);
}

IntSet RepFunction::support_set() const {
  std::vector<Integer> v;
  v.reserve(support.size());
  for (const auto& [x, c] : support) v.push_back(x);
  return IntSet(std::move(v));
}

RepFunction rep_function(const IntSet& a, const IntSet& b, Sign sign, const RepOptions& opts) {
  require_nonempty(a, b, "rep_function");
  RepFunction r;
  const std::uint64_t pairs = static_cast<std::uint64_t>(a.size()) * b.size();

  if (opts.allow_int64 && small_enough(a) && small_enough(b)) {
    const auto x = as_int64(a);
    auto y = as_int64(b);
    if (sign == Sign::kMinus) {
      for (auto& v : y) v = -v;
      std::reverse(y.begin(), y.end());
    }
    const std::int64_t lo = x.front() + y.front();
    const std::int64_t hi = x.back() + y.back();
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (opts.allow_dense && span <= opts.dense_limit && span <= opts.dense_ratio * pairs) {
      std::vector<std::uint64_t> counts(span, 0);
      for (const auto u : x) {
        for (const auto v : y) ++counts[static_cast<std::size_t>(u + v - lo)];
      }
      for (std::uint64_t i = 0; i < span; ++i) {
        if (counts[i] != 0) r.support.emplace_back(Integer(static_cast<long>(lo + static_cast<std::int64_t>(i))), counts[i]);
      }
      r.path = RepPath::kDense;
      return r;
    }
    std::vector<std::int64_t> sums;
    sums.reserve(pairs);
    for (const auto u : x) {
      for (const auto v : y) sums.push_back(u + v);
    }
    std::sort(sums.begin(), sums.end());
    for (std::size_t i = 0; i < sums.size();) {
      std::size_t j = i;
      while (j < sums.size() && sums[j] == sums[i]) ++j;
      r.support.emplace_back(Integer(static_cast<long>(sums[i])), static_cast<std::uint64_t>(j - i));
      i = j;
    }
    r.path = RepPath::kSorted;
    return r;
  }

  std::map<Integer, std::uint64_t> acc;
  for (const Integer& u : a) {
    for (const Integer& v : b) ++acc[sign == Sign::kPlus ? Integer(u + v) : Integer(u - v)];
  }
  r.support.assign(acc.begin(), acc.end());
  r.path = RepPath::kOrderedMap;
  return r;
}

const char* to_string(EnergyMethod m) {
  return m == EnergyMethod::kConvolution ? "convolution" : "quadruple-oracle";
}

namespace {

// For each (a1, b1, a2) there is at most one b2 = a1 + b1 - a2 in B.
template <class T>
unsigned __int128 count_quadruples(const std::vector<T>& a, const std::vector<T>& b) {
  unsigned __int128 n = 0;
  for (const T& a1 : a) {
    for (const T& b1 : b) {
      const T s = a1 + b1;
      for (const T& a2 : a) {
        if (std::binary_search(b.begin(), b.end(), T(s - a2))) ++n;
      }
    }
  }
  return n;
}

}  // namespace

EnergyReport energy_plus(const IntSet& a, const IntSet& b, EnergyMethod method, const EnergyCaps& caps,
                         const RepOptions& opts) {
  require_nonempty(a, b, "energy_plus");
  EnergyReport rep;
  rep.method = method;
  rep.size_a = a.size();
  rep.size_b = b.size();
  if (method == EnergyMethod::kConvolution) {
    rep.energy = rep_function(a, b, Sign::kPlus, opts).sum_of_squares();
    return rep;
  }
  const std::uint64_t pairs = static_cast<std::uint64_t>(a.size()) * b.size();
  if (pairs > caps.oracle_pairs) {
    throw Error(ErrorCode::kCapExceeded, "quadruple oracle refuses " + std::to_string(pairs) +
                                             " pairs; use the convolution method");
  }
  if (small_enough(a) && small_enough(b)) {
    rep.energy = from_u128(count_quadruples(as_int64(a), as_int64(b)));
  } else {
    rep.energy = from_u128(count_quadruples(a.elements(), b.elements()));
  }
  return rep;
}

namespace {

template <class T>
Integer iterated_energy(const std::vector<T>& a, unsigned k) {
  std::vector<std::pair<T, std::uint64_t>> r;
  r.reserve(a.size());
  for (const T& x : a) r.emplace_back(x, 1);
  for (unsigned step = 1; step < k; ++step) {
    std::vector<std::pair<T, std::uint64_t>> next;
    next.reserve(r.size() * a.size());
    for (const auto& [v, c] : r) {
      for (const T& x : a) next.emplace_back(T(v + x), c);
    }
    r = merge_counts(std::move(next));
  }
  unsigned __int128 e = 0;
  for (const auto& [v, c] : r) e += static_cast<unsigned __int128>(c) * c;
  return from_u128(e);
}

}  // namespace

Integer energy_k(const IntSet& a, unsigned k, const EnergyCaps& caps) {
  if (a.empty()) throw Error(ErrorCode::kEmptyOperand, "energy_k needs a non-empty set");
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "energy_k needs k >= 2");
  Integer tuples(1);
  for (unsigned i = 0; i < k; ++i) {
    tuples *= static_cast<unsigned long>(a.size());
    if (tuples > from_u64(caps.k_tuples)) {
      throw Error(ErrorCode::kCapExceeded, "|A|^k exceeds the k-tuple cap");
    }
  }
  // k-fold sums stay inside k·max|a|; 64-bit arithmetic is safe below 2^62 / k.
  const Integer bound = (Integer(1) << 62) / k;
  if (abs(a.min()) < bound && abs(a.max()) < bound) return iterated_energy(as_int64(a), k);
  return iterated_energy(a.elements(), k);
}

IntSet restricted_sumset(const IntSet& a, const IntSet& b, const IntGraph& g) {
  std::vector<Integer> out;
  out.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    const Integer& u = g.left()[e.left];
    const Integer& v = g.right()[e.right];
    if (!a.contains(u) || !b.contains(v)) throw Error(ErrorCode::kDanglingEdge, "edge endpoint outside A × B");
    out.push_back(u + v);
  }
  return IntSet(std::move(out));
}

DoublingStats doubling_stats(const IntSet& a, const IntSet& b, const std::optional<IntGraph>& g) {
  require_nonempty(a, b, "doubling_stats");
  DoublingStats st;
  if (a == b) {
    st.k_mult = make_rational(Integer(static_cast<unsigned long>(productset(a, a).size())),
                              Integer(static_cast<unsigned long>(a.size())));
  }
  const IntSet s = g ? restricted_sumset(a, b, *g) : sumset(a, b);
  st.sumset_size = s.size();
  st.k_plus = RootRatio(Integer(static_cast<unsigned long>(s.size())),
                        Integer(static_cast<unsigned long>(a.size())) * static_cast<unsigned long>(b.size()));
  return st;
}

}  // namespace sumprod
