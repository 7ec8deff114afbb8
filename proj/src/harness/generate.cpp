#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sumprod/harness.hpp"

namespace sumprod {

namespace {

void check_cap(const Integer& x, const Integer& cap) {
  if (abs(x) > cap) throw Error(ErrorCode::kCapExceeded, "generated element exceeds the magnitude cap");
}

std::vector<Integer> exponent_box(const std::vector<Integer>& primes, const std::vector<unsigned>& bounds,
                                  const Integer& cap) {
  if (primes.size() != bounds.size()) {
    throw Error(ErrorCode::kInvalidArgument, "exponent_box needs one bound per prime");
  }
  for (const Integer& p : primes) {
    if (!is_prime(p)) throw Error(ErrorCode::kInvalidArgument, p.get_str() + " is not prime");
  }
  std::vector<Integer> out{Integer(1)};
  for (std::size_t i = 0; i < primes.size(); ++i) {
    std::vector<Integer> next;
    for (const Integer& x : out) {
      Integer y = x;
      for (unsigned e = 0; e <= bounds[i]; ++e) {
        check_cap(y, cap);
        next.push_back(y);
        y *= primes[i];
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<Integer> default_primes(std::vector<Integer> primes, std::size_t count) {
  if (primes.empty()) primes = {2, 3, 5};
  if (primes.size() != count) throw Error(ErrorCode::kInvalidArgument, "model_3d_ap needs exactly three primes");
  return primes;
}

// Points of a box shifted by `offset` in every coordinate of `shift`.
std::vector<LatticePoint> shifted_box(const std::vector<unsigned>& bounds, const LatticePoint& shift) {
  auto pts = box_points(bounds);
  for (auto& p : pts) p = add(p, shift);
  return pts;
}

LatticeGraph random_dense_graph(std::vector<LatticePoint> a1, std::vector<LatticePoint> a2, Rng& rng,
                                double density) {
  a1 = normalize_points(std::move(a1));
  a2 = normalize_points(std::move(a2));
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < a1.size(); ++i) {
    for (std::uint32_t j = 0; j < a2.size(); ++j) {
      if (rng.chance(density)) edges.push_back({i, j});
    }
  }
  if (edges.empty()) edges.push_back({0, 0});
  return LatticeGraph(std::move(a1), std::move(a2), std::move(edges));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t row_seed(std::uint64_t base, std::size_t index) {
  std::uint64_t state = base ^ (static_cast<std::uint64_t>(index) * 0xd1b54a32d192ed03ULL);
  return splitmix64(state);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "Rng::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t x = next();
    if (x < limit) return x % n;
  }
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorCode::kInvalidArgument, "Rng::uniform with hi < lo");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span));
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<std::size_t> Rng::sample(std::size_t n, std::size_t k) {
  if (k > n) throw Error(ErrorCode::kInvalidArgument, "cannot sample more values than the range holds");
  // Floyd's algorithm.
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    const std::size_t t = static_cast<std::size_t>(below(j + 1));
    if (std::find(out.begin(), out.end(), t) == out.end()) {
      out.push_back(t);
    } else {
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::kArithmeticProgression: return "arithmetic_progression";
    case FamilyKind::kGeometric: return "geometric";
    case FamilyKind::kExponentBox: return "exponent_box";
    case FamilyKind::kRandomSubset: return "random_subset";
    case FamilyKind::kUnionBTimesC: return "union_b_times_C";
    case FamilyKind::kModel3dAp: return "model_3d_ap";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(const std::string& s) {
  for (FamilyKind k : {FamilyKind::kArithmeticProgression, FamilyKind::kGeometric, FamilyKind::kExponentBox,
                       FamilyKind::kRandomSubset, FamilyKind::kUnionBTimesC, FamilyKind::kModel3dAp}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorCode::kParse, "unknown family kind \"" + s + "\"");
}

Integer default_magnitude_cap() {
  Integer cap;
  mpz_ui_pow_ui(cap.get_mpz_t(), 2, 128);
  return cap;
}

IntSet generate(const FamilySpec& spec, const Integer& cap) {
  std::vector<Integer> out;
  switch (spec.kind) {
    case FamilyKind::kArithmeticProgression: {
      if (spec.length == 0) throw Error(ErrorCode::kInvalidArgument, "progression of length 0");
      if (spec.step == 0 && spec.length > 1) throw Error(ErrorCode::kInvalidArgument, "progression with step 0");
      Integer x = spec.start;
      for (std::size_t i = 0; i < spec.length; ++i, x += spec.step) {
        check_cap(x, cap);
        out.push_back(x);
      }
      break;
    }
    case FamilyKind::kGeometric: {
      if (spec.length == 0) throw Error(ErrorCode::kInvalidArgument, "progression of length 0");
      if (abs(spec.ratio) < 2) throw Error(ErrorCode::kInvalidArgument, "geometric ratio must be at least 2");
      Integer x = spec.start == 0 ? Integer(1) : spec.start;
      for (std::size_t i = 0; i < spec.length; ++i, x *= spec.ratio) {
        check_cap(x, cap);
        out.push_back(x);
      }
      break;
    }
    case FamilyKind::kExponentBox:
      out = exponent_box(spec.primes, spec.bounds, cap);
      break;
    case FamilyKind::kModel3dAp: {
      if (spec.length < 1) throw Error(ErrorCode::kInvalidArgument, "model_3d_ap needs a scale n >= 1");
      if (!(spec.alpha > 0 && spec.alpha < 0.5)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1/2)");
      const double n = static_cast<double>(spec.length);
      const auto side = [&](double e) { return static_cast<unsigned>(std::floor(std::pow(n, e) + 1e-9)); };
      out = exponent_box(default_primes(spec.primes, 3), {side(spec.alpha), side(1 - 2 * spec.alpha), side(spec.alpha)},
                         cap);
      break;
    }
    case FamilyKind::kRandomSubset: {
      if (spec.hi < spec.lo) throw Error(ErrorCode::kInvalidArgument, "random_subset with hi < lo");
      check_cap(spec.lo, cap);
      check_cap(spec.hi, cap);
      const Integer width = spec.hi - spec.lo + 1;
      if (spec.size == 0 || width < static_cast<unsigned long>(spec.size)) {
        throw Error(ErrorCode::kInvalidArgument, "random_subset size must lie in [1, hi - lo + 1]");
      }
      if (!width.fits_ulong_p()) throw Error(ErrorCode::kCapExceeded, "random_subset range wider than 2^64");
      Rng rng(spec.seed);
      for (std::size_t i : rng.sample(width.get_ui(), spec.size)) out.push_back(spec.lo + static_cast<unsigned long>(i));
      break;
    }
    case FamilyKind::kUnionBTimesC: {
      if (spec.b.empty() || spec.c.empty()) throw Error(ErrorCode::kInvalidArgument, "union_b_times_C needs B and C");
      for (const Integer& x : spec.b) {
        for (const Integer& y : spec.c) {
          const Integer z = x * y;
          check_cap(z, cap);
          out.push_back(z);
        }
      }
      break;
    }
  }
  return IntSet(std::move(out));
}

Json to_json(const FamilySpec& s) {
  Json j = {{"kind", to_string(s.kind)}, {"seed", s.seed}};
  const auto ints = [](const std::vector<Integer>& v) {
    Json a = Json::array();
    for (const Integer& x : v) a.push_back(to_json(x));
    return a;
  };
  switch (s.kind) {
    case FamilyKind::kArithmeticProgression:
      j["start"] = to_json(s.start);
      j["step"] = to_json(s.step);
      j["length"] = s.length;
      break;
    case FamilyKind::kGeometric:
      j["start"] = to_json(s.start == 0 ? Integer(1) : s.start);
      j["ratio"] = to_json(s.ratio);
      j["length"] = s.length;
      break;
    case FamilyKind::kExponentBox:
      j["primes"] = ints(s.primes);
      j["bounds"] = s.bounds;
      break;
    case FamilyKind::kModel3dAp:
      j["primes"] = ints(s.primes);
      j["length"] = s.length;
      j["alpha"] = s.alpha;
      break;
    case FamilyKind::kRandomSubset:
      j["lo"] = to_json(s.lo);
      j["hi"] = to_json(s.hi);
      j["size"] = s.size;
      break;
    case FamilyKind::kUnionBTimesC:
      j["b"] = ints(s.b);
      j["c"] = ints(s.c);
      break;
  }
  return j;
}

FamilySpec family_spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw Error(ErrorCode::kParse, "family spec needs a \"kind\"");
  FamilySpec s;
  s.kind = family_kind_from_string(j["kind"].get<std::string>());
  const auto ints = [](const Json& a) {
    std::vector<Integer> v;
    for (const Json& x : a) v.push_back(integer_from_json(x));
    return v;
  };
  if (j.contains("start")) s.start = integer_from_json(j["start"]);
  if (j.contains("step")) s.step = integer_from_json(j["step"]);
  if (j.contains("ratio")) s.ratio = integer_from_json(j["ratio"]);
  if (j.contains("length")) s.length = j["length"].get<std::size_t>();
  if (j.contains("primes")) s.primes = ints(j["primes"]);
  if (j.contains("bounds")) s.bounds = j["bounds"].get<std::vector<unsigned>>();
  if (j.contains("alpha")) s.alpha = j["alpha"].get<double>();
  if (j.contains("lo")) s.lo = integer_from_json(j["lo"]);
  if (j.contains("hi")) s.hi = integer_from_json(j["hi"]);
  if (j.contains("size")) s.size = j["size"].get<std::size_t>();
  if (j.contains("b")) s.b = ints(j["b"]);
  if (j.contains("c")) s.c = ints(j["c"]);
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  return s;
}

std::vector<LatticePoint> box_points(const std::vector<unsigned>& bounds) {
  std::vector<LatticePoint> out{LatticePoint{}};
  for (unsigned b : bounds) {
    std::vector<LatticePoint> next;
    for (const LatticePoint& p : out) {
      for (unsigned e = 0; e <= b; ++e) {
        LatticePoint q = p;
        q.push_back(e);
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  return out;
}

FiberingInstance fibering_instance(std::size_t index, std::uint64_t seed) {
  Rng rng(seed);
  FiberingInstance inst;
  std::vector<LatticePoint> a1, a2;
  double density = 1;
  switch (index % 3) {
    case 0: {
      // Product of boxes; dimension 3 or 4.
      inst.kind = "product_box";
      const std::size_t dim = 3 + rng.below(2);
      std::vector<unsigned> b1(dim), b2(dim);
      for (auto& b : b1) b = static_cast<unsigned>(rng.uniform(0, 2));
      for (auto& b : b2) b = static_cast<unsigned>(rng.uniform(0, 2));
      b1[0] = std::max(b1[0], 1u);
      b2[0] = std::max(b2[0], 1u);
      a1 = box_points(b1);
      a2 = box_points(b2);
      density = 0.6 + 0.4 * rng.unit();
      break;
    }
    case 1: {
      // Base points carrying fibers of different shapes.
      inst.kind = "mixed_fiber";
      const auto add_union = [&](std::vector<LatticePoint>& pts) {
        const unsigned wide = static_cast<unsigned>(rng.uniform(2, 5));
        const unsigned tall = static_cast<unsigned>(rng.uniform(1, 2));
        for (const auto& p : shifted_box({0, wide, 0}, {0, 0, 0})) pts.push_back(p);
        for (const auto& p : shifted_box({0, 1, tall}, {1, 0, 0})) pts.push_back(p);
        if (rng.chance(0.5)) pts.push_back({2, 0, 0});
      };
      add_union(a1);
      add_union(a2);
      density = 0.5 + 0.5 * rng.unit();
      break;
    }
    default: {
      // Affine rank one: points on a line in Z^3.
      inst.kind = "rank_one";
      const std::int64_t n1 = rng.uniform(3, 12), n2 = rng.uniform(3, 12);
      const std::int64_t s = rng.uniform(1, 3);
      for (std::int64_t i = 0; i < n1; ++i) a1.push_back({i, s * i, 0});
      for (std::int64_t i = 0; i < n2; ++i) a2.push_back({i, s * i, 1});
      density = 0.7 + 0.3 * rng.unit();
      break;
    }
  }
  inst.graph = random_dense_graph(std::move(a1), std::move(a2), rng, density);
  const SplitChoice sc = choose_split(inst.graph.left(), inst.graph.right());
  inst.degenerate_split = sc.degenerate;
  inst.split = CoordSplit::prefix(sc.t, inst.graph.left().front().size());
  return inst;
}

SlicedFamily one_prime_family(Rng& rng, const SlicedParams& p, Integer* prime_out) {
  if (p.primes.empty()) throw Error(ErrorCode::kInvalidArgument, "one_prime_family needs primes");
  const Integer prime = p.primes[rng.below(p.primes.size())];
  if (prime_out) *prime_out = prime;
  const std::size_t k = 1 + rng.below(std::min<std::size_t>(p.max_coefficients, p.max_exponent + 1));
  std::vector<Integer> coeffs;
  for (std::size_t e : rng.sample(p.max_exponent + 1, k)) {
    Integer c;
    mpz_pow_ui(c.get_mpz_t(), prime.get_mpz_t(), e);
    coeffs.push_back(c);
  }
  std::vector<std::int64_t> pool;
  for (std::int64_t x = 1; x <= p.slice_hi; ++x) {
    if (!mpz_divisible_ui_p(Integer(static_cast<long>(x)).get_mpz_t(), prime.get_ui())) pool.push_back(x);
  }
  SlicedFamily fam;
  fam.coefficients = IntSet(coeffs);
  for (const Integer& a : fam.coefficients) {
    const std::size_t m = 1 + rng.below(std::min(p.max_slice, pool.size()));
    std::vector<Integer> xs;
    for (std::size_t i : rng.sample(pool.size(), m)) xs.push_back(Integer(static_cast<long>(pool[i])));
    fam.slices[a] = IntSet(std::move(xs));
  }
  return fam;
}

SlicedFamily unstructured_family(Rng& rng, const SlicedParams& p) {
  const std::size_t k = 1 + rng.below(std::min<std::size_t>(p.max_coefficients, p.coefficient_hi));
  std::vector<Integer> coeffs;
  for (std::size_t i : rng.sample(static_cast<std::size_t>(p.coefficient_hi), k)) {
    coeffs.push_back(Integer(static_cast<unsigned long>(i + 1)));
  }
  SlicedFamily fam;
  fam.coefficients = IntSet(coeffs);
  Integer lcm_all(1);
  for (const Integer& a : fam.coefficients) lcm_all = lcm(lcm_all, a);
  std::vector<std::int64_t> pool;
  for (std::int64_t x = 1; x <= p.slice_hi; ++x) {
    if (gcd(Integer(static_cast<long>(x)), lcm_all) == 1) pool.push_back(x);
  }
  for (const Integer& a : fam.coefficients) {
    const std::size_t m = 1 + rng.below(std::min(p.max_slice, pool.size()));
    std::vector<Integer> xs;
    for (std::size_t i : rng.sample(pool.size(), m)) xs.push_back(Integer(static_cast<long>(pool[i])));
    fam.slices[a] = IntSet(std::move(xs));
  }
  return fam;
}

CoverSystem random_cover(Rng& rng, std::size_t max_size, unsigned max_multiplicity, std::size_t max_extra,
                         std::int64_t lo, std::int64_t hi) {
  const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
  const std::size_t n = 1 + rng.below(std::min(max_size, width));
  std::vector<Integer> elems;
  for (std::size_t i : rng.sample(width, n)) elems.push_back(Integer(static_cast<long>(lo + std::int64_t(i))));
  CoverSystem cov;
  cov.covered = IntSet(elems);
  const unsigned M = 1 + static_cast<unsigned>(rng.below(max_multiplicity));
  const std::size_t parts = M + rng.below(max_extra + 1);
  cov.multiplicity = Integer(M);
  std::vector<std::vector<Integer>> members(parts);
  for (const Integer& a : cov.covered) {
    for (std::size_t i : rng.sample(parts, M)) members[i].push_back(a);
    for (std::size_t i = 0; i < parts; ++i) {
      if (rng.chance(0.15)) members[i].push_back(a);
    }
  }
  for (auto& m : members) cov.parts.push_back(IntSet(std::move(m)));
  return cov;
}

}  // namespace sumprod
