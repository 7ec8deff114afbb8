#include "sumprod/fibering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sumprod {

namespace {

Integer big(std::size_t n) { return Integer(static_cast<unsigned long>(n)); }

long floor_div2(long k) { return k >= 0 ? k / 2 : -((-k + 1) / 2); }

PigeonholeResult pigeonhole_by_exponent(const std::vector<long>& exps, std::span<const Integer> masses) {
  if (exps.empty()) throw Error(ErrorCode::kEmptyOperand, "dyadic_pigeonhole needs at least one item");
  std::map<long, Integer> bucket_mass;
  PigeonholeResult r;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (masses[i] < 0) throw Error(ErrorCode::kInvalidArgument, "negative pigeonhole mass");
    bucket_mass[exps[i]] += masses[i];
    r.total += masses[i];
  }
  // Ascending scan with >= keeps the larger exponent on ties.
  bool first = true;
  for (const auto& [k, m] : bucket_mass) {
    if (first || m >= r.mass) {
      r.exponent = k;
      r.mass = m;
      first = false;
    }
  }
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == r.exponent) r.members.push_back(i);
  }
  r.buckets = static_cast<std::size_t>(bucket_mass.rbegin()->first - bucket_mass.begin()->first + 1);
  if (r.mass * big(r.buckets) < r.total) throw std::logic_error("dyadic_pigeonhole: mass below total / buckets");
  return r;
}

// Base point -> indices of the points above it, base points ascending.
std::map<LatticePoint, std::vector<std::uint32_t>> group_by_base(const std::vector<LatticePoint>& pts,
                                                                 const CoordSplit& split) {
  std::map<LatticePoint, std::vector<std::uint32_t>> g;
  for (std::uint32_t i = 0; i < pts.size(); ++i) g[split.project_base(pts[i])].push_back(i);
  return g;
}

std::size_t max_fiber(const std::vector<LatticePoint>& pts, const CoordSplit& split) {
  std::size_t m = 0;
  for (const auto& [x, idx] : group_by_base(pts, split)) m = std::max(m, idx.size());
  return m;
}

struct Oriented {
  FiberingDecomposition d;
  std::vector<StepRecord> steps;
  std::size_t n1 = 0;
  std::size_t h_size = 0;
  bool step1_mass_ok = false;
};

std::size_t count_edges(const LatticeGraph& g, const std::vector<bool>& kl, const std::vector<bool>& kr) {
  std::size_t n = 0;
  for (const Edge& e : g.edges()) {
    if (kl[e.left] && kr[e.right]) ++n;
  }
  return n;
}

std::vector<bool> flags_for(std::size_t n, const std::vector<std::vector<std::uint32_t>>& groups) {
  std::vector<bool> keep(n, false);
  for (const auto& grp : groups) {
    for (const auto i : grp) keep[i] = true;
  }
  return keep;
}

void require_survivors(bool ok, const char* step) {
  if (!ok) throw Error(ErrorCode::kEmptySurvivor, std::string(step) + " removed every vertex of a side");
}

Oriented run_steps(const LatticeGraph& w, const CoordSplit& split, const ConstantsConfig& cfg, std::size_t N1,
                   std::size_t N2, std::size_t E, const Rational& delta, const RootRatio& K, double L) {
  Oriented out;
  const Rational& c = cfg.c_small;
  const Rational K2sq = K.squared();
  const auto& left = w.left();
  const auto& right = w.right();

  // Step 1: fibers of the right side.
  const auto lgroups = group_by_base(left, split);
  const std::vector<std::uint32_t>* star = nullptr;
  for (const auto& [x, idx] : lgroups) {
    if (!star || idx.size() > star->size()) star = &idx;
  }
  out.n1 = star->size();
  std::vector<bool> in_star(left.size(), false);
  for (const auto i : *star) in_star[i] = true;
  std::vector<std::size_t> deg(right.size(), 0);
  for (const Edge& e : w.edges()) {
    if (in_star[e.left]) ++deg[e.right];
  }
  // deg >= (δ/8)·n1  <=>  8·deg·N1·N2 >= E·n1.
  std::vector<bool> a2p(right.size(), false);
  for (std::size_t j = 0; j < right.size(); ++j) {
    a2p[j] = 8 * big(deg[j]) * big(N1) * big(N2) >= big(E) * big(out.n1);
  }
  const Rational thr1 = c * Rational(1, 10000) * delta * delta * delta * delta * delta * big(out.n1) / K2sq;
  std::vector<std::vector<std::uint32_t>> r_fibers;
  std::vector<Integer> r_sizes;
  for (const auto& [y, idx] : group_by_base(right, split)) {
    std::vector<std::uint32_t> kept;
    for (const auto j : idx) {
      if (a2p[j]) kept.push_back(j);
    }
    if (!kept.empty() && Rational(big(kept.size())) > thr1) {
      r_sizes.push_back(big(kept.size()));
      r_fibers.push_back(std::move(kept));
    }
  }
  require_survivors(!r_fibers.empty(), "step 1");
  const PigeonholeResult p1 = dyadic_pigeonhole(r_sizes);
  std::vector<std::vector<std::uint32_t>> r_sel;
  out.d.m2 = r_sizes[p1.members.front()];
  for (const auto i : p1.members) {
    r_sel.push_back(r_fibers[i]);
    out.d.m2 = std::min(out.d.m2, r_sizes[i]);
  }
  const std::vector<bool> all_left(left.size(), true);
  const std::vector<bool> a2_bar = flags_for(right.size(), r_sel);
  const std::size_t a2_count = static_cast<std::size_t>(std::count(a2_bar.begin(), a2_bar.end(), true));
  const std::size_t e1 = count_edges(w, all_left, a2_bar);
  // |A1 × Ā'2 ∩ G| >= c·(δ/10)·N1·|Ā'2|  <=>  10·e1·N2 >= c·E·|Ā'2|.
  out.step1_mass_ok = Rational(10 * big(e1) * big(N2)) >= c * big(E) * big(a2_count);
  out.steps.push_back({"step1", left.size(), a2_count, e1, p1.exponent, p1.mass, p1.total});

  // Step 2: fibers of the left side, scored by edges into Ā'2.
  std::vector<Integer> to_a2(left.size(), 0);
  for (const Edge& e : w.edges()) {
    if (a2_bar[e.right]) to_a2[e.left] += 1;
  }
  // |A1(x)| > c·1e-5·δ²·m2/K  <=>  |A1(x)|²·K² > (c·1e-5·δ²·m2)².
  const Rational thr2 = c * Rational(1, 100000) * delta * delta * out.d.m2;
  std::vector<std::vector<std::uint32_t>> l_fibers;
  std::vector<Integer> l_sizes, l_mass;
  for (const auto& [x, idx] : lgroups) {
    const Rational s(big(idx.size()));
    if (s * s * K2sq <= thr2 * thr2) continue;
    Integer m(0);
    for (const auto i : idx) m += to_a2[i];
    l_sizes.push_back(big(idx.size()));
    l_mass.push_back(m);
    l_fibers.push_back(idx);
  }
  Integer l_total(0);
  for (const auto& m : l_mass) l_total += m;
  require_survivors(!l_fibers.empty() && l_total > 0, "step 2");
  std::vector<Rational> l_keys(l_sizes.begin(), l_sizes.end());
  const PigeonholeResult p2 = dyadic_pigeonhole(l_keys, l_mass);
  std::vector<std::vector<std::uint32_t>> l_sel;
  out.d.m1 = l_sizes[p2.members.front()];
  for (const auto i : p2.members) {
    l_sel.push_back(l_fibers[i]);
    out.d.m1 = std::min(out.d.m1, l_sizes[i]);
  }
  const std::vector<bool> a1_bar = flags_for(left.size(), l_sel);
  const LatticeGraph w3 = w.induced(a1_bar, a2_bar);
  require_survivors(!w3.empty(), "step 2");
  out.steps.push_back({"step2", w3.left().size(), w3.right().size(), w3.edge_count(), p2.exponent, p2.mass,
                       p2.total});

  // Step 3: fiber-graph sizes.
  const Fibering fib = make_fibering(w3, split);
  const Integer mm = out.d.m1 * out.d.m2;
  const double thr3 = to_double(c * delta) * mm.get_d() / (16.0 * L);
  std::vector<Edge> g_edges;
  std::vector<Integer> g_sizes;
  for (const auto& [be, fg] : fib.fibers) {
    if (static_cast<double>(fg.edge_count()) >= thr3) {
      g_edges.push_back(be);
      g_sizes.push_back(big(fg.edge_count()));
    }
  }
  require_survivors(!g_edges.empty(), "step 3");
  const PigeonholeResult p3 = dyadic_pigeonhole(g_sizes);
  Integer min_edges = g_sizes[p3.members.front()];
  std::size_t e3 = 0;
  std::vector<Edge> g_sel;
  for (const auto i : p3.members) {
    g_sel.push_back(g_edges[i]);
    min_edges = std::min(min_edges, g_sizes[i]);
    e3 += g_sizes[i].get_ui();
  }
  out.d.delta2 = make_rational(min_edges, mm);
  out.steps.push_back({"step3", w3.left().size(), w3.right().size(), e3, p3.exponent, p3.mass, p3.total});

  // Step 4: fiber doubling constants.
  const double cutoff = to_double(cfg.C_big) * L * L * L * std::pow(to_double(delta), -10.0) * K.value();
  std::vector<Edge> k_edges;
  std::vector<Integer> k_sums, k_mass;
  std::vector<long> k_exps;
  for (const Edge& be : g_sel) {
    const LatticeGraph& fg = fib.fibers.at(be);
    const std::size_t s = restricted_sumset(fg).size();
    const RootRatio kplus(big(s), big(fg.left().size()) * big(fg.right().size()));
    if (kplus.value() > cutoff) {
      ++out.h_size;
      continue;
    }
    k_edges.push_back(be);
    k_sums.push_back(big(s));
    k_mass.push_back(Integer(1));
    // floor(log2 κ) with κ = s / sqrt(m1·m2), via floor(log2 κ²) / 2.
    k_exps.push_back(floor_div2(floor_log2(make_rational(big(s) * big(s), mm))));
  }
  require_survivors(!k_edges.empty(), "step 4");
  const PigeonholeResult p4 = pigeonhole_by_exponent(k_exps, k_mass);
  Integer min_sum = k_sums[p4.members.front()];
  std::vector<std::pair<LatticePoint, LatticePoint>> gp;
  for (const auto i : p4.members) {
    min_sum = std::min(min_sum, k_sums[i]);
    const Edge& be = k_edges[i];
    const LatticePoint& x = fib.base.left()[be.left];
    const LatticePoint& y = fib.base.right()[be.right];
    const LatticeGraph& fg = fib.fibers.at(be);
    for (const Edge& e : fg.edges()) {
      gp.emplace_back(split.join(x, fg.left()[e.left]), split.join(y, fg.right()[e.right]));
    }
  }
  out.d.K2 = RootRatio(min_sum, mm);
  out.d.refined_left = w3.left();
  out.d.refined_right = w3.right();
  out.d.graph = LatticeGraph::from_pairs(w3.left(), w3.right(), gp);
  out.d.split = split;
  const LatticeGraph base = base_graph(out.d.graph, split);
  out.d.M1 = base.left().size();
  out.d.M2 = base.right().size();
  const Integer MM = big(out.d.M1) * big(out.d.M2);
  out.d.delta1 = make_rational(big(base.edge_count()), MM);
  out.d.K1 = RootRatio(big(restricted_sumset(base).size()), MM);
  out.steps.push_back({"step4", w3.left().size(), w3.right().size(), out.d.graph.edge_count(), p4.exponent,
                       p4.mass, p4.total});
  return out;
}

QuantCheck lower(std::string label, double lhs, double rhs) {
  return {std::move(label), lhs, rhs, lhs >= rhs, false};
}

QuantCheck upper(std::string label, double lhs, double rhs) {
  QuantCheck q{std::move(label), lhs, rhs, lhs <= rhs, true};
  return q;
}

}  // namespace

ConstantsConfig ConstantsConfig::relaxed() {
  ConstantsConfig c;
  c.c_small = Rational(1, 1000);
  c.C_big = Rational(1000);
  return c;
}

void ConstantsConfig::validate() const {
  if (c_small <= 0 || C_big <= 0 || c_small > 1 || C_big < 1) {
    throw Error(ErrorCode::kInvalidArgument, "constants need 0 < c_small <= 1 <= C_big");
  }
}

PigeonholeResult dyadic_pigeonhole(std::span<const Integer> weights) {
  std::vector<Rational> keys;
  keys.reserve(weights.size());
  for (const auto& w : weights) keys.emplace_back(w);
  return dyadic_pigeonhole(keys, weights);
}

PigeonholeResult dyadic_pigeonhole(std::span<const Rational> keys, std::span<const Integer> masses) {
  if (keys.size() != masses.size()) throw Error(ErrorCode::kInvalidArgument, "keys and masses differ in length");
  std::vector<long> exps;
  exps.reserve(keys.size());
  for (const auto& k : keys) {
    if (k <= 0) throw Error(ErrorCode::kInvalidArgument, "dyadic_pigeonhole needs positive weights");
    exps.push_back(floor_log2(k));
  }
  return pigeonhole_by_exponent(exps, masses);
}

SplitChoice choose_split(std::span<const LatticePoint> a1, std::span<const LatticePoint> a2) {
  if (a1.empty() || a2.empty()) throw Error(ErrorCode::kEmptyOperand, "choose_split needs non-empty sets");
  const std::size_t n = a1.front().size();
  if (n == 0 || !uniform_dimension(a1, n) || !uniform_dimension(a2, n)) {
    throw Error(ErrorCode::kInvalidArgument, "choose_split needs a shared dimension n >= 1");
  }
  const std::vector<LatticePoint> s1 = normalize_points({a1.begin(), a1.end()});
  const std::vector<LatticePoint> s2 = normalize_points({a2.begin(), a2.end()});
  SplitChoice out;
  out.n_product = big(s1.size()) * big(s2.size());
  for (std::size_t t = 0; t <= n; ++t) {
    const CoordSplit split = CoordSplit::prefix(t, n);
    out.f.push_back(big(max_fiber(s1, split) + max_fiber(s2, split)));
  }
  // f(t) >= N^(1/4)  <=>  f(t)^4 >= N.
  const auto reaches = [&](std::size_t t) {
    const Integer& f = out.f[t];
    return f * f * f * f >= out.n_product;
  };
  std::size_t t = 0;
  while (t + 1 <= n && reaches(t + 1)) ++t;
  if (t == n) {
    out.t = 0;
    out.degenerate = true;
  } else {
    out.t = t;
  }
  return out;
}

double QuantCheck::slack() const {
  if (upper) return lhs == 0 ? INFINITY : rhs / lhs;
  return rhs == 0 ? INFINITY : lhs / rhs;
}

ConclusionTable verify(const FiberingDecomposition& d) {
  ConclusionTable t;
  const CoordSplit& split = d.split;
  const auto lg = group_by_base(d.refined_left, split);
  const auto rg = group_by_base(d.refined_right, split);

  t.fiber_sizes = lg.size() == d.M1 && rg.size() == d.M2 && d.m1 > 0 && d.m2 > 0;
  for (const auto& [x, idx] : lg) {
    const Integer s = big(idx.size());
    if (s < d.m1 || s > 2 * d.m1) t.fiber_sizes = false;
  }
  for (const auto& [y, idx] : rg) {
    const Integer s = big(idx.size());
    if (s < d.m2 || s > 2 * d.m2) t.fiber_sizes = false;
  }
  if (!t.fiber_sizes) t.failures.push_back("(1) uniform fiber size");

  const Integer MM = big(d.M1) * big(d.M2);
  const Integer mm = d.m1 * d.m2;
  t.graph_fibering = !d.graph.empty() && d.graph.left() == d.refined_left && d.graph.right() == d.refined_right;
  t.bounded_doubling = t.graph_fibering;
  if (t.graph_fibering) {
    const Fibering f = make_fibering(d.graph, split);
    if (Rational(big(f.base.edge_count())) < d.delta1 * MM) t.graph_fibering = false;
    const Integer s = big(restricted_sumset(f.base).size());
    if (f.base.left().size() != d.M1 || f.base.right().size() != d.M2 || d.K1.squared() * MM != Rational(s * s)) {
      t.bounded_doubling = false;
    }
    const Rational k2sq = d.K2.squared() * mm;
    for (const auto& [be, fg] : f.fibers) {
      if (Rational(big(fg.edge_count())) < d.delta2 * mm) t.graph_fibering = false;
      const Integer fs = big(restricted_sumset(fg).size());
      const Rational fs2(fs * fs);
      if (fs2 < k2sq || fs2 > 4 * k2sq) t.bounded_doubling = false;
    }
  }
  if (!t.graph_fibering) t.failures.push_back("(2) uniform graph fibering");
  if (!t.bounded_doubling) t.failures.push_back("(3) bounded doubling");
  return t;
}

FiberingResult fibering_lemma(const LatticeGraph& g, const CoordSplit& split, const ConstantsConfig& cfg) {
  cfg.validate();
  if (g.empty()) throw Error(ErrorCode::kEmptyGraph, "fibering_lemma needs at least one edge");
  if (!uniform_dimension(g.left(), split.dim()) || !uniform_dimension(g.right(), split.dim())) {
    throw Error(ErrorCode::kIndexOutOfRange, "split dimension does not match the vertex dimension");
  }
  FiberingResult res;
  FiberingTrace& tr = res.trace;
  tr.config = cfg;
  tr.N1 = g.left().size();
  tr.N2 = g.right().size();
  tr.edges = g.edge_count();
  tr.delta = g.density();
  tr.K = normalized_doubling(g);
  tr.log_term = guarded_log(tr.K.value() / to_double(tr.delta));
  tr.degenerate_split = split.base().empty() || split.fiber().empty();

  const RegularizedGraph<LatticePoint> reg = cheap_regularize(g);
  tr.steps.push_back(
      {"step0", reg.graph.left().size(), reg.graph.right().size(), reg.graph.edge_count(), std::nullopt, 0, 0});

  LatticeGraph w = reg.graph;
  tr.swapped = cfg.symmetrize && max_fiber(w.right(), split) > max_fiber(w.left(), split);
  std::size_t n1 = tr.N1, n2 = tr.N2;
  if (tr.swapped) {
    w = w.transposed();
    std::swap(n1, n2);
  }
  Oriented o = run_steps(w, split, cfg, n1, n2, tr.edges, tr.delta, tr.K, tr.log_term);
  FiberingDecomposition& d = o.d;
  if (tr.swapped) {
    std::swap(d.refined_left, d.refined_right);
    d.graph = d.graph.transposed();
    std::swap(d.M1, d.M2);
    std::swap(d.m1, d.m2);
    for (auto& s : o.steps) std::swap(s.left, s.right);
  }
  tr.steps.insert(tr.steps.end(), o.steps.begin(), o.steps.end());
  tr.n1 = o.n1;
  tr.h_size = o.h_size;
  tr.step1_mass_ok = o.step1_mass_ok;

  tr.conclusions = verify(d);
  if (!tr.conclusions.all()) throw std::logic_error("fibering_lemma: decomposition failed its own verification");

  const double c = to_double(cfg.c_small), C = to_double(cfg.C_big);
  const double delta = to_double(tr.delta), L = tr.log_term, K = tr.K.value();
  const double fmax = static_cast<double>(max_fiber(g.left(), split) + max_fiber(g.right(), split));
  tr.checks.push_back(lower("M1*m1 >= c*N1*delta^2/log(K/delta)", static_cast<double>(d.M1) * d.m1.get_d(),
                            c * static_cast<double>(tr.N1) * delta * delta / L));
  tr.checks.push_back(lower("M2*m2 >= c*N2*delta^2/log(K/delta)", static_cast<double>(d.M2) * d.m2.get_d(),
                            c * static_cast<double>(tr.N2) * delta * delta / L));
  tr.checks.push_back(lower("min(m1,m2) >= c*delta^10*K^-4*max fiber sum", std::min(d.m1, d.m2).get_d(),
                            c * std::pow(delta, 10.0) * std::pow(K, -4.0) * fmax));
  tr.checks.push_back(lower("delta1*delta2 >= c*delta/log^3(K/delta)", to_double(d.delta1 * d.delta2),
                            c * delta / (L * L * L)));
  tr.checks.push_back(upper("K1*K2 <= C*K*log(K)/delta^2", d.K1.value() * d.K2.value(),
                            C * K * guarded_log(K) / (delta * delta)));
  res.decomposition = std::move(d);
  return res;
}

}  // namespace sumprod
