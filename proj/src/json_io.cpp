#include "sumprod/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace sumprod {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::kParse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <class V, class Conv>
BiGraph<V> graph_from(const Json& j, Conv conv) {
  std::vector<V> left, right;
  for (const Json& v : field(j, "left")) left.push_back(conv(v));
  for (const Json& v : field(j, "right")) right.push_back(conv(v));
  // Accept sides in any order: re-index onto the sorted sequences.
  std::vector<std::pair<V, V>> pairs;
  for (const Json& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) parse_error("edge must be a pair of indices");
    const auto i = e[0].get<long long>(), k = e[1].get<long long>();
    if (i < 0 || k < 0 || std::size_t(i) >= left.size() || std::size_t(k) >= right.size()) {
      throw Error(ErrorCode::kDanglingEdge, "edge index outside vertex set");
    }
    pairs.emplace_back(left[std::size_t(i)], right[std::size_t(k)]);
  }
  const auto canon = [](std::vector<V> v) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) parse_error("repeated vertex in graph side");
    return v;
  };
  return BiGraph<V>::from_pairs(canon(std::move(left)), canon(std::move(right)), pairs);
}

template <class V, class Conv>
Json graph_to(const BiGraph<V>& g, Conv conv) {
  Json left = Json::array(), right = Json::array(), edges = Json::array();
  for (const V& v : g.left()) left.push_back(conv(v));
  for (const V& v : g.right()) right.push_back(conv(v));
  for (const Edge& e : g.edges()) edges.push_back({e.left, e.right});
  return {{"left", left}, {"right", right}, {"edges", edges}};
}

Json points_to_json(const std::vector<LatticePoint>& pts) {
  Json out = Json::array();
  for (const LatticePoint& p : pts) out.push_back(to_json(p));
  return out;
}

double number_or(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) parse_error(std::string("field \"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

}  // namespace

Json to_json(const Integer& z) {
  if (fits_int64(z)) return Json(to_int64(z));
  return Json(z.get_str());
}

Json to_json(const Rational& q) { return Json(to_string(q)); }

Json to_json(const RootRatio& r) {
  Json j = {{"numerator", to_json(r.numerator())}, {"radicand", to_json(r.radicand())},
            {"value", r.value()}, {"text", r.to_string()}};
  if (auto e = r.exact()) j["exact"] = to_json(*e);
  return j;
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(std::to_string(j.get<std::uint64_t>()))
                                                           : Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (std::floor(d) != d || std::abs(d) > 9e15) parse_error("non-integral number where an integer was expected");
    return Integer(std::to_string(static_cast<long long>(d)));
  }
  if (j.is_string()) return parse_integer(j.get<std::string>());
  parse_error("expected an integer");
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(integer_from_json(j));
  if (j.is_number_float()) {
    Rational q(j.get<double>());
    return q;
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  parse_error("expected a rational");
}

Json to_json(const IntSet& s) {
  Json out = Json::array();
  for (const Integer& x : s) out.push_back(to_json(x));
  return out;
}

IntSet intset_from_json(const Json& j) {
  if (!j.is_array()) parse_error("a set must be a JSON array");
  std::vector<Integer> v;
  v.reserve(j.size());
  for (const Json& x : j) v.push_back(integer_from_json(x));
  return IntSet(std::move(v));
}

Json to_json(const LatticePoint& p) { return Json(p); }

LatticePoint point_from_json(const Json& j) {
  if (!j.is_array()) parse_error("a lattice point must be an array");
  LatticePoint p;
  for (const Json& x : j) {
    if (!x.is_number_integer()) parse_error("lattice coordinates must be integers");
    p.push_back(x.get<std::int64_t>());
  }
  return p;
}

Json to_json(const IntGraph& g) {
  return graph_to(g, [](const Integer& z) { return to_json(z); });
}

IntGraph int_graph_from_json(const Json& j) { return graph_from<Integer>(j, integer_from_json); }

Json to_json(const LatticeGraph& g) { return graph_to(g, [](const LatticePoint& p) { return to_json(p); }); }

LatticeGraph lattice_graph_from_json(const Json& j) { return graph_from<LatticePoint>(j, point_from_json); }

Json to_json(const LatticeSet& s) {
  Json primes = Json::array();
  for (const Integer& p : s.index.primes()) primes.push_back(to_json(p));
  return {{"primes", primes}, {"vectors", points_to_json(s.vectors)}, {"source", to_json(s.source)}};
}

Json to_json(const SlicedFamily& f) {
  Json slices = Json::object();
  for (const auto& [a, xs] : f.slices) slices[a.get_str()] = to_json(xs);
  return {{"coefficients", to_json(f.coefficients)}, {"slices", slices}};
}

SlicedFamily family_from_json(const Json& j) {
  SlicedFamily f;
  f.coefficients = intset_from_json(field(j, "coefficients"));
  const Json& slices = field(j, "slices");
  if (!slices.is_object()) parse_error("\"slices\" must be an object keyed by coefficient");
  for (const auto& [key, value] : slices.items()) f.slices[parse_integer(key)] = intset_from_json(value);
  return f;
}

Json to_json(const ConclusionTable& t) {
  return {{"(1)", t.fiber_sizes}, {"(2)", t.graph_fibering}, {"(3)", t.bounded_doubling},
          {"failures", t.failures}, {"pass", t.all()}};
}

Json to_json(const FiberingDecomposition& d) {
  return {{"refined_left", points_to_json(d.refined_left)},
          {"refined_right", points_to_json(d.refined_right)},
          {"graph", to_json(d.graph)},
          {"split", {{"base", d.split.base()}, {"fiber", d.split.fiber()}, {"dim", d.split.dim()}}},
          {"M1", d.M1},
          {"M2", d.M2},
          {"m1", to_json(d.m1)},
          {"m2", to_json(d.m2)},
          {"delta1", to_json(d.delta1)},
          {"delta2", to_json(d.delta2)},
          {"K1", to_json(d.K1)},
          {"K2", to_json(d.K2)}};
}

Json to_json(const FiberingTrace& t) {
  Json steps = Json::array();
  for (const StepRecord& s : t.steps) {
    Json js = {{"name", s.name}, {"left", s.left},          {"right", s.right},
               {"edges", s.edges}, {"mass", to_json(s.mass)}, {"total", to_json(s.total)}};
    js["bucket"] = s.bucket ? Json(*s.bucket) : Json(nullptr);
    steps.push_back(js);
  }
  Json checks = Json::array();
  for (const QuantCheck& c : t.checks) {
    checks.push_back({{"label", c.label}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"upper", c.upper},
                      {"pass", c.pass}, {"slack", c.slack()}});
  }
  return {{"constants", to_json(t.config)},
          {"N1", t.N1},
          {"N2", t.N2},
          {"edges", t.edges},
          {"delta", to_json(t.delta)},
          {"K", to_json(t.K)},
          {"log_term", t.log_term},
          {"swapped", t.swapped},
          {"degenerate_split", t.degenerate_split},
          {"n1", t.n1},
          {"h_size", t.h_size},
          {"step1_mass_ok", t.step1_mass_ok},
          {"steps", steps},
          {"conclusions", to_json(t.conclusions)},
          {"checks", checks}};
}

Json to_json(const PairValue& v) {
  return {{"formula", to_string(v.formula)}, {"log_psi", v.log_psi}, {"log_phi", v.log_phi},
          {"psi", format_double(v.psi())},    {"phi", format_double(v.phi())}};
}

Json to_json(const LogTriple& t) {
  return {{"log_N", t.log_N}, {"log_delta", t.log_delta}, {"log_K", t.log_K}};
}

Json to_json(const TreeResult& t) {
  Json nodes = Json::array();
  for (const TreeNode& n : t.nodes) {
    Json jn = {{"index", n.index}, {"level", n.level}, {"data", to_json(n.data)}};
    if (n.child0) jn["children"] = {*n.child0, *n.child1};
    nodes.push_back(jn);
  }
  Json levels = Json::array();
  for (const LevelCheck& c : t.levels) {
    levels.push_back({{"level", c.level},
                      {"nodes", c.nodes},
                      {"max_log_ratio", c.max_log_ratio},
                      {"ratio_bound", c.ratio_bound},
                      {"sum_log_delta", c.sum_log_delta},
                      {"delta_bound", c.delta_bound},
                      {"sum_log_K", c.sum_log_K},
                      {"K_bound", c.K_bound},
                      {"sum_log_N", c.sum_log_N},
                      {"N_bound", c.N_bound},
                      {"pass", c.all()}});
  }
  return {{"nodes", nodes},
          {"levels", levels},
          {"leaf_log_phi", t.leaf_log_phi},
          {"leaf_log_psi", t.leaf_log_psi},
          {"closed_form", to_json(t.closed_form)},
          {"phi_dominates_closed_form", t.phi_dominates_closed_form},
          {"psi_within_closed_form", t.psi_within_closed_form},
          {"bounds_ok", t.bounds_ok()}};
}

std::string tree_levels_csv(const TreeResult& t) {
  std::ostringstream out;
  out << "level,nodes,max_log_ratio,ratio_bound,ratio_slack,sum_log_delta,delta_bound,delta_slack,"
         "sum_log_K,K_bound,K_slack,sum_log_N,N_bound,N_slack,pass\n";
  for (const LevelCheck& c : t.levels) {
    out << c.level << ',' << c.nodes << ',' << format_double(c.max_log_ratio) << ','
        << format_double(c.ratio_bound) << ',' << format_double(c.ratio_bound - c.max_log_ratio) << ','
        << format_double(c.sum_log_delta) << ',' << format_double(c.delta_bound) << ','
        << format_double(c.sum_log_delta - c.delta_bound) << ',' << format_double(c.sum_log_K) << ','
        << format_double(c.K_bound) << ',' << format_double(c.K_bound - c.sum_log_K) << ','
        << format_double(c.sum_log_N) << ',' << format_double(c.N_bound) << ','
        << format_double(c.sum_log_N - c.N_bound) << ',' << (c.all() ? "true" : "false") << '\n';
  }
  return out.str();
}

Json to_json(const ConstantsConfig& c) {
  return {{"c_small", to_json(c.c_small)}, {"C_big", to_json(c.C_big)}, {"symmetrize", c.symmetrize}};
}

ConstantsConfig constants_from_json(const Json& j) {
  ConstantsConfig c;
  if (j.contains("c_small")) c.c_small = rational_from_json(j["c_small"]);
  if (j.contains("C_big")) c.C_big = rational_from_json(j["C_big"]);
  if (j.contains("symmetrize")) c.symmetrize = j["symmetrize"].get<bool>();
  c.validate();
  return c;
}

Json to_json(const StrongPairConstants& k) {
  return {{"tau", k.tau}, {"gamma", k.gamma}, {"A1", k.A1}, {"A2", k.A2}, {"A3", k.A3},    {"B1", k.B1},
          {"B2", k.B2},   {"B3", k.B3},       {"Nbar", k.Nbar}, {"better_C", k.better_C}};
}

StrongPairConstants strong_constants_from_json(const Json& j) {
  StrongPairConstants k;
  k.tau = number_or(j, "tau", k.tau);
  k.gamma = number_or(j, "gamma", k.gamma);
  k.A1 = number_or(j, "A1", k.A1);
  k.A2 = number_or(j, "A2", k.A2);
  k.A3 = number_or(j, "A3", k.A3);
  k.B1 = number_or(j, "B1", k.B1);
  k.B2 = number_or(j, "B2", k.B2);
  k.B3 = number_or(j, "B3", k.B3);
  k.Nbar = number_or(j, "Nbar", k.Nbar);
  k.better_C = number_or(j, "better_C", k.better_C);
  k.validate();
  return k;
}

Json to_json(const InductionConstants& k) { return {{"C", k.C}, {"c", k.c}, {"grid", k.grid}}; }

InductionConstants induction_constants_from_json(const Json& j) {
  InductionConstants k;
  k.C = number_or(j, "C", k.C);
  k.c = number_or(j, "c", k.c);
  if (j.contains("grid")) k.grid = j["grid"].get<std::size_t>();
  return k;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace sumprod
