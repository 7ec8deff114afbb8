#pragma once

// Bipartite graphs G ⊂ X × Y over sorted vertex sequences, with edges stored
// as index pairs into those sequences.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumprod/lattice.hpp"
#include "sumprod/numeric.hpp"

namespace sumprod {

struct Edge {
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  auto operator<=>(const Edge&) const = default;
};

template <class V>
class BiGraph {
 public:
  BiGraph() = default;

  // Vertex sequences must be strictly increasing. Edges are deduplicated;
  // an index outside either side throws kDanglingEdge.
  BiGraph(std::vector<V> left, std::vector<V> right, std::vector<Edge> edges)
      : left_(std::move(left)), right_(std::move(right)), edges_(std::move(edges)) {
    require_strictly_increasing(left_, "left");
    require_strictly_increasing(right_, "right");
    for (const Edge& e : edges_) {
      if (e.left >= left_.size() || e.right >= right_.size()) {
        throw Error(ErrorCode::kDanglingEdge, "edge index outside vertex set");
      }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  static BiGraph complete(std::vector<V> left, std::vector<V> right) {
    std::vector<Edge> edges;
    edges.reserve(left.size() * right.size());
    for (std::uint32_t i = 0; i < left.size(); ++i) {
      for (std::uint32_t j = 0; j < right.size(); ++j) edges.push_back({i, j});
    }
    return BiGraph(std::move(left), std::move(right), std::move(edges));
  }

  // Edges given by vertex values; a value missing from its side throws kDanglingEdge.
  static BiGraph from_pairs(std::vector<V> left, std::vector<V> right,
                            const std::vector<std::pair<V, V>>& pairs) {
    BiGraph shell(std::move(left), std::move(right), {});
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (const auto& [u, v] : pairs) {
      const auto i = shell.left_index(u);
      const auto j = shell.right_index(v);
      if (!i || !j) throw Error(ErrorCode::kDanglingEdge, "edge endpoint is not a vertex");
      edges.push_back({*i, *j});
    }
    return BiGraph(std::move(shell.left_), std::move(shell.right_), std::move(edges));
  }

  const std::vector<V>& left() const { return left_; }
  const std::vector<V>& right() const { return right_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  // |E| / (|X||Y|).
  Rational density() const {
    if (left_.empty() || right_.empty()) return Rational(0);
    return make_rational(Integer(static_cast<unsigned long>(edges_.size())),
                         Integer(static_cast<unsigned long>(left_.size())) *
                             Integer(static_cast<unsigned long>(right_.size())));
  }

  std::optional<std::uint32_t> left_index(const V& v) const { return find(left_, v); }
  std::optional<std::uint32_t> right_index(const V& v) const { return find(right_, v); }

  bool has_edge(std::uint32_t i, std::uint32_t j) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
  }

  std::vector<std::size_t> left_degrees() const {
    std::vector<std::size_t> deg(left_.size(), 0);
    for (const Edge& e : edges_) ++deg[e.left];
    return deg;
  }

  std::vector<std::size_t> right_degrees() const {
    std::vector<std::size_t> deg(right_.size(), 0);
    for (const Edge& e : edges_) ++deg[e.right];
    return deg;
  }

  // N(x) for a left vertex; edges are sorted by left index so this is a range.
  std::vector<std::uint32_t> left_neighbors(std::uint32_t i) const {
    auto lo = std::lower_bound(edges_.begin(), edges_.end(), Edge{i, 0});
    std::vector<std::uint32_t> out;
    for (; lo != edges_.end() && lo->left == i; ++lo) out.push_back(lo->right);
    return out;
  }

  std::vector<std::uint32_t> right_neighbors(std::uint32_t j) const {
    std::vector<std::uint32_t> out;
    for (const Edge& e : edges_) {
      if (e.right == j) out.push_back(e.left);
    }
    return out;
  }

  BiGraph transposed() const {
    std::vector<Edge> edges;
    edges.reserve(edges_.size());
    for (const Edge& e : edges_) edges.push_back({e.right, e.left});
    return BiGraph(right_, left_, std::move(edges));
  }

  // Subgraph induced on the flagged vertices, re-indexed.
  BiGraph induced(const std::vector<bool>& keep_left, const std::vector<bool>& keep_right) const {
    std::vector<std::uint32_t> lmap(left_.size(), kNone), rmap(right_.size(), kNone);
    std::vector<V> nl, nr;
    for (std::uint32_t i = 0; i < left_.size(); ++i) {
      if (keep_left[i]) {
        lmap[i] = static_cast<std::uint32_t>(nl.size());
        nl.push_back(left_[i]);
      }
    }
    for (std::uint32_t j = 0; j < right_.size(); ++j) {
      if (keep_right[j]) {
        rmap[j] = static_cast<std::uint32_t>(nr.size());
        nr.push_back(right_[j]);
      }
    }
    std::vector<Edge> edges;
    for (const Edge& e : edges_) {
      if (lmap[e.left] != kNone && rmap[e.right] != kNone) edges.push_back({lmap[e.left], rmap[e.right]});
    }
    return BiGraph(std::move(nl), std::move(nr), std::move(edges));
  }

  // Same vertex sets, only the flagged edges.
  BiGraph with_edges(std::vector<Edge> edges) const { return BiGraph(left_, right_, std::move(edges)); }

  bool operator==(const BiGraph&) const = default;

 private:
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};

  static void require_strictly_increasing(const std::vector<V>& side, const char* name) {
    for (std::size_t i = 1; i < side.size(); ++i) {
      if (!(side[i - 1] < side[i])) {
        throw Error(ErrorCode::kInvalidArgument, std::string(name) + " vertices must be strictly increasing");
      }
    }
  }

  static std::optional<std::uint32_t> find(const std::vector<V>& side, const V& v) {
    auto it = std::lower_bound(side.begin(), side.end(), v);
    if (it == side.end() || !(*it == v)) return std::nullopt;
    return static_cast<std::uint32_t>(it - side.begin());
  }

  std::vector<V> left_;
  std::vector<V> right_;
  std::vector<Edge> edges_;
};

using IntGraph = BiGraph<Integer>;
using LatticeGraph = BiGraph<LatticePoint>;

// The five conclusions of the cheap-regularity lemma, each checked exactly.
struct RegularityCheck {
  bool left_min_degree = false;   // deg(x) >= (δ/4)|Y|
  bool right_min_degree = false;  // deg(y) >= (δ/4)|X|
  bool left_size = false;         // |X'| >= (δ/2)|X|
  bool right_size = false;        // |Y'| >= (δ/2)|Y|
  bool edge_count = false;        // |G'| >= (δ/2)|X||Y|
  bool all() const { return left_min_degree && right_min_degree && left_size && right_size && edge_count; }
};

template <class V>
struct RegularizedGraph {
  BiGraph<V> graph;                       // induced on the survivors
  std::vector<std::uint32_t> kept_left;   // indices into the original left side
  std::vector<std::uint32_t> kept_right;  // indices into the original right side
  Rational input_density;
  std::size_t original_left = 0;
  std::size_t original_right = 0;
  std::size_t original_edges = 0;
  std::size_t passes = 0;

  RegularityCheck check() const {
    // With δ = |E|/(|X||Y|) every threshold clears denominators to integers.
    const Integer E(static_cast<unsigned long>(original_edges));
    const Integer X(static_cast<unsigned long>(original_left));
    const Integer Y(static_cast<unsigned long>(original_right));
    RegularityCheck c;
    c.left_min_degree = true;
    c.right_min_degree = true;
    for (const std::size_t d : graph.left_degrees()) {
      if (4 * Integer(static_cast<unsigned long>(d)) * X < E) c.left_min_degree = false;
    }
    for (const std::size_t d : graph.right_degrees()) {
      if (4 * Integer(static_cast<unsigned long>(d)) * Y < E) c.right_min_degree = false;
    }
    c.left_size = 2 * Integer(static_cast<unsigned long>(graph.left().size())) * Y >= E;
    c.right_size = 2 * Integer(static_cast<unsigned long>(graph.right().size())) * X >= E;
    c.edge_count = 2 * Integer(static_cast<unsigned long>(graph.edge_count())) >= E;
    return c;
  }
};

// Removes under-degree vertices one at a time (left side in sorted order, then
// right side, repeated to a fixed point). Throws kEmptyGraph on an edgeless
// input; a violated conclusion is a logic error.
template <class V>
RegularizedGraph<V> cheap_regularize(const BiGraph<V>& g) {
  if (g.empty()) throw Error(ErrorCode::kEmptyGraph, "cheap_regularize needs at least one edge");
  const std::size_t nl = g.left().size(), nr = g.right().size();
  const unsigned long E = g.edge_count();

  std::vector<std::vector<std::uint32_t>> ladj(nl), radj(nr);
  for (const Edge& e : g.edges()) {
    ladj[e.left].push_back(e.right);
    radj[e.right].push_back(e.left);
  }
  std::vector<std::size_t> ldeg(nl), rdeg(nr);
  for (std::size_t i = 0; i < nl; ++i) ldeg[i] = ladj[i].size();
  for (std::size_t j = 0; j < nr; ++j) rdeg[j] = radj[j].size();
  std::vector<bool> lalive(nl, true), ralive(nr, true);

  // deg < (δ/4)|Y|  <=>  4·deg·|X| < |E|, and symmetrically on the right.
  const auto left_low = [&](std::size_t d) { return 4 * Integer(static_cast<unsigned long>(d)) * static_cast<unsigned long>(nl) < E; };
  const auto right_low = [&](std::size_t d) { return 4 * Integer(static_cast<unsigned long>(d)) * static_cast<unsigned long>(nr) < E; };

  std::size_t passes = 0;
  for (bool changed = true; changed;) {
    changed = false;
    ++passes;
    for (std::size_t i = 0; i < nl; ++i) {
      if (lalive[i] && left_low(ldeg[i])) {
        lalive[i] = false;
        changed = true;
        for (const auto j : ladj[i]) {
          if (ralive[j]) --rdeg[j];
        }
      }
    }
    for (std::size_t j = 0; j < nr; ++j) {
      if (ralive[j] && right_low(rdeg[j])) {
        ralive[j] = false;
        changed = true;
        for (const auto i : radj[j]) {
          if (lalive[i]) --ldeg[i];
        }
      }
    }
  }

  RegularizedGraph<V> out;
  out.graph = g.induced(lalive, ralive);
  for (std::uint32_t i = 0; i < nl; ++i) {
    if (lalive[i]) out.kept_left.push_back(i);
  }
  for (std::uint32_t j = 0; j < nr; ++j) {
    if (ralive[j]) out.kept_right.push_back(j);
  }
  out.input_density = g.density();
  out.original_left = nl;
  out.original_right = nr;
  out.original_edges = E;
  out.passes = passes;
  if (out.graph.empty() || !out.check().all()) {
    throw std::logic_error("cheap_regularize: regularity conclusions violated");
  }
  return out;
}

// Sums along the edges of G, sorted and deduplicated.
std::vector<LatticePoint> restricted_sumset(const LatticeGraph& g);

// |X +_G Y| / sqrt(|X||Y|).
RootRatio normalized_doubling(const LatticeGraph& g);

// G_I = {(π_I(u), π_I(v)) : (u, v) ∈ G}.
LatticeGraph base_graph(const LatticeGraph& g, const CoordSplit& split);

// G_{x,y} = {(x', y') : (x ⊕ x', y ⊕ y') ∈ G}, over X(x) × Y(y).
// Throws kBasePointAbsent when (x, y) is not an edge of the base graph.
LatticeGraph fiber_graph(const LatticeGraph& g, const CoordSplit& split, const LatticePoint& x,
                         const LatticePoint& y);

// The natural fibering: base graph plus one fiber graph per base edge.
struct Fibering {
  CoordSplit split;
  LatticeGraph base;
  std::map<Edge, LatticeGraph> fibers;  // keyed by base-graph edge
};

Fibering make_fibering(const LatticeGraph& g, const CoordSplit& split);

// {(x ⊕ x', y ⊕ y') : (x, y) ∈ base, (x', y') ∈ fibers(x, y)} as value pairs, sorted.
std::vector<std::pair<LatticePoint, LatticePoint>> reassemble(const Fibering& f);

std::vector<std::pair<LatticePoint, LatticePoint>> edge_values(const LatticeGraph& g);

}  // namespace sumprod
