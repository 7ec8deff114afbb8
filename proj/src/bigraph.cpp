#include "sumprod/bigraph.hpp"

#include <algorithm>

namespace sumprod {

namespace {

void require_dim(const LatticeGraph& g, const CoordSplit& split) {
  if (!uniform_dimension(g.left(), split.dim()) || !uniform_dimension(g.right(), split.dim())) {
    throw Error(ErrorCode::kIndexOutOfRange, "split dimension does not match the vertex dimension");
  }
}

std::uint32_t index_in(const std::vector<LatticePoint>& side, const LatticePoint& p) {
  return static_cast<std::uint32_t>(std::lower_bound(side.begin(), side.end(), p) - side.begin());
}

}  // namespace

std::vector<LatticePoint> restricted_sumset(const LatticeGraph& g) {
  std::vector<LatticePoint> out;
  out.reserve(g.edge_count());
  for (const Edge& e : g.edges()) out.push_back(add(g.left()[e.left], g.right()[e.right]));
  return normalize_points(std::move(out));
}

RootRatio normalized_doubling(const LatticeGraph& g) {
  if (g.left().empty() || g.right().empty()) throw Error(ErrorCode::kEmptyGraph, "doubling of an empty vertex set");
  return RootRatio(Integer(static_cast<unsigned long>(restricted_sumset(g).size())),
                   Integer(static_cast<unsigned long>(g.left().size())) * static_cast<unsigned long>(g.right().size()));
}

LatticeGraph base_graph(const LatticeGraph& g, const CoordSplit& split) {
  require_dim(g, split);
  auto left = project_base(g.left(), split);
  auto right = project_base(g.right(), split);
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    edges.push_back({index_in(left, split.project_base(g.left()[e.left])),
                     index_in(right, split.project_base(g.right()[e.right]))});
  }
  return LatticeGraph(std::move(left), std::move(right), std::move(edges));
}

LatticeGraph fiber_graph(const LatticeGraph& g, const CoordSplit& split, const LatticePoint& x,
                         const LatticePoint& y) {
  require_dim(g, split);
  std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
  for (const Edge& e : g.edges()) {
    const LatticePoint& u = g.left()[e.left];
    const LatticePoint& v = g.right()[e.right];
    if (split.project_base(u) == x && split.project_base(v) == y) {
      pairs.emplace_back(split.project_fiber(u), split.project_fiber(v));
    }
  }
  if (pairs.empty()) throw Error(ErrorCode::kBasePointAbsent, "(x, y) is not an edge of the base graph");
  return LatticeGraph::from_pairs(fiber_set(g.left(), split, x), fiber_set(g.right(), split, y), pairs);
}

Fibering make_fibering(const LatticeGraph& g, const CoordSplit& split) {
  Fibering f;
  f.split = split;
  f.base = base_graph(g, split);
  const auto& bl = f.base.left();
  const auto& br = f.base.right();

  // Fiber sets per base point, and grouped edges per base edge, in one pass each.
  std::vector<std::vector<LatticePoint>> lfib(bl.size()), rfib(br.size());
  std::vector<std::uint32_t> lbase(g.left().size()), rbase(g.right().size());
  for (std::size_t i = 0; i < g.left().size(); ++i) {
    lbase[i] = index_in(bl, split.project_base(g.left()[i]));
    lfib[lbase[i]].push_back(split.project_fiber(g.left()[i]));
  }
  for (std::size_t j = 0; j < g.right().size(); ++j) {
    rbase[j] = index_in(br, split.project_base(g.right()[j]));
    rfib[rbase[j]].push_back(split.project_fiber(g.right()[j]));
  }
  for (auto& v : lfib) v = normalize_points(std::move(v));
  for (auto& v : rfib) v = normalize_points(std::move(v));

  std::map<Edge, std::vector<Edge>> grouped;
  for (const Edge& e : g.edges()) {
    const std::uint32_t bx = lbase[e.left], by = rbase[e.right];
    grouped[Edge{bx, by}].push_back({index_in(lfib[bx], split.project_fiber(g.left()[e.left])),
                                     index_in(rfib[by], split.project_fiber(g.right()[e.right]))});
  }
  for (auto& [be, edges] : grouped) {
    f.fibers.emplace(be, LatticeGraph(lfib[be.left], rfib[be.right], std::move(edges)));
  }
  return f;
}

std::vector<std::pair<LatticePoint, LatticePoint>> reassemble(const Fibering& f) {
  std::vector<std::pair<LatticePoint, LatticePoint>> out;
  for (const auto& [be, fg] : f.fibers) {
    const LatticePoint& x = f.base.left()[be.left];
    const LatticePoint& y = f.base.right()[be.right];
    for (const Edge& e : fg.edges()) {
      out.emplace_back(f.split.join(x, fg.left()[e.left]), f.split.join(y, fg.right()[e.right]));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<LatticePoint, LatticePoint>> edge_values(const LatticeGraph& g) {
  std::vector<std::pair<LatticePoint, LatticePoint>> out;
  out.reserve(g.edge_count());
  for (const Edge& e : g.edges()) out.emplace_back(g.left()[e.left], g.right()[e.right]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sumprod
