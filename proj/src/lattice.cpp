#include "sumprod/lattice.hpp"

#include <algorithm>

#include "sumprod/numeric.hpp"

namespace sumprod {

LatticePoint add(const LatticePoint& a, const LatticePoint& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kInvalidArgument, "dimension mismatch in point sum");
  LatticePoint out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

LatticePoint subtract(const LatticePoint& a, const LatticePoint& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kInvalidArgument, "dimension mismatch in point difference");
  LatticePoint out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

std::vector<LatticePoint> normalize_points(std::vector<LatticePoint> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

bool uniform_dimension(std::span<const LatticePoint> points, std::size_t dim) {
  return std::all_of(points.begin(), points.end(), [dim](const LatticePoint& p) { return p.size() == dim; });
}

CoordSplit::CoordSplit(std::vector<std::size_t> base, std::size_t dim) : dim_(dim), base_(std::move(base)) {
  std::sort(base_.begin(), base_.end());
  if (std::adjacent_find(base_.begin(), base_.end()) != base_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "repeated coordinate in split");
  }
  if (!base_.empty() && base_.back() >= dim_) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "coordinate " + std::to_string(base_.back()) + " outside dimension " + std::to_string(dim_));
  }
  for (std::size_t i = 0, b = 0; i < dim_; ++i) {
    if (b < base_.size() && base_[b] == i) {
      ++b;
    } else {
      fiber_.push_back(i);
    }
  }
}

CoordSplit CoordSplit::prefix(std::size_t t, std::size_t dim) {
  if (t > dim) throw Error(ErrorCode::kIndexOutOfRange, "prefix longer than dimension");
  std::vector<std::size_t> base(t);
  for (std::size_t i = 0; i < t; ++i) base[i] = i;
  return CoordSplit(std::move(base), dim);
}

namespace {

LatticePoint pick(const LatticePoint& p, const std::vector<std::size_t>& coords, std::size_t dim) {
  if (p.size() != dim) throw Error(ErrorCode::kInvalidArgument, "point dimension does not match split");
  LatticePoint out;
  out.reserve(coords.size());
  for (const std::size_t c : coords) out.push_back(p[c]);
  return out;
}

}  // namespace

LatticePoint CoordSplit::project_base(const LatticePoint& p) const { return pick(p, base_, dim_); }

LatticePoint CoordSplit::project_fiber(const LatticePoint& p) const { return pick(p, fiber_, dim_); }

LatticePoint CoordSplit::join(const LatticePoint& base_part, const LatticePoint& fiber_part) const {
  if (base_part.size() != base_.size() || fiber_part.size() != fiber_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "join: part sizes do not match split");
  }
  LatticePoint out(dim_);
  for (std::size_t i = 0; i < base_.size(); ++i) out[base_[i]] = base_part[i];
  for (std::size_t i = 0; i < fiber_.size(); ++i) out[fiber_[i]] = fiber_part[i];
  return out;
}

std::vector<LatticePoint> project_base(std::span<const LatticePoint> points, const CoordSplit& split) {
  std::vector<LatticePoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(split.project_base(p));
  return normalize_points(std::move(out));
}

std::vector<LatticePoint> fiber_set(std::span<const LatticePoint> points, const CoordSplit& split,
                                    const LatticePoint& base_point) {
  std::vector<LatticePoint> out;
  for (const auto& p : points) {
    if (split.project_base(p) == base_point) out.push_back(split.project_fiber(p));
  }
  if (out.empty()) throw Error(ErrorCode::kBasePointAbsent, "base point has an empty fiber");
  return normalize_points(std::move(out));
}

std::vector<LatticePoint> point_sumset(std::span<const LatticePoint> a, std::span<const LatticePoint> b) {
  std::vector<LatticePoint> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(add(x, y));
  }
  return normalize_points(std::move(out));
}

}  // namespace sumprod
