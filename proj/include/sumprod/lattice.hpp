#pragma once

// Integer points in Z^n and coordinate splits I ∪ J = [n].

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sumprod {

using LatticePoint = std::vector<std::int64_t>;

LatticePoint add(const LatticePoint& a, const LatticePoint& b);
LatticePoint subtract(const LatticePoint& a, const LatticePoint& b);

// Sorts and removes duplicates.
std::vector<LatticePoint> normalize_points(std::vector<LatticePoint> points);

// Every point has the given dimension.
bool uniform_dimension(std::span<const LatticePoint> points, std::size_t dim);

// Partition of [0, dim) into base coordinates I and fiber coordinates J.
class CoordSplit {
 public:
  CoordSplit() = default;
  // `base` lists the coordinates of I; J is the complement. Throws on
  // out-of-range or repeated coordinates.
  CoordSplit(std::vector<std::size_t> base, std::size_t dim);
  // I = {0, ..., t-1}.
  static CoordSplit prefix(std::size_t t, std::size_t dim);

  std::size_t dim() const { return dim_; }
  const std::vector<std::size_t>& base() const { return base_; }
  const std::vector<std::size_t>& fiber() const { return fiber_; }

  LatticePoint project_base(const LatticePoint& p) const;
  LatticePoint project_fiber(const LatticePoint& p) const;
  // x ⊕ x'.
  LatticePoint join(const LatticePoint& base_part, const LatticePoint& fiber_part) const;

  bool operator==(const CoordSplit&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> base_;
  std::vector<std::size_t> fiber_;
};

// π_I(X), sorted and deduplicated.
std::vector<LatticePoint> project_base(std::span<const LatticePoint> points, const CoordSplit& split);

// X(x) = { x' ∈ π_J(X) : x ⊕ x' ∈ X }. Throws kBasePointAbsent when x ∉ π_I(X).
std::vector<LatticePoint> fiber_set(std::span<const LatticePoint> points, const CoordSplit& split,
                                    const LatticePoint& base_point);

// Sums of all pairs, sorted and deduplicated.
std::vector<LatticePoint> point_sumset(std::span<const LatticePoint> a, std::span<const LatticePoint> b);

}  // namespace sumprod
