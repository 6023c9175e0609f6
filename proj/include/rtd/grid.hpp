#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rtd/types.hpp"

namespace rtd {

// 1-D box lattice: A_j = [theta + j eps, theta + (j+1) eps) intersected with
// [0,1]. With theta > 0 the leftmost box is A_{-1} = [0, theta).
class GridSpec {
 public:
  // A_{j(x)} is contained in the ball B_{k eps}(x): k = 1 for plain boxes
  static constexpr double kBoxBallMultiplier = 1.0;
  // B_eps(x) is inside the enlarged box, which is inside B_{k eps}(x): k = 2
  static constexpr double kEnlargedBallMultiplier = 2.0;

  GridSpec(double origin, double side);

  double origin() const { return origin_; }
  double side() const { return side_; }

  std::int64_t first_index() const;
  std::int64_t last_index() const;
  std::uint64_t box_count() const { return static_cast<std::uint64_t>(last_index() - first_index() + 1); }

  Interval box(std::int64_t j) const;
  // A_{j-1} u A_j u A_{j+1}, clipped to [0,1]
  Interval enlarged(std::int64_t j) const;
  std::int64_t index_of(double x) const;
  // true when x sits exactly on a box boundary
  bool on_boundary(double x) const;

  // the three shifted grids theta + l eps (l = 0,1,2) of side 3 eps
  std::vector<GridSpec> shifted_triple() const;

  // smallest n with origin and side both multiples of 2^-n (n <= max_level)
  std::optional<unsigned> dyadic_level(unsigned max_level = 40) const;

 private:
  double left(std::int64_t j) const;
  double origin_;
  double side_;
};

}  // namespace rtd
