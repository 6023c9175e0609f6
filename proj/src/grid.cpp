#include "rtd/grid.hpp"

#include <algorithm>
#include <cmath>

namespace rtd {

GridSpec::GridSpec(double origin, double side) : origin_(origin), side_(side) {
  if (!(side > 0.0) || !std::isfinite(side)) throw DomainError("grid side must be positive");
  if (!(origin >= 0.0 && origin < side)) throw DomainError("grid origin must lie in [0, side)");
}

double GridSpec::left(std::int64_t j) const { return origin_ + static_cast<double>(j) * side_; }

std::int64_t GridSpec::first_index() const { return origin_ > 0.0 ? -1 : 0; }

std::int64_t GridSpec::last_index() const {
  auto j = static_cast<std::int64_t>(std::ceil((1.0 - origin_) / side_)) - 1;
  while (left(j + 1) < 1.0) ++j;
  while (j > first_index() && left(j) >= 1.0) --j;
  return j;
}

Interval GridSpec::box(std::int64_t j) const {
  return Interval::half_open(std::max(left(j), 0.0), std::min(left(j + 1), 1.0));
}

Interval GridSpec::enlarged(std::int64_t j) const {
  return Interval::half_open(std::max(left(j - 1), 0.0), std::min(left(j + 2), 1.0));
}

std::int64_t GridSpec::index_of(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("grid point outside [0,1]");
  const std::int64_t lo = first_index();
  const std::int64_t hi = last_index();
  auto j = static_cast<std::int64_t>(std::floor((x - origin_) / side_));
  j = std::clamp(j, lo, hi);
  while (j > lo && x < left(j)) --j;
  while (j < hi && x >= left(j + 1)) ++j;
  return j;
}

bool GridSpec::on_boundary(double x) const {
  const std::int64_t j = index_of(x);
  return x > 0.0 && x < 1.0 && x == left(j);
}

std::vector<GridSpec> GridSpec::shifted_triple() const {
  std::vector<GridSpec> out;
  for (int l = 0; l < 3; ++l) out.emplace_back(origin_ + l * side_, 3.0 * side_);
  return out;
}

std::optional<unsigned> GridSpec::dyadic_level(unsigned max_level) const {
  for (unsigned n = 0; n <= max_level; ++n) {
    const double o = std::ldexp(origin_, static_cast<int>(n));
    const double s = std::ldexp(side_, static_cast<int>(n));
    if (o == std::floor(o) && s == std::floor(s)) return n;
  }
  return std::nullopt;
}

}  // namespace rtd
