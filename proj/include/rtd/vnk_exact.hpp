#pragma once

// Exact return-time laws for the von Neumann-Kakutani map. In odometer
// coordinates (binary digits read least-significant-first) the map is x -> x+1,
// so first entries into dyadic blocks reduce to modular arithmetic.

#include <cstdint>
#include <map>

#include "rtd/grid.hpp"
#include "rtd/kernels.hpp"
#include "rtd/recurrence.hpp"

namespace rtd {

enum class BoxKind { kPlain, kEnlarged };

// Law of tau_{A(x)}(x) (or of the enlarged box) for x ~ Lebesgue, on a grid
// whose origin and side are multiples of 2^-n with n <= 24.
ReturnDistribution vnk_grid_return_distribution(const GridSpec& grid, BoxKind kind);

// Law of tau_{B_eps(x)}(x) for x ~ Lebesgue, by adaptive refinement of dyadic
// cylinders: on a cylinder of order L the orbit is a rigid translation until
// its digit prefix overflows, so each cylinder either resolves with a single
// return time or splits. Mass still unresolved at max_level (boundary
// cylinders, total below 1e-14) is booked at the a priori bound 2^n, where
// 2^-n <= eps; returns provably beyond cap are censored.
ReturnDistribution vnk_ball_return_distribution(double eps, std::uint64_t cap,
                                                unsigned max_level = 62);

// position of the order-n interval with index j along the permutation cycle
inline std::uint64_t vnk_cycle_position(std::uint64_t j, unsigned n) { return reverse_bits(j, n); }

}  // namespace rtd
