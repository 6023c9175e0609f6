#include "rtd/vnk_exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

namespace rtd {

namespace {

// Smallest m >= 1 moving cycle position `pos` into the block of order-L indices
// [a, a + 2^s); positions congruent to reverse(a) modulo 2^(L-s) qualify.
std::uint64_t steps_to_block(std::uint64_t pos, std::uint64_t a, unsigned s, unsigned level) {
  const unsigned k = level - s;
  const std::uint64_t mask = k == 0 ? 0 : (k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1);
  const std::uint64_t r = reverse_bits(a, level);
  return ((r - pos - 1) & mask) + 1;
}

// visit the maximal aligned blocks [a, a + 2^s) covering [lo, hi)
template <class Fn>
void for_each_block(std::uint64_t lo, std::uint64_t hi, unsigned level, Fn&& fn) {
  std::uint64_t a = lo;
  while (a < hi) {
    unsigned s = a == 0 ? level : std::min<unsigned>(static_cast<unsigned>(std::countr_zero(a)), level);
    while (s > 0 && a + (std::uint64_t{1} << s) > hi) --s;
    fn(a, s);
    a += std::uint64_t{1} << s;
  }
}

ReturnDistribution from_counts(const std::map<std::uint64_t, long double>& acc, long double censored,
                               std::uint64_t cap) {
  ReturnDistribution d;
  for (const auto& [m, w] : acc) d.mass[m] = static_cast<double>(w);
  d.censored_mass = static_cast<double>(censored);
  d.cap = cap;
  d.target_set_measure = 1.0;
  return d;
}

}  // namespace

ReturnDistribution vnk_grid_return_distribution(const GridSpec& grid, BoxKind kind) {
  const auto level = grid.dyadic_level(24);
  if (!level) throw DomainError("exact grid path needs a dyadic origin and side (order <= 24)");
  const unsigned n = std::max(*level, 1U);
  const std::uint64_t size = std::uint64_t{1} << n;
  const auto to_index = [&](double x) {
    return static_cast<std::uint64_t>(std::clamp(std::ldexp(x, static_cast<int>(n)), 0.0,
                                                 static_cast<double>(size)));
  };
  std::map<std::uint64_t, long double> acc;
  const long double w = std::ldexp(1.0L, -static_cast<int>(n));
  for (std::int64_t j = grid.first_index(); j <= grid.last_index(); ++j) {
    const Interval box = grid.box(j);
    const Interval target = kind == BoxKind::kPlain ? box : grid.enlarged(j);
    const std::uint64_t b0 = to_index(box.lo);
    const std::uint64_t b1 = to_index(box.hi);
    const std::uint64_t t0 = to_index(target.lo);
    const std::uint64_t t1 = to_index(target.hi);
    for (std::uint64_t a = b0; a < b1; ++a) {
      const std::uint64_t pa = vnk_cycle_position(a, n);
      std::uint64_t best = size;
      for_each_block(t0, t1, n, [&](std::uint64_t blk, unsigned sb) {
        best = std::min(best, steps_to_block(pa, blk, sb, n));
      });
      acc[best] += w;
    }
  }
  return from_counts(acc, 0.0L, size);
}

ReturnDistribution vnk_ball_return_distribution(double eps, std::uint64_t cap, unsigned max_level) {
  if (!(eps > 0.0)) throw DomainError("ball radius must be positive");
  if (cap < 1) throw DomainError("cap must be >= 1");
  max_level = std::min(max_level, 62U);

  struct Node {
    std::uint64_t start;    // digit prefix of the cylinder
    std::uint64_t current;  // digit prefix of its image after m0 steps
    unsigned level;
    std::uint64_t m0;
  };
  // smallest n with 2^-n <= eps
  int bound_order = 0;
  while (std::ldexp(1.0, -bound_order) > eps) ++bound_order;
  const std::uint64_t bound = bound_order >= 63 ? ~std::uint64_t{0} : std::uint64_t{1} << bound_order;
  std::vector<Node> stack{{0, 0, 1, 0}, {1, 1, 1, 0}};
  std::map<std::uint64_t, long double> acc;
  long double censored = 0.0L;

  while (!stack.empty()) {
    const Node node = stack.back();
    stack.pop_back();
    const unsigned lv = node.level;
    const std::uint64_t size = std::uint64_t{1} << lv;
    const long double weight = std::ldexp(1.0L, -static_cast<int>(lv));

    // Displacement on the cylinder is (current - start) 2^-L exactly, so the
    // ball condition is a window of prefixes around `start`.
    const double e = std::ldexp(eps, static_cast<int>(lv));
    std::uint64_t lo = 0;
    std::uint64_t hi = size;
    if (e < static_cast<double>(size)) {
      const double fl = std::floor(e);
      std::uint64_t d = 0;
      if (fl == e) {
        d = e >= 1.0 ? static_cast<std::uint64_t>(e) - 1 : 0;
      } else {
        d = static_cast<std::uint64_t>(fl);
      }
      lo = node.start >= d ? node.start - d : 0;
      hi = std::min(size, node.start + d + 1);
    }

    const std::uint64_t pos = vnk_cycle_position(node.current, lv);
    const std::uint64_t last = size - 1;  // position of the all-ones prefix
    std::uint64_t best = 0;
    for_each_block(lo, hi, lv, [&](std::uint64_t a, unsigned s) {
      const std::uint64_t m = steps_to_block(pos, a, s, lv);
      if (m <= last - pos && (best == 0 || m < best)) best = m;
    });

    if (best != 0) {
      const std::uint64_t m = node.m0 + best;
      if (m <= cap) acc[m] += weight; else censored += weight;
      continue;
    }
    // no hit before the prefix overflows: refine by one digit
    const std::uint64_t m1 = node.m0 + (last - pos);
    if (m1 >= cap) {
      censored += weight;
      continue;
    }
    if (lv >= max_level) {
      // the ball contains the order-n dyadic interval of x, so tau <= 2^n
      if (bound <= cap) acc[std::max(bound, m1 + 1)] += weight; else censored += weight;
      continue;
    }
    for (std::uint64_t b = 0; b < 2; ++b) {
      stack.push_back({2 * node.start + b, 2 * last + b, lv + 1, m1});
    }
  }
  return from_counts(acc, censored, cap);
}

}  // namespace rtd
