#include <algorithm>
#include <bit>
#include <cmath>

#include "rtd/maps.hpp"

namespace rtd {

namespace {

constexpr unsigned kW = VonNeumannKakutani::kWordBits;
const u128 kOne = 1;
const u128 kFull = kOne << kW;  // 2^W

unsigned countl_one128(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (~hi != 0) return static_cast<unsigned>(std::countl_one(hi));
  return 64 + static_cast<unsigned>(std::countl_one(static_cast<std::uint64_t>(v)));
}

unsigned ctz128(u128 v) {
  const auto lo = static_cast<std::uint64_t>(v);
  if (lo != 0) return static_cast<unsigned>(std::countr_zero(lo));
  return 64 + static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(v >> 64)));
}

// numerators Y at level W with T^m(x) in the target <=> lo <= Y < hi
struct WordRange {
  u128 lo = 0;
  u128 hi = 0;
};

u128 to_word(double x) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("vnk word point must lie in [0,1)");
  return static_cast<u128>(std::ldexp(x, kW));
}

u128 clamp_scaled(double s) {
  if (s <= 0.0) return 0;
  if (s >= std::ldexp(1.0, kW)) return kFull;
  return static_cast<u128>(s);
}

WordRange word_range(const Interval& target) {
  const double lo = std::ldexp(target.lo, kW);
  const double hi = std::ldexp(target.hi, kW);
  WordRange r;
  r.lo = clamp_scaled(target.closed_lo ? std::ceil(lo) : std::floor(lo) + 1.0);
  r.hi = clamp_scaled(target.closed_hi ? std::floor(hi) + 1.0 : std::ceil(hi));
  return r;
}

WordRange ball_range(u128 x, double eps) {
  const double e = std::ldexp(eps, kW);
  WordRange r;
  if (e >= std::ldexp(1.0, kW)) {
    r.hi = kFull;
    return r;
  }
  // |Y - X| < e  <=>  |Y - X| <= d
  const double fl = std::floor(e);
  const u128 d = fl == e ? (e >= 1.0 ? static_cast<u128>(e) - 1 : 0) : static_cast<u128>(fl);
  r.lo = x >= d ? x - d : 0;
  r.hi = std::min(kFull, x + d + 1);
  return r;
}

// One symbolic step on a W-digit word (most significant digit = omega_1).
u128 word_step(u128 y) {
  const unsigned lead = countl_one128(y << (128 - kW));
  if (lead >= kW) throw DomainError("orbit left the exact word horizon");
  const unsigned k = lead + 1;
  const u128 mask = ((kOne << k) - 1) << (kW - k);
  return y ^ mask;
}

// In odometer coordinates P = reverse(Y) the map is P -> P + 1, so the first
// entry into a dyadic block with fixed top digits h is a residue problem.
ReturnOutcome residue_first_entry(u128 x, const WordRange& range, std::uint64_t cap) {
  const u128 pos = reverse_bits128(x, kW);
  const u128 horizon = (kFull - 1) - pos;  // steps before the carry leaves the word
  u128 best = ~static_cast<u128>(0);
  u128 a = range.lo;
  while (a < range.hi) {
    unsigned s = a == 0 ? kW : std::min(ctz128(a), kW);
    while (s > 0 && a + (kOne << s) > range.hi) --s;
    const unsigned k = kW - s;
    const u128 mask = k == 0 ? 0 : ((kOne << k) - 1);
    const u128 r = reverse_bits128(a, kW);
    const u128 m = ((r - pos - 1) & mask) + 1;
    best = std::min(best, m);
    a += kOne << s;
  }
  const u128 cap128 = cap;
  if (best <= cap128 && best <= horizon) return ReturnOutcome::returned(static_cast<std::uint64_t>(best));
  if (cap128 <= horizon) return ReturnOutcome::censored(cap);
  throw DomainError("return beyond the exact word horizon");
}

ReturnOutcome literal_first_entry(u128 x, const WordRange& range, std::uint64_t cap) {
  u128 y = x;
  for (std::uint64_t m = 1; m <= cap; ++m) {
    y = word_step(y);
    if (y >= range.lo && y < range.hi) return ReturnOutcome::returned(m);
  }
  return ReturnOutcome::censored(cap);
}

}  // namespace

unsigned VonNeumannKakutani::branch(double x) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("branch index defined on [0,1)");
  unsigned k = 0;
  while (x >= 1.0 - std::ldexp(1.0, -static_cast<int>(k) - 1)) ++k;
  return k;
}

double vnk_apply(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("vnk map defined on [0,1]");
  if (x == 1.0) return 0.0;
  const unsigned k = VonNeumannKakutani::branch(x);
  const double left = 1.0 - std::ldexp(1.0, -static_cast<int>(k));
  return (x - left) + std::ldexp(1.0, -static_cast<int>(k) - 1);
}

DyadicPoint vnk_apply(const DyadicPoint& x) {
  if (x.level() == 0) {
    // x is 0 or 1
    if (x.numerator() == 1) return DyadicPoint();
    return DyadicPoint(1, 1);
  }
  const unsigned lv = x.level();
  const u128 n = x.numerator();
  // leading ones of the lv-digit expansion
  const unsigned lead = countl_one128(n << (128 - lv));
  if (lead >= lv) {
    // x = 1 - 2^-lv lies in J_lv and lands on 2^-(lv+1)
    return DyadicPoint(1, lv + 1);
  }
  const unsigned k = lead + 1;
  const u128 mask = ((kOne << k) - 1) << (lv - k);
  return DyadicPoint(n ^ mask, lv);
}

DyadicWord vnk_symbolic_step(const DyadicWord& w) {
  const unsigned n = w.length();
  const unsigned k = w.first_zero();
  if (k > n) return DyadicWord(0, n);
  const std::uint64_t mask = ((std::uint64_t{1} << k) - 1) << (n - k);
  return DyadicWord(w.index() ^ mask, n);
}

CyclicCheck vnk_verify_cyclic(unsigned n, unsigned max_n) {
  if (n < 1) throw DomainError("word length must be positive");
  if (n > max_n || n > 40) throw ResourceError("cyclic check exceeds the configured word budget");
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<bool> seen(size, false);
  DyadicWord w(0, n);
  std::uint64_t steps = 0;
  while (!seen[w.index()]) {
    seen[w.index()] = true;
    w = vnk_symbolic_step(w);
    ++steps;
  }
  CyclicCheck out;
  out.period = steps;
  // the walk started at 0, so a full-length orbit closing on 0 is one cycle
  out.cyclic = steps == size && w.index() == 0;
  return out;
}

double VonNeumannKakutani::apply(double x) const { return vnk_apply(x); }

DyadicPoint VonNeumannKakutani::apply(const DyadicPoint& x) const { return vnk_apply(x); }

double VonNeumannKakutani::measure_of_interval(double u, double v) const {
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  return v > u ? v - u : 0.0;
}

double VonNeumannKakutani::sample_invariant(Rng& rng) const {
  const std::uint64_t k = rng() >> 12;
  return std::ldexp(static_cast<double>(2 * k + 1), -53);
}

double VonNeumannKakutani::sample_conditional(Rng& rng, const Interval& set,
                                              const SamplingLimits&) const {
  const Interval s = set.clipped();
  if (s.empty()) throw RejectionStall("conditioning set has zero measure");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double x = s.lo + uniform_open(rng) * (s.hi - s.lo);
    if (s.contains(x) && x < 1.0) return x;
  }
  throw RejectionStall("conditioning set too thin for double resolution");
}

ReturnOutcome VonNeumannKakutani::first_entry(double x, const Interval& target,
                                              std::uint64_t cap) const {
  if (cap < 1) throw DomainError("cap must be >= 1");
  return residue_first_entry(to_word(x), word_range(target), cap);
}

ReturnOutcome VonNeumannKakutani::first_return_to_ball(double x, double eps,
                                                       std::uint64_t cap) const {
  if (cap < 1) throw DomainError("cap must be >= 1");
  if (!(eps > 0.0)) throw DomainError("ball radius must be positive");
  const u128 w = to_word(x);
  return residue_first_entry(w, ball_range(w, eps), cap);
}

ReturnOutcome VonNeumannKakutani::symbolic_first_entry(double x, const Interval& target,
                                                       std::uint64_t cap) const {
  if (cap < 1) throw DomainError("cap must be >= 1");
  return literal_first_entry(to_word(x), word_range(target), cap);
}

ReturnOutcome VonNeumannKakutani::symbolic_first_return_to_ball(double x, double eps,
                                                                std::uint64_t cap) const {
  if (cap < 1) throw DomainError("cap must be >= 1");
  const u128 w = to_word(x);
  return literal_first_entry(w, ball_range(w, eps), cap);
}

}  // namespace rtd
