#include <algorithm>
#include <cmath>

#include "rtd/maps.hpp"

namespace rtd {

namespace {

constexpr std::uint64_t kTableSize = std::uint64_t{1} << 16;
// below c_{kDeep} the interval index no longer resolves in double precision
constexpr double kDeep = 1e15;

}  // namespace

GaspardWang::GaspardWang(double p, Options options) : p_(p), options_(options) {
  if (!std::isfinite(p) || !(p < -1.0)) throw DomainError("Gaspard-Wang map requires p < -1");
  c_table_.resize(kTableSize + 2);
  len_table_.resize(kTableSize + 1);
  for (std::uint64_t j = 0; j < c_table_.size(); ++j) {
    c_table_[j] = std::pow(static_cast<double>(j + 1), p);
  }
  for (std::uint64_t j = 0; j < len_table_.size(); ++j) {
    const double jp1 = static_cast<double>(j + 1);
    len_table_[j] = c_table_[j] * -std::expm1(p * std::log1p(1.0 / jp1));
  }
  // tail(m) = sum_{k >= m+1} k^p, summed from the small terms upward
  tail_table_.resize(kTableSize + 1);
  long double acc = tail_em(static_cast<double>(kTableSize + 1));
  tail_table_[kTableSize] = static_cast<double>(acc);
  for (std::uint64_t m = kTableSize; m-- > 0;) {
    acc += static_cast<long double>(c_table_[m]);
    tail_table_[m] = static_cast<double>(acc);
  }
  a_ = 1.0 / tail_table_[0];
  const double jm = std::ceil(std::pow(options_.tail_tolerance / a_, 1.0 / p_)) - 1.0;
  j_max_ = static_cast<std::uint64_t>(std::clamp(jm, 1.0, kDeep));
}

// Euler-Maclaurin for sum_{k >= n} k^p
double GaspardWang::tail_em(double n) const {
  const double p = p_;
  const double f = std::pow(n, p);
  const double integral = std::pow(n, p + 1.0) / (-p - 1.0);
  const double d1 = p * f / n;
  const double d3 = p * (p - 1.0) * (p - 2.0) * f / (n * n * n);
  const double d5 = p * (p - 1.0) * (p - 2.0) * (p - 3.0) * (p - 4.0) * f / (n * n * n * n * n);
  return integral + 0.5 * f - d1 / 12.0 + d3 / 720.0 - d5 / 30240.0;
}

double GaspardWang::c(std::uint64_t j) const {
  if (j < c_table_.size()) return c_table_[j];
  return std::pow(static_cast<double>(j) + 1.0, p_);
}

double GaspardWang::length(std::int64_t j) const {
  if (j < 0) return 1.0;
  const auto u = static_cast<std::uint64_t>(j);
  if (u < len_table_.size()) return len_table_[u];
  const double jp1 = static_cast<double>(u) + 1.0;
  return std::pow(jp1, p_) * -std::expm1(p_ * std::log1p(1.0 / jp1));
}

double GaspardWang::tail(std::uint64_t m) const {
  if (m <= kTableSize) return tail_table_[m];
  return tail_em(static_cast<double>(m) + 1.0);
}

Interval GaspardWang::return_slice(std::uint64_t j) const {
  const double base = c(1);
  const double l0 = length(0);
  return Interval::open(base + l0 * c(j + 1), base + l0 * c(j));
}

std::uint64_t GaspardWang::locate_nothrow(double x) const {
  // most mass sits in the first few intervals
  for (std::uint64_t j = 0; j < 8; ++j) {
    if (x >= c_table_[j + 1]) return j;
  }
  const double guess = std::floor(std::pow(x, 1.0 / p_)) - 1.0;
  if (!(guess < kDeep)) return static_cast<std::uint64_t>(kDeep);
  auto j = static_cast<std::uint64_t>(std::max(guess, 8.0));
  // neighborhood correction for rounding in the power
  while (j > 8 && x >= c(j)) --j;
  while (x < c(j + 1)) ++j;
  return j;
}

std::uint64_t GaspardWang::locate(double x) const {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("Gaspard-Wang point must lie in (0,1)");
  const std::uint64_t j = locate_nothrow(x);
  const double lo = c(j + 1);
  const double hi = c(j);
  const double tol = 4.0 * std::numeric_limits<double>::epsilon();
  if (x - lo <= tol * lo || hi - x <= tol * hi) throw BoundaryPoint("point on a partition boundary c_j");
  return j;
}

GwState GaspardWang::to_state(double x) const {
  const std::uint64_t j = locate(x);
  const double r = (x - c(j + 1)) / length(static_cast<std::int64_t>(j));
  if (!(r > 0.0 && r < 1.0)) throw BoundaryPoint("point on a partition boundary c_j");
  return {j, r};
}

double GaspardWang::value(const GwState& s) const {
  return c(s.j + 1) + s.r * length(static_cast<std::int64_t>(s.j));
}

GwState GaspardWang::step(const GwState& s) const {
  if (s.j > 0) return {s.j - 1, s.r};
  return to_state(s.r);
}

double GaspardWang::apply(double x) const {
  const std::uint64_t j = locate(x);
  const auto sj = static_cast<std::int64_t>(j);
  // d_0 = 0 and l_{-1} = 1 on the I_0 branch; d_j = c_j otherwise
  const double d = j == 0 ? 0.0 : c(j);
  return (x - c(j + 1)) * (length(sj - 1) / length(sj)) + d;
}

double GaspardWang::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const std::uint64_t j = locate_nothrow(x);
  if (j > j_max_) {
    // integral comparison bound for the far tail
    return a_ * std::pow(x, (p_ + 1.0) / p_) / (-p_ - 1.0);
  }
  const double inside = (x - c(j + 1)) / length(static_cast<std::int64_t>(j));
  return a_ * (tail(j + 1) + c(j) * std::clamp(inside, 0.0, 1.0));
}

double GaspardWang::measure_of_interval(double u, double v) const {
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  if (!(v > u)) return 0.0;
  if (u <= 0.0 || v >= 1.0) return cdf(v) - cdf(u);
  const std::uint64_t ju = locate_nothrow(u);
  const std::uint64_t jv = locate_nothrow(v);
  if (ju > j_max_) return cdf(v) - cdf(u);
  const auto dens = [&](std::uint64_t j) { return a_ * c(j) / length(static_cast<std::int64_t>(j)); };
  if (ju == jv) return (v - u) * dens(ju);
  // partial pieces at both ends plus the whole intervals strictly between
  double mass = (c(ju) - u) * dens(ju) + (v - c(jv + 1)) * dens(jv);
  if (ju - jv <= 64) {
    for (std::uint64_t j = jv + 1; j < ju; ++j) mass += a_ * c(j);
  } else {
    mass += a_ * (tail(jv + 1) - tail(ju));
  }
  return mass;
}

GwState GaspardWang::sample_state(Rng& rng) const {
  // choose I_j with probability a c_j; G(j) = a tail(j) is the mass below c_j
  const double u = uniform_open(rng);
  std::uint64_t j = 0;
  if (u <= a_ * tail(1)) {
    std::uint64_t lo = 1;  // G(lo) >= u
    std::uint64_t hi = j_max_ + 1;
    if (u <= a_ * tail(hi)) {
      j = j_max_;
    } else {
      // invariant: G(lo) >= u > G(hi)
      while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (a_ * tail(mid) >= u) lo = mid; else hi = mid;
      }
      j = lo;
    }
  }
  return {j, uniform_open(rng)};
}

double GaspardWang::sample_invariant(Rng& rng) const {
  for (;;) {
    const double x = value(sample_state(rng));
    if (x > 0.0 && x < 1.0) return x;
  }
}

double GaspardWang::inverse_cdf(double t) const {
  // mass below c_j is a tail(j); find j with a tail(j+1) <= t < a tail(j)
  if (t >= a_ * tail(1)) {
    return c(1) + (t - a_ * tail(1)) / a_ * length(0);
  }
  std::uint64_t lo = 1;
  std::uint64_t hi = j_max_ + 1;
  if (t < a_ * tail(hi)) return std::pow(t * (-p_ - 1.0) / a_, p_ / (p_ + 1.0));
  // invariant: a tail(lo) > t >= a tail(hi)
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (a_ * tail(mid) > t) lo = mid; else hi = mid;
  }
  const std::uint64_t j = lo;
  const double frac = (t - a_ * tail(j + 1)) / (a_ * c(j));
  return c(j + 1) + std::clamp(frac, 0.0, 1.0) * length(static_cast<std::int64_t>(j));
}

double GaspardWang::sample_conditional(Rng& rng, const Interval& set,
                                       const SamplingLimits&) const {
  const Interval s = set.clipped();
  const double f_lo = cdf(s.lo);
  const double f_hi = cdf(s.hi);
  if (!(f_hi > f_lo)) throw RejectionStall("conditioning set has zero measure");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double x = inverse_cdf(f_lo + uniform_open(rng) * (f_hi - f_lo));
    if (!s.contains(x) || !(x > 0.0 && x < 1.0)) continue;
    try {
      (void)locate(x);
    } catch (const BoundaryPoint&) {
      continue;
    }
    return x;
  }
  throw RejectionStall("conditioning set too thin for double resolution");
}

ReturnOutcome GaspardWang::first_entry(double x, const Interval& target, std::uint64_t cap) const {
  if (cap < 1) throw DomainError("cap must be >= 1");
  GwState s = to_state(x);
  std::uint64_t steps = 0;  // global time of the segment's first position
  for (;;) {
    // Descent segment: positions y_i = c_{J-i+1} + r l_{J-i} at times steps + i,
    // i = 0..J, strictly increasing in i.
    const std::uint64_t big_j = s.j;
    const double r = s.r;
    const auto y = [&](std::uint64_t i) {
      const std::uint64_t j = big_j - i;
      return c(j + 1) + r * length(static_cast<std::int64_t>(j));
    };
    const auto above = [&](double v) { return target.closed_lo ? v >= target.lo : v > target.lo; };
    const auto below = [&](double v) { return target.closed_hi ? v <= target.hi : v < target.hi; };
    std::uint64_t i_min = steps == 0 ? 1 : 0;
    if (i_min <= big_j && above(y(big_j))) {
      std::uint64_t lo = i_min;
      std::uint64_t hi = big_j;
      // first i in [i_min, J] that is above the lower end
      while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (above(y(mid))) hi = mid; else lo = mid + 1;
      }
      if (below(y(lo))) {
        const std::uint64_t t = steps + lo;
        if (t <= cap) return ReturnOutcome::returned(t);
        return ReturnOutcome::censored(cap);
      }
    }
    // leave I_0: the image of (0, r) is the point r itself
    const std::uint64_t next = steps + big_j + 1;
    if (next > cap) return ReturnOutcome::censored(cap);
    steps = next;
    s = to_state(r);
  }
}

ReturnOutcome GaspardWang::stepwise_first_entry(double x, const Interval& target,
                                                std::uint64_t cap) const {
  if (cap < 1) throw DomainError("cap must be >= 1");
  GwState s = to_state(x);
  for (std::uint64_t m = 1; m <= cap; ++m) {
    s = step(s);
    if (target.contains(value(s))) return ReturnOutcome::returned(m);
  }
  return ReturnOutcome::censored(cap);
}

}  // namespace rtd
