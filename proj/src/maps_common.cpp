#include <algorithm>
#include <cmath>

#include "rtd/maps.hpp"

namespace rtd {

double DynamicalSystem::sample_conditional(Rng& rng, const Interval& set,
                                           const SamplingLimits& limits) const {
  std::uint64_t attempts = 0;
  for (;;) {
    const double x = sample_invariant(rng);
    ++attempts;
    if (set.contains(x)) return x;
    if (attempts >= limits.min_attempts &&
        1.0 / static_cast<double>(attempts) < limits.acceptance_floor) {
      throw RejectionStall("rejection sampler acceptance below floor for " + name());
    }
  }
}

ReturnOutcome DynamicalSystem::first_entry(double x, const Interval& target,
                                           std::uint64_t cap) const {
  return orbit_first_entry(x, target, cap);
}

ReturnOutcome DynamicalSystem::first_return_to_ball(double x, double eps,
                                                    std::uint64_t cap) const {
  return first_entry(x, Interval::open(x - eps, x + eps), cap);
}

ReturnOutcome DynamicalSystem::orbit_first_entry(double x, const Interval& target,
                                                 std::uint64_t cap) const {
  if (cap < 1) throw DomainError("cap must be >= 1");
  double y = x;
  for (std::uint64_t m = 1; m <= cap; ++m) {
    y = apply(y);
    if (target.contains(y)) return ReturnOutcome::returned(m);
  }
  return ReturnOutcome::censored(cap);
}

double GoldenRotation::apply(double x) const {
  const double y = x + kAlpha;
  return y >= 1.0 ? y - 1.0 : y;
}

double GoldenRotation::measure_of_interval(double u, double v) const {
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  return v > u ? v - u : 0.0;
}

double GoldenRotation::sample_invariant(Rng& rng) const { return uniform_open(rng); }

double GoldenRotation::sample_conditional(Rng& rng, const Interval& set,
                                          const SamplingLimits&) const {
  const Interval s = set.clipped();
  if (s.empty()) throw RejectionStall("conditioning set has zero measure");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double x = s.lo + uniform_open(rng) * (s.hi - s.lo);
    if (s.contains(x) && x < 1.0) return x;
  }
  throw RejectionStall("conditioning set too thin for double resolution");
}

std::unique_ptr<DynamicalSystem> make_system(const SystemSpec& spec) {
  if (spec.name == "vnk") return std::make_unique<VonNeumannKakutani>();
  if (spec.name == "gw") return std::make_unique<GaspardWang>(spec.p);
  if (spec.name == "lebesgue") return std::make_unique<GoldenRotation>();
  throw ConfigError("unknown system '" + spec.name + "' (expected vnk, gw or lebesgue)");
}

}  // namespace rtd
