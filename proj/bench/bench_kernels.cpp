// Serial reference vs OpenMP kernels, and fast vs literal orbit iteration.
#include <benchmark/benchmark.h>

#include <cmath>

#include "rtd/partition.hpp"
#include "rtd/recurrence.hpp"
#include "rtd/scaling.hpp"

using namespace rtd;

namespace {

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::kSerial : ExecPolicy::kParallel;
}

void gamma_tau_gw(benchmark::State& state) {
  const GaspardWang sys(-1.5);
  McOptions o;
  o.samples = 20000;
  o.policy = policy_of(state);
  const std::vector<Order> orders = {Order::power(2.0)};
  for (auto _ : state) benchmark::DoNotOptimize(gamma_tau(1.0 / 256, orders, sys, o));
}
BENCHMARK(gamma_tau_gw)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void gamma_tau_vnk_mc(benchmark::State& state) {
  const VonNeumannKakutani sys;
  McOptions o;
  o.samples = 20000;
  o.mode = EvalMode::kMonteCarlo;
  o.policy = policy_of(state);
  const std::vector<Order> orders = {Order::power(2.0)};
  for (auto _ : state) benchmark::DoNotOptimize(gamma_tau(1.0 / 4096, orders, sys, o));
}
BENCHMARK(gamma_tau_vnk_mc)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void rho_bruteforce(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vnk_rho_bruteforce(12, policy_of(state)));
}
BENCHMARK(rho_bruteforce)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void box_return_times(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vnk_box_return_times(10, policy_of(state)));
}
BENCHMARK(box_return_times)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

// one vN-K first entry into a small box: residue arithmetic vs stepping the map
void vnk_first_entry(benchmark::State& state) {
  const VonNeumannKakutani sys;
  const Interval target = Interval::half_open(0.3, 0.3 + std::ldexp(1.0, -14));
  const bool literal = state.range(0) == 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(literal ? sys.orbit_first_entry(0.7, target, 1u << 20)
                                     : sys.first_entry(0.7, target, 1u << 20));
  }
}
BENCHMARK(vnk_first_entry)->Arg(0)->Arg(1)->ArgName("literal")->Unit(benchmark::kMicrosecond);

void gw_first_entry(benchmark::State& state) {
  const GaspardWang sys(-1.5);
  const Interval target = Interval::half_open(0.9, 0.9 + std::ldexp(1.0, -10));
  const bool literal = state.range(0) == 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(literal ? sys.stepwise_first_entry(0.05, target, 1u << 20)
                                     : sys.first_entry(0.05, target, 1u << 20));
  }
}
BENCHMARK(gw_first_entry)->Arg(0)->Arg(1)->ArgName("literal")->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
