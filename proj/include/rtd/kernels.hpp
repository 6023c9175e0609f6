#pragma once

// Sample-parallel loop kernels. Every loop comes in two flavors: a plain
// serial reference and an OpenMP version. Both draw randomness from the same
// block-partitioned stream plan, so their outputs are bit-identical regardless
// of thread count.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <vector>

namespace rtd {

using Rng = std::mt19937_64;

enum class ExecPolicy { kSerial, kParallel };

// samples per random-stream block; fixed so results never depend on threads
inline constexpr std::uint64_t kStreamBlock = 1024;

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return Rng(seq);
}

// uniform on the open interval (0,1)
inline double uniform_open(Rng& rng) {
  for (;;) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

struct StreamPlan {
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
};

namespace detail {

template <class T, class Fn>
void run_block(std::vector<T>& out, std::uint64_t b, const StreamPlan& plan, Fn& fn) {
  Rng rng = make_stream(plan.seed, plan.stream, b);
  const std::uint64_t lo = b * kStreamBlock;
  const std::uint64_t hi = std::min<std::uint64_t>(out.size(), lo + kStreamBlock);
  for (std::uint64_t i = lo; i < hi; ++i) out[i] = fn(rng, i);
}

}  // namespace detail

// out[i] = fn(rng, i) for i < count, with rng the stream of i's block.
template <class T, class Fn>
std::vector<T> generate_samples(std::uint64_t count, const StreamPlan& plan, ExecPolicy policy,
                                Fn&& fn) {
  std::vector<T> out(count);
  const std::uint64_t blocks = (count + kStreamBlock - 1) / kStreamBlock;
  if (policy == ExecPolicy::kSerial) {
    for (std::uint64_t b = 0; b < blocks; ++b) detail::run_block(out, b, plan, fn);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
    try {
      detail::run_block(out, static_cast<std::uint64_t>(b), plan, fn);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// out[i] = fn(i) without randomness (enumerations).
template <class T, class Fn>
std::vector<T> map_indices(std::uint64_t count, ExecPolicy policy, Fn&& fn) {
  std::vector<T> out(count);
  if (policy == ExecPolicy::kSerial) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
    try {
      out[static_cast<std::uint64_t>(i)] = fn(static_cast<std::uint64_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace rtd
