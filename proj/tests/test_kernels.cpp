#include <doctest.h>

#include <omp.h>

#include "rtd/kernels.hpp"

using namespace rtd;

TEST_SUITE("kernels") {
  TEST_CASE("generate_samples is independent of policy and thread count") {
    const StreamPlan plan{42, 7};
    const auto draw = [](Rng& rng, std::uint64_t i) { return uniform_open(rng) + static_cast<double>(i); };
    const auto serial = generate_samples<double>(10000, plan, ExecPolicy::kSerial, draw);
    const auto parallel = generate_samples<double>(10000, plan, ExecPolicy::kParallel, draw);
    CHECK(serial == parallel);
    const int before = omp_get_max_threads();
    omp_set_num_threads(3);
    CHECK(generate_samples<double>(10000, plan, ExecPolicy::kParallel, draw) == serial);
    omp_set_num_threads(before);
    const auto other = generate_samples<double>(10000, StreamPlan{43, 7}, ExecPolicy::kSerial, draw);
    CHECK(other != serial);
  }

  TEST_CASE("map_indices") {
    const auto sq = [](std::uint64_t i) { return i * i; };
    CHECK(map_indices<std::uint64_t>(5000, ExecPolicy::kSerial, sq) ==
          map_indices<std::uint64_t>(5000, ExecPolicy::kParallel, sq));
  }

  TEST_CASE("uniform_open never returns the endpoints") {
    Rng rng = make_stream(1, 1, 1);
    for (int i = 0; i < 100000; ++i) {
      const double u = uniform_open(rng);
      CHECK((u > 0.0 && u < 1.0));
    }
  }
}
