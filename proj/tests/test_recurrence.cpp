#include <doctest.h>

#include <cmath>

#include "reference.hpp"
#include "rtd/grid.hpp"
#include "rtd/maps.hpp"
#include "rtd/recurrence.hpp"

using namespace rtd;

TEST_SUITE("recurrence") {
  TEST_CASE("vnk dyadic interval returns after 2^n steps") {
    VonNeumannKakutani v;
    Rng rng = make_stream(9, 1, 0);
    for (unsigned n = 1; n <= 12; ++n) {
      for (int i = 0; i < 20; ++i) {
        const double x = v.sample_invariant(rng);
        const double j = std::floor(std::ldexp(x, n));
        const Interval a = Interval::half_open(std::ldexp(j, -int(n)), std::ldexp(j + 1, -int(n)));
        const auto r = first_return_time(x, a, v, 1u << 20);
        CHECK(!r.is_censored());
        CHECK(r.time() == (1ull << n));
      }
    }
  }

  TEST_CASE("gw return to I_0 from K_j takes j+1 steps") {
    const GaspardWang m(-1.5);
    const Interval i0 = Interval::open(std::pow(2.0, -1.5), 1.0);
    for (std::uint64_t j : {0ull, 1ull, 5ull, 40ull, 300ull}) {
      const Interval k = m.return_slice(j);
      const double x = 0.5 * (k.lo + k.hi);
      const auto r = first_return_time(x, i0, m, 100000);
      CHECK(r.time() == j + 1);
    }
  }

  TEST_CASE("immediate return") {
    VonNeumannKakutani v;
    // 0.1 lies in J_0 and maps to 0.6
    CHECK(first_return_time(0.1, Interval::half_open(0.0, 0.7), v, 10).time() == 1);
  }

  TEST_CASE("enlarged box returns") {
    VonNeumannKakutani v;
    // word 011 at n = 3 returns inside its enlarged box after 3 steps
    const GridSpec g3(0.0, 0.125);
    CHECK(first_return_to_enlarged(3.5 / 8.0, g3, v, 100).time() == 3);
    const GridSpec g4(0.0, 1.0 / 16);
    int threes = 0;
    for (int j = 0; j < 16; ++j) threes += first_return_to_enlarged((j + 0.5) / 16.0, g4, v, 100).time() == 3;
    CHECK(threes == 1);
  }

  TEST_CASE("dyadic distribution is a point mass with Kac equality") {
    for (unsigned n : {1u, 5u, 12u}) {
      const auto d = vnk_dyadic_box_distribution(n, (1ull << n) / 3);
      REQUIRE(d.mass.size() == 1);
      CHECK(d.mass.begin()->first == (1ull << n));
      CHECK(d.mass.begin()->second == 1.0);
      CHECK(kac_residual(d).residual == 0.0);
      CHECK(moment(d, MomentOrder::power(1.0)).value.value() == std::ldexp(1.0, n));
      for (double s : {-2.0, 0.5, 3.0}) {
        CHECK(moment(d, MomentOrder::power(s)).value.value() == doctest::Approx(std::pow(2.0, n * s)).epsilon(1e-14));
      }
      const auto rep = check_moment_inequalities(d, std::vector<double>{-2, -0.5, 0.5, 2});
      CHECK(rep.all_hold());
      CHECK(rep.all_equalities());
    }
  }

  TEST_CASE("gw I_0 analytic law") {
    const GaspardWang m(-1.5);
    const auto d = gw_i0_distribution(m, 1u << 20);
    for (std::uint64_t j : {0ull, 3ull, 1000ull}) {
      const double lj = std::pow(j + 1.0, -1.5) - std::pow(j + 2.0, -1.5);
      CHECK(d.mass.at(j + 1) == doctest::Approx(lj).epsilon(1e-12));
    }
    // Kac: nu_1 = 1/mu(I_0) = 1/a; the (2^20)-term truncation leaves a tail of order 2^-10
    CHECK(std::abs(kac_residual(d).residual) < 5e-3);
    const auto rep = check_moment_inequalities(d, std::vector<double>{-1.0});
    CHECK(rep.all_hold());
    CHECK_FALSE(rep.all_equalities());
  }

  TEST_CASE("two-point law") {
    ReturnDistribution d;
    d.mass = {{1, 0.5}, {3, 0.5}};
    d.target_set_measure = 0.5;
    d.sample_count = 0;
    CHECK(moment(d, MomentOrder::power(2.0)).value.value() == doctest::Approx(5.0));
    CHECK(moment(d, MomentOrder::power(1.0)).value.value() == doctest::Approx(2.0));
    CHECK(check_moment_inequalities(d, std::vector<double>{2.0, -1.0, 0.5}).all_hold());
  }

  TEST_CASE("empirical Kac identity") {
    const GaspardWang m(-1.5);
    McOptions o;
    o.samples = 100000;
    const auto d = estimate_return_distribution(Interval::half_open(0.3, 0.4), m, o);
    const KacResidual k = kac_residual(d);
    CHECK(std::abs(k.residual) < 3.0 * k.std_error + 1e-12);
    double total = d.censored_mass;
    for (const auto& [t, w] : d.mass) total += w;
    CHECK(total == doctest::Approx(1.0));
  }

  TEST_CASE("serial and parallel estimates are bit-identical") {
    const GaspardWang m(-1.5);
    McOptions o;
    o.samples = 20000;
    o.policy = ExecPolicy::kSerial;
    const auto a = estimate_return_distribution(Interval::half_open(0.05, 0.2), m, o);
    o.policy = ExecPolicy::kParallel;
    const auto b = estimate_return_distribution(Interval::half_open(0.05, 0.2), m, o);
    CHECK(a.mass == b.mass);
    CHECK(a.censored_mass == b.censored_mass);
    CHECK(vnk_box_return_times(10, ExecPolicy::kSerial) == vnk_box_return_times(10, ExecPolicy::kParallel));
  }

  TEST_CASE("box return times") {
    for (unsigned n = 1; n <= 12; ++n) {
      const auto t = vnk_box_return_times(n, ExecPolicy::kParallel);
      CHECK(t.size() == (1ull << n));
      for (auto v : t) CHECK(v == (1ull << n));
    }
    CHECK_THROWS_AS(vnk_box_return_times(21, ExecPolicy::kSerial), ResourceError);
  }

  TEST_CASE("start point outside the set is rejected") {
    VonNeumannKakutani v;
    CHECK_THROWS_AS(first_return_time(0.9, Interval::half_open(0.0, 0.5), v, 10), DomainError);
  }
}
