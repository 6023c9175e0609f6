#include <doctest.h>

#include <cmath>

#include "reference.hpp"
#include "rtd/maps.hpp"

using namespace rtd;

TEST_SUITE("maps") {
  TEST_CASE("vnk map on the J_k intervals") {
    CHECK(vnk_apply(1.0) == 0.0);
    CHECK(vnk_apply(0.0) == 0.5);
    CHECK(vnk_apply(0.5) == 0.25);
    CHECK(vnk_apply(0.75) == 0.125);
    Rng rng = make_stream(7, 1, 0);
    for (int i = 0; i < 2000; ++i) {
      // dyadic rationals of order <= 40 are exact in double
      const double x = std::ldexp(static_cast<double>(rng() >> 24), -40);
      CHECK(vnk_apply(x) == ref::vnk_map(x));
    }
  }

  TEST_CASE("vnk exact dyadic map agrees with the double map") {
    Rng rng = make_stream(7, 2, 0);
    for (int i = 0; i < 500; ++i) {
      const double x = std::ldexp(static_cast<double>(rng() >> 20), -44);
      CHECK(vnk_apply(DyadicPoint::from_double(x)).to_double() == vnk_apply(x));
    }
  }

  TEST_CASE("symbolic step quasi-cycle") {
    CHECK(vnk_symbolic_step(DyadicWord::from_string("01111")).to_string() == "11111");
    CHECK(vnk_symbolic_step(DyadicWord::from_string("11111")).to_string() == "00000");
    CHECK(vnk_symbolic_step(DyadicWord::from_string("00000")).to_string() == "10000");
    for (unsigned n : {1u, 4u, 9u}) {
      for (std::uint64_t j = 0; j < (1ull << n); ++j) {
        CHECK(vnk_symbolic_step(DyadicWord(j, n)).index() == ref::vnk_index_step(j, n));
      }
    }
  }

  TEST_CASE("cyclic permutation periods") {
    CHECK(vnk_verify_cyclic(1).period == 2);
    CHECK(vnk_verify_cyclic(3).period == 8);
    const CyclicCheck c = vnk_verify_cyclic(10);
    CHECK(c.cyclic);
    CHECK(c.period == 1024);
    CHECK_THROWS_AS(vnk_verify_cyclic(21), ResourceError);
  }

  TEST_CASE("gw normalization against the zeta function") {
    for (double p : {-1.2, -1.5, -2.0, -3.0}) {
      const GaspardWang m(p);
      CHECK(m.a() == doctest::Approx(ref::gw_a(p)).epsilon(1e-12));
    }
    CHECK(GaspardWang(-1.5).a() == doctest::Approx(0.382793).epsilon(1e-6));
    CHECK_THROWS_AS(GaspardWang(-1.0), DomainError);
  }

  TEST_CASE("gw affine branches") {
    const GaspardWang m(-1.5);
    const double c1 = std::pow(2.0, -1.5);
    CHECK(m.apply(0.5) == doctest::Approx((0.5 - c1) / (1.0 - c1)).epsilon(1e-14));
    CHECK(m.apply(0.5) == doctest::Approx(0.226541).epsilon(1e-6));
    // midpoints are preserved by positive-slope affine bijections
    const double c2 = std::pow(3.0, -1.5);
    CHECK(m.apply(0.5 * (c1 + c2)) == doctest::Approx(0.5 * (1.0 + c1)).epsilon(1e-13));
    const double c3 = std::pow(4.0, -1.5);
    const double x2 = c3 + 0.3 * (c2 - c3);
    CHECK(m.locate(x2) == 2);
    CHECK(m.locate(m.apply(x2)) == 1);
    CHECK_THROWS_AS(m.apply(c1), BoundaryPoint);
  }

  TEST_CASE("gw measure") {
    const GaspardWang m(-1.5);
    const double a = ref::gw_a(-1.5);
    CHECK(m.measure_of_interval(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.measure_of_interval(std::pow(2.0, -1.5), 1.0) == doctest::Approx(a).epsilon(1e-12));
    CHECK(m.measure_of_interval(std::pow(3.0, -1.5), std::pow(2.0, -1.5)) ==
          doctest::Approx(a * std::pow(2.0, -1.5)).epsilon(1e-12));
    CHECK(m.measure_of_interval(std::pow(3.0, -1.5), std::pow(2.0, -1.5)) == doctest::Approx(0.135352).epsilon(2e-4));
  }

  TEST_CASE("gw invariance on the partition") {
    // T^-1 I_j = I_{j+1} plus the slice of I_0 mapped onto I_j
    for (double p : {-1.5, -2.5}) {
      const GaspardWang m(p);
      const double c1 = std::pow(2.0, p);
      const double l0 = 1.0 - c1;
      for (int j = 0; j <= 50; ++j) {
        const double cj = std::pow(j + 1.0, p);
        const double cj1 = std::pow(j + 2.0, p);
        const double cj2 = std::pow(j + 3.0, p);
        const double pre = m.measure_of_interval(cj2, cj1) + m.measure_of_interval(c1 + l0 * cj1, c1 + l0 * cj);
        CHECK(pre == doctest::Approx(m.measure_of_interval(cj1, cj)).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("gw sampling frequency of I_0") {
    const GaspardWang m(-1.5);
    const double a = ref::gw_a(-1.5);
    const double c1 = std::pow(2.0, -1.5);
    Rng rng = make_stream(11, 3, 0);
    const int n = 1000000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += m.sample_invariant(rng) > c1;
    const double se = std::sqrt(a * (1 - a) / n);
    CHECK(std::abs(static_cast<double>(hits) / n - a) < 3 * se);
  }

  TEST_CASE("samplers stay in the unit interval") {
    VonNeumannKakutani v;
    GoldenRotation g;
    Rng rng = make_stream(3, 4, 0);
    for (int i = 0; i < 10000; ++i) {
      const double x = v.sample_invariant(rng);
      CHECK((x >= 0.0 && x <= 1.0));
      const double y = g.sample_invariant(rng);
      CHECK((y >= 0.0 && y <= 1.0));
    }
  }

  TEST_CASE("golden rotation") {
    GoldenRotation g;
    CHECK(g.apply(0.1) == doctest::Approx(0.1 + GoldenRotation::kAlpha));
    CHECK(g.apply(0.5) == doctest::Approx(0.5 + GoldenRotation::kAlpha - 1.0));
    CHECK(g.measure_of_interval(0.2, 0.7) == doctest::Approx(0.5));
  }

  TEST_CASE("fast first entry equals literal iteration") {
    VonNeumannKakutani v;
    GaspardWang gw(-1.5);
    Rng rng = make_stream(5, 5, 0);
    for (int i = 0; i < 300; ++i) {
      const double x = v.sample_invariant(rng);
      const double lo = uniform_open(rng) * 0.95;
      const Interval target = Interval::half_open(lo, lo + 0.002 + 0.05 * uniform_open(rng));
      const auto fast = v.first_entry(x, target, 100000);
      const auto sym = v.symbolic_first_entry(x, target, 100000);
      const auto orbit = v.orbit_first_entry(x, target, 100000);
      CHECK(fast.is_censored() == sym.is_censored());
      CHECK(fast.time() == sym.time());
      CHECK(fast.time() == orbit.time());
    }
    for (int i = 0; i < 300; ++i) {
      const double x = gw.sample_invariant(rng);
      const double lo = uniform_open(rng) * 0.9;
      const Interval target = Interval::half_open(lo, lo + 0.01 + 0.05 * uniform_open(rng));
      const auto fast = gw.first_entry(x, target, 200000);
      const auto slow = gw.stepwise_first_entry(x, target, 200000);
      CHECK(fast.is_censored() == slow.is_censored());
      CHECK(fast.time() == slow.time());
    }
  }

  TEST_CASE("system factory") {
    CHECK(make_system({"vnk", -1.5})->name() == "vnk");
    CHECK(make_system({"gw", -2.0})->name() == "gw");
    CHECK(make_system({"lebesgue", -1.5})->name() == "lebesgue");
    CHECK_THROWS(make_system({"henon", -1.5}));
  }
}
