#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>

#include "reference.hpp"
#include "rtd/oracles.hpp"

using namespace rtd;

namespace {

const TheoremReference& by_id(const std::vector<TheoremReference>& refs, const std::string& id) {
  for (const auto& r : refs) {
    if (r.id == id) return r;
  }
  throw std::runtime_error("missing reference " + id);
}

}  // namespace

TEST_SUITE("oracles") {
  TEST_CASE("references cover their domains") {
    const auto refs = theorem_references(-1.5);
    CHECK(refs.size() == 9);
    for (const auto& r : refs) CHECK_MESSAGE(r.covers_domain(), r.id);
  }

  TEST_CASE("reference values") {
    const auto refs = theorem_references(-1.5);
    const auto& dtau = by_id(refs, "vnk-dtau");
    CHECK(dtau.evaluate(1.5).value() == 1.0);
    CHECK(dtau.evaluate(2.0).value() == 1.0);
    CHECK(dtau.evaluate(3.0).value() == 0.5);
    CHECK(dtau.boundaries() == std::vector<double>{2.0});
    const auto& gmu = by_id(refs, "gw-dmu");
    CHECK(gmu.evaluate(1.0).value() == 1.0);
    CHECK(gmu.evaluate(3.0).value() == doctest::Approx(0.5));
    CHECK(gmu.evaluate(1.5).value() == 1.0);
    CHECK(by_id(refs, "gw-qc").evaluate(0.0).value() == -0.5);
    const auto& gtau = by_id(refs, "gw-dtau");
    CHECK(gtau.evaluate(-1.0).is_infinite());
    CHECK_THROWS_AS(gtau.evaluate(0.0), DomainError);
    CHECK(by_id(refs, "vnk-rho").evaluate(5).value() == 32.0);
    CHECK_THROWS_AS(by_id(refs, "vnk-rho").evaluate(63), DomainError);
    CHECK_THROWS_AS(theorem_references(-0.5), DomainError);
  }

  TEST_CASE("lebesgue and grid claims") {
    CHECK(lebesgue_dimensions(-2.0, LebesgueQuantity::D_mu).value() == 1.0);
    CHECK(lebesgue_dimensions(-2.0, LebesgueQuantity::Delta_plus_mu).is_infinite());
    CHECK(lebesgue_dimensions(0.5, LebesgueQuantity::Delta_plus_mu).value() == 1.0);
    CHECK(*vnk_grid_dimension_claims(2.0, 0.0).delta_plus == 1.0);
    CHECK_FALSE(vnk_grid_dimension_claims(2.0, 0.0).delta_minus.has_value());
    CHECK(*vnk_grid_dimension_claims(-1.0, 0.0).delta_minus == 1.0);
    const auto z = vnk_grid_dimension_claims(0.0, 0.375);
    CHECK((z.delta_plus && z.delta_minus));
    CHECK_THROWS_AS(vnk_grid_dimension_claims(1.0, 1.0 / 3.0), DomainError);
    CHECK_THROWS_AS(vnk_grid_dimension_claims(1.0, 1.0), DomainError);
  }

  TEST_CASE("moment-sum verdicts follow q > p + 1") {
    for (double p : {-1.2, -1.5, -2.0, -3.0}) {
      for (double q : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
        const MomentSum s = gw_moment_sum(q, p);
        CHECK_MESSAGE(s.divergent == !(q > p + 1.0), "p = " << p << ", q = " << q);
      }
    }
  }

  TEST_CASE("moment-sum values") {
    // zeroth power: the law of tau on I_0 is normalized
    CHECK(gw_moment_sum(1.0, -1.5).value() == doctest::Approx(1.0).epsilon(1e-6));
    // first power: Kac gives 1/mu(I_0) = zeta(-p)
    for (double p : {-1.5, -2.0, -3.0}) {
      CHECK(gw_moment_sum(0.0, p).value() == doctest::Approx(boost::math::zeta(-p)).epsilon(1e-3));
      CHECK(gw_moment_sum(0.0, p).value() == doctest::Approx(1.0 / ref::gw_a(p)).epsilon(1e-3));
    }
    const MomentSum d = gw_moment_sum(-1.0, -1.5);
    CHECK(std::isinf(d.value()));
    CHECK_THROWS_AS(gw_moment_sum(0.0, -1.5, 0), DomainError);
  }
}
