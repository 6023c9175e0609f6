#include <doctest.h>

#include <cmath>

#include "rtd/io.hpp"

using namespace rtd;

TEST_SUITE("io") {
  TEST_CASE("number formatting") {
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(1.0 / 3.0) == "0.333333333333");
    CHECK(format_real(std::ldexp(1.0, -14)) == "6.103515625e-05");
    CHECK(format_extended(ExtendedReal::infinity()) == "inf");
    CHECK(parse_extended("inf").is_infinite());
    CHECK(parse_real("2.5e-3") == 0.0025);
    CHECK_THROWS_AS(parse_real("1.0x"), ConfigError);
  }

  TEST_CASE("partition rows round-trip") {
    PartitionSample a;
    a.family = Family::UpsilonTilde;
    a.variant = Variant::kLog;
    a.theta = 0.25;
    a.epsilon = 1.0 / 3.0;
    a.q = 1.0;
    a.value = ExtendedReal(-1.234567890123456);
    a.std_error = 1e-5;
    a.censored_fraction = 0.001;
    PartitionSample b = a;
    b.family = Family::GammaTau;
    b.variant = Variant::kPower;
    b.value = ExtendedReal::infinity();
    b.divergent = true;
    const std::string text = to_csv_text(partition_to_csv({a, b}));
    CHECK(text.rfind("# recurrence-dims v1 schema=partition\n", 0) == 0);
    const auto rows = partition_from_csv(parse_csv_text(text));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].family == Family::UpsilonTilde);
    CHECK(rows[1].value.is_infinite());
    CHECK(rows[1].divergent);
    CHECK(to_csv_text(partition_to_csv(rows)) == text);
  }

  TEST_CASE("dimension and audit rows round-trip") {
    DimensionEstimate d;
    d.family = Family::PsiTau;
    d.q = -0.5;
    d.slope = ExtendedReal(0.987654321);
    d.points = 9;
    d.spread = 0.3;
    DimensionEstimate e = d;
    e.slope = ExtendedReal::infinity();
    e.divergent = true;
    const std::string dt = to_csv_text(dimensions_to_csv({d, e}));
    CHECK(to_csv_text(dimensions_to_csv(dimensions_from_csv(parse_csv_text(dt)))) == dt);

    InequalityAudit a;
    a.relation = "dtau<=deltatau";
    a.q = 3;
    a.left = ExtendedReal(0.5);
    a.right = ExtendedReal::infinity();
    a.verdict = Verdict::kHolds;
    const std::string at = to_csv_text(audits_to_csv({a}));
    const auto back = audits_from_csv(parse_csv_text(at));
    CHECK(back[0].right.is_infinite());
    CHECK(to_csv_text(audits_to_csv(back)) == at);
  }

  TEST_CASE("distribution round-trip") {
    ReturnDistribution d;
    d.mass = {{1, 0.25}, {7, 0.7}};
    d.censored_mass = 0.05;
    d.cap = 1000;
    d.sample_count = 20;
    d.target_set_measure = 0.125;
    const std::string t = to_csv_text(distribution_to_csv(d));
    const auto back = distribution_from_csv(parse_csv_text(t));
    CHECK(back.mass == d.mass);
    CHECK(back.cap == 1000);
    CHECK(to_csv_text(distribution_to_csv(back)) == t);
  }

  TEST_CASE("quoting") {
    CsvTable t{"validation", {"criterion", "expected", "observed", "tolerance", "verdict"}, {}};
    t.rows.push_back({"x", "a, b", "say \"hi\"\nsecond line", "0.1", "pass"});
    const std::string text = to_csv_text(t);
    const CsvTable back = parse_csv_text(text);
    CHECK(back.rows == t.rows);
    CHECK(to_csv_text(back) == text);
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_csv_text("family,q\n"), ConfigError);
    CHECK_THROWS_AS(parse_csv_text("# recurrence-dims v1 schema=x\na,b\n1\n"), ConfigError);
    CHECK_THROWS_AS(parse_csv_text("# recurrence-dims v1 schema=x\na,b\n\"1,2\n"), ConfigError);
    CHECK_THROWS_AS(partition_from_csv(parse_csv_text("# recurrence-dims v1 schema=audits\na\n")), ConfigError);
  }

  TEST_CASE("scale and order specs") {
    const auto e = parse_eps_spec("2^-4..2^-7");
    CHECK(e == std::vector<double>{0.0625, 0.03125, 0.015625, 0.0078125});
    CHECK(parse_eps_spec("2^-7..2^-4") == e);
    CHECK(parse_eps_spec("0.1, 0.05,2^-5") == std::vector<double>{0.1, 0.05, 0.03125});
    CHECK_THROWS_AS(parse_eps_spec("0.05,0.1"), ConfigError);
    CHECK_THROWS_AS(parse_eps_spec("0.1,-0.05"), ConfigError);
    const auto q = parse_q_spec("-3..5");
    CHECK(q.size() == 17);
    CHECK(q.front() == -3.0);
    CHECK(q.back() == 5.0);
    CHECK(parse_q_spec("0..1:0.25") == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
    CHECK(parse_q_spec("-1,2") == std::vector<double>{-1, 2});
    CHECK_THROWS_AS(parse_q_spec("inf"), ConfigError);
    CHECK_THROWS_AS(parse_q_spec("3..1"), ConfigError);
  }

  TEST_CASE("rendered spectrum marks infinities") {
    DimensionEstimate a;
    a.family = Family::GammaTau;
    a.q = -1;
    a.slope = ExtendedReal::infinity();
    a.divergent = true;
    DimensionEstimate b = a;
    b.q = 2;
    b.slope = ExtendedReal(0.5);
    b.divergent = false;
    b.spread = 0.5;
    const std::string s = render_spectrum({a, b});
    CHECK(s.find("inf") != std::string::npos);
    CHECK(s.find("0.5000*") != std::string::npos);
  }
}
