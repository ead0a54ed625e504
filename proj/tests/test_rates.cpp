#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

#include "spinmono/rates.hpp"
#include "support.hpp"

using namespace spinmono;
using spinmono::testing::leq_bitwise;

namespace {

double rate_of(const RateSpec& spec, const char* bits) {
  return spec.rate(LocalPattern::parse(bits));
}

// Independent oracle: every ordered pair of codes, comparability by bits.
std::set<std::tuple<std::uint32_t, std::uint32_t>> brute_force_violations(const RateSpec& spec) {
  std::set<std::tuple<std::uint32_t, std::uint32_t>> out;
  const int width = spec.width();
  const std::uint32_t n = spec.pattern_count();
  for (std::uint32_t p = 0; p < n; ++p) {
    for (std::uint32_t q = 0; q < n; ++q) {
      if (p == q || !leq_bitwise(p, q, width)) continue;
      const int cp = (p >> spec.radius()) & 1;
      const int cq = (q >> spec.radius()) & 1;
      if (cp != cq) continue;
      if (cp == 0 && spec.rate(p) > spec.rate(q)) out.insert({p, q});
      if (cp == 1 && spec.rate(p) < spec.rate(q)) out.insert({p, q});
    }
  }
  return out;
}

RateSpec violating_table() {
  return make_custom(1, {{"000", 0.5}, {"100", 0.2}, {"001", 0.5}, {"101", 0.5},
                         {"010", 1.0}, {"110", 1.0}, {"011", 1.0}, {"111", 1.0}});
}

}  // namespace

TEST_CASE("local patterns encode the leftmost site in the low bit") {
  const LocalPattern p = LocalPattern::parse("110");
  CHECK(p.radius == 1);
  CHECK(p.code == 0b011u);
  CHECK(p.center() == 1);
  CHECK(p.at(-1) == 1);
  CHECK(p.at(1) == 0);
  CHECK(p.to_string() == "110");
  CHECK_THROWS_AS(LocalPattern::parse("10"), std::invalid_argument);
  CHECK_THROWS_AS(LocalPattern::parse("1x0"), std::invalid_argument);
}

TEST_CASE("built-in models") {
  SUBCASE("contact") {
    const auto spec = build_model("contact", {{"lambda", 2.0}, {"delta", 1.0}});
    CHECK(spec.radius() == 1);
    CHECK(rate_of(spec, "101") == 4.0);
    CHECK(rate_of(spec, "100") == 2.0);
    CHECK(rate_of(spec, "000") == 0.0);
    CHECK(rate_of(spec, "111") == 1.0);
    CHECK(rate_of(spec, "010") == 1.0);
  }
  SUBCASE("contact without births") {
    const auto spec = build_model("contact", {{"lambda", 0.0}, {"delta", 1.0}});
    for (const char* p : {"000", "100", "001", "101"}) CHECK(rate_of(spec, p) == 0.0);
  }
  SUBCASE("glauber at infinite temperature") {
    const auto spec = build_model("glauber_ising", {{"beta", 0.0}});
    for (double r : spec.table()) CHECK(r == 1.0);
  }
  SUBCASE("glauber aligned with neighbours is slow") {
    const auto spec = build_model("glauber_ising", {{"beta", 1.0}});
    CHECK(rate_of(spec, "111") == doctest::Approx(std::exp(-2.0)));
    CHECK(rate_of(spec, "101") == doctest::Approx(std::exp(2.0)));
    CHECK(rate_of(spec, "100") == doctest::Approx(1.0));
  }
  SUBCASE("voter") {
    const auto spec = build_model("voter", {{"v", 1.0}});
    CHECK(rate_of(spec, "101") == 1.0);
    CHECK(rate_of(spec, "100") == 0.5);
    CHECK(rate_of(spec, "000") == 0.0);
    CHECK(rate_of(spec, "010") == 1.0);
  }
  SUBCASE("pure death") {
    const auto spec = build_model("pure_death", {});
    CHECK(spec.radius() == 0);
    CHECK(rate_of(spec, "1") == 1.0);
    CHECK(rate_of(spec, "0") == 0.0);
  }
}

TEST_CASE("build_model rejects bad input") {
  CHECK_THROWS_AS(build_model("ising", {}), std::invalid_argument);
  CHECK_THROWS_AS(build_model("contact", {{"lambda", -1.0}, {"delta", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_model("contact", {{"lambda", 1.0}, {"delta", 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_model("contact", {{"lambda", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_model("voter", {{"v", 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_model("glauber_ising", {{"beta", -0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(build_model("voter", {{"v", 1.0}, {"w", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_model("custom", {}), std::invalid_argument);
}

TEST_CASE("custom tables must be total, finite and non-negative") {
  CHECK_THROWS_AS(make_custom(1, {{"000", 1.0}}), std::invalid_argument);
  auto table = std::map<std::string, double>{{"0", 1.0}, {"1", -1.0}};
  CHECK_THROWS_AS(make_custom(0, table), std::invalid_argument);
  table["1"] = std::nan("");
  CHECK_THROWS_AS(make_custom(0, table), std::invalid_argument);
  table["1"] = 2.0;
  CHECK(make_custom(0, table).rate(1u) == 2.0);
  CHECK_THROWS_AS(make_custom(1, table), std::invalid_argument);
  CHECK_THROWS_AS(RateSpec(4, std::vector<double>(512, 1.0), "wide"), std::invalid_argument);
  CHECK_NOTHROW(RateSpec(4, std::vector<double>(512, 1.0), "wide", 4));
}

TEST_CASE("check_attractive") {
  SUBCASE("contact is attractive") {
    const auto report = check_attractive(build_model("contact", {{"lambda", 1.5}, {"delta", 1.0}}));
    CHECK(report.attractive);
    CHECK(report.violations.empty());
  }
  SUBCASE("constructed violation is reported exactly") {
    const auto report = check_attractive(violating_table());
    CHECK_FALSE(report.attractive);
    REQUIRE(report.violations.size() == 1);
    const auto& v = report.violations.front();
    CHECK(v.low.to_string() == "000");
    CHECK(v.high.to_string() == "100");
    CHECK(v.rate_low == 0.5);
    CHECK(v.rate_high == 0.2);
  }
  SUBCASE("all-zero table") {
    CHECK(check_attractive(RateSpec(1, std::vector<double>(8, 0.0), "zero")).attractive);
  }
  SUBCASE("built-ins") {
    for (double lambda : {0.5, 1.0, 2.0}) {
      CHECK(check_attractive(build_model("contact", {{"lambda", lambda}, {"delta", 1.0}})).attractive);
    }
    CHECK(check_attractive(build_model("voter", {{"v", 1.0}})).attractive);
    for (double beta : {0.0, 0.5, 1.0}) {
      CHECK(check_attractive(build_model("glauber_ising", {{"beta", beta}})).attractive);
    }
    CHECK(check_attractive(build_model("pure_death", {})).attractive);
  }
  SUBCASE("antiferromagnetic glauber is not attractive") {
    const auto report = check_attractive(RateSpec(1, glauber_table(-0.5), "afm"));
    CHECK_FALSE(report.attractive);
    CHECK_FALSE(report.violations.empty());
  }
}

TEST_CASE("check_attractive agrees with a brute-force pair scan") {
  std::mt19937_64 rng(11);
  for (int radius : {0, 1, 2}) {
    for (int trial = 0; trial < 40; ++trial) {
      const RateSpec spec = trial % 2 ? spinmono::testing::random_spec(rng, radius)
                                      : spinmono::testing::random_attractive_spec(rng, radius);
      const auto report = check_attractive(spec);
      std::set<std::tuple<std::uint32_t, std::uint32_t>> got;
      for (const auto& v : report.violations) {
        CHECK(leq_bitwise(v.low.code, v.high.code, spec.width()));
        CHECK(v.low.center() == v.high.center());
        got.insert({v.low.code, v.high.code});
      }
      CHECK(got == brute_force_violations(spec));
      CHECK(report.attractive == got.empty());
      if (trial % 2 == 0) CHECK(report.attractive);
    }
  }
}

TEST_CASE("attractiveness is invariant under the global spin flip") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int radius = 1 + trial % 2;
    const RateSpec spec = trial % 3 == 0 ? spinmono::testing::random_attractive_spec(rng, radius)
                                         : spinmono::testing::random_spec(rng, radius);
    const RateSpec flipped = spin_flipped(spec);
    CHECK(check_attractive(spec).attractive == check_attractive(flipped).attractive);
    CHECK(check_attractive(flipped).violations.size() == check_attractive(spec).violations.size());
    CHECK(spin_flipped(flipped).table() == spec.table());
  }
}

TEST_CASE("uniformization_bound") {
  CHECK(uniformization_bound(build_model("contact", {{"lambda", 2.0}, {"delta", 1.0}})) == 5.0);
  CHECK(uniformization_bound(build_model("pure_death", {})) == 1.0);
  CHECK(uniformization_bound(build_model("voter", {{"v", 1.0}})) == 2.0);
  CHECK_THROWS_AS(uniformization_bound(RateSpec(1, std::vector<double>(8, 0.0), "zero")),
                  std::domain_error);
}

TEST_CASE("check_coupling_monotone") {
  const auto contact = build_model("contact", {{"lambda", 2.0}, {"delta", 1.0}});
  CHECK(check_coupling_monotone(contact, 5.0).monotone);
  CHECK(check_coupling_monotone(build_model("pure_death", {}), 1.0).monotone);
  CHECK_THROWS_AS(check_coupling_monotone(contact, 4.0), std::invalid_argument);

  SUBCASE("non-attractive tables yield a witness") {
    const auto bad = violating_table();
    const auto report = check_coupling_monotone(bad, uniformization_bound(bad));
    CHECK_FALSE(report.monotone);
    REQUIRE(report.violation);
    CHECK(report.p_low > report.p_high);
  }
}

TEST_CASE("attractive tables give a monotone flip rule at c_max = B + D") {
  std::mt19937_64 rng(99);
  for (int radius : {0, 1, 2}) {
    for (int trial = 0; trial < 50; ++trial) {
      const RateSpec spec = spinmono::testing::random_attractive_spec(rng, radius);
      if (spec.is_zero()) continue;
      const double c_max = uniformization_bound(spec);
      // Independent oracle: recompute p1 for every comparable pair by bits.
      bool oracle_ok = true;
      for (std::uint32_t p = 0; p < spec.pattern_count(); ++p) {
        for (std::uint32_t q = 0; q < spec.pattern_count(); ++q) {
          if (!leq_bitwise(p, q, spec.width())) continue;
          auto p1 = [&](std::uint32_t c) {
            const bool occ = (c >> radius) & 1u;
            return occ ? (c_max - spec.rate(c)) / c_max : spec.rate(c) / c_max;
          };
          if (p1(p) > p1(q)) oracle_ok = false;
        }
      }
      CHECK(oracle_ok);
      CHECK(check_coupling_monotone(spec, c_max).monotone);
    }
  }
}
