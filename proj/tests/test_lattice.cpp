#include <doctest.h>

#include <random>
#include <stdexcept>

#include "spinmono/lattice.hpp"
#include "support.hpp"

using namespace spinmono;

namespace {

Configuration step_at(Site offset) { return make_initial(InitialCondition::step(offset)); }

}  // namespace

TEST_CASE("make_initial") {
  SUBCASE("step") {
    const auto c = make_initial(InitialCondition::step());
    CHECK(c.value(0) == 1);
    CHECK(c.value(1) == 0);
    CHECK(c.value(-1'000'000) == 1);
    CHECK(c.value(1'000'000) == 0);
  }
  SUBCASE("interval") {
    const auto c = make_initial(InitialCondition::interval(3));
    CHECK(c.value(-3) == 1);
    CHECK(c.value(-4) == 0);
    CHECK(c.value(0) == 1);
    CHECK(c.value(1) == 0);
    CHECK_THROWS_AS(make_initial(InitialCondition::interval(-1)), std::invalid_argument);
  }
  SUBCASE("custom equal to step") {
    const auto c = make_initial(InitialCondition::custom(1, 0, "10", 0));
    CHECK(c == make_initial(InitialCondition::step()));
  }
  SUBCASE("window restriction keeps values inside") {
    const auto c = make_initial(InitialCondition::interval(2), Window{-5, 5});
    CHECK(c.window() == Window{-5, 5});
    for (Site x = -8; x <= 8; ++x) {
      const Spin expected = (x >= -2 && x <= 0) ? 1 : 0;
      CHECK(c.value(x) == expected);
    }
  }
  SUBCASE("narrow window freezes the cut spins as tails") {
    const auto c = make_initial(InitialCondition::interval(8), Window{-3, 3});
    CHECK(c.left_tail() == 1);
    CHECK(c == make_initial(InitialCondition::step(), Window{-3, 3}));
  }
  CHECK(InitialCondition::step().describe() == "step(0)");
  CHECK(InitialCondition::interval(3).describe() == "interval(3)");
}

TEST_CASE("suffix") {
  const auto step = make_initial(InitialCondition::step());
  CHECK(suffix(step, 0, 3).to_string() == "100");
  CHECK(suffix(step, 1, 3).to_string() == "000");
  CHECK(suffix(make_initial(InitialCondition::interval(2)), -2, 4).to_string() == "1110");
  CHECK(suffix(step, 0, 3).code() == 0b001u);
  CHECK_THROWS_AS(suffix(step, 0, 0), std::invalid_argument);
}

TEST_CASE("flip") {
  const auto step = make_initial(InitialCondition::step());
  const auto a = step.flip(0);
  CHECK(a.value(0) == 0);
  for (Site x : {-3, -2, -1, 1, 2, 3}) CHECK(a.value(x) == step.value(x));
  CHECK(step.flip(1).value(1) == 1);
  CHECK(a.flip(0) == step);
  CHECK_THROWS_AS(step.flip(40), std::out_of_range);
}

TEST_CASE("local_pattern") {
  const auto step = make_initial(InitialCondition::step());
  CHECK(local_pattern(step, 0, 1).to_string() == "110");
  CHECK(local_pattern(step, 5, 1).to_string() == "000");
  CHECK(local_pattern(step, -5, 1).to_string() == "111");
  CHECK(local_pattern(step, 1, 2).to_string() == "11000");
}

TEST_CASE("pattern_code matches a site-by-site read") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Window w{-70 + trial, 90};
    const auto c = spinmono::testing::random_config(rng, w);
    for (int radius : {0, 1, 2, 3}) {
      for (Site x = w.lo - 5; x <= w.hi + 5; ++x) {
        std::uint32_t code = 0;
        for (int i = 0; i <= 2 * radius; ++i) code |= std::uint32_t{c.value(x - radius + i)} << i;
        REQUIRE(c.pattern_code(x, radius) == code);
      }
    }
  }
}

TEST_CASE("dominates_pointwise") {
  const auto step = step_at(0);
  const auto lower = make_initial(InitialCondition::custom(1, 0, "0", 0));
  CHECK(dominates_pointwise(step, lower));
  CHECK(dominates_pointwise(step, step));
  CHECK_FALSE(dominates_pointwise(lower, step));
  CHECK(first_order_violation(lower, step) == Site{0});
  CHECK_FALSE(first_order_violation(step, lower).has_value());
  CHECK(dominates_pointwise(step, make_initial(InitialCondition::interval(4))));
}

TEST_CASE("pointwise order is a partial order") {
  std::mt19937_64 rng(17);
  const Window w{-10, 100};
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = spinmono::testing::random_config(rng, w);
    const auto b = spinmono::testing::random_below(rng, a);
    const auto c = spinmono::testing::random_below(rng, b);
    CHECK(dominates_pointwise(a, a));
    CHECK(dominates_pointwise(a, b));
    CHECK(dominates_pointwise(b, c));
    CHECK(dominates_pointwise(a, c));
    if (dominates_pointwise(b, a)) CHECK(a == b);
  }
}

TEST_CASE("shifted moves values and window together") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = spinmono::testing::random_config(rng, Window{-20, 30});
    for (Site k : {-3, -1, 0, 2, 65}) {
      const auto s = c.shifted(k);
      CHECK(s.window() == c.window().shifted(-k));
      for (Site x = -40; x <= 40; ++x) REQUIRE(s.value(x) == c.value(x + k));
      CHECK(s.shifted(-k) == c);
    }
  }
  CHECK(step_at(0).shifted(1) == step_at(-1));
}

TEST_CASE("widened and restricted") {
  const auto step = step_at(0);
  const auto wide = step.widened(Window{-100, 100});
  CHECK(wide == step);
  CHECK(wide.window() == Window{-100, 100});
  CHECK_THROWS_AS(wide.widened(Window{-5, 5}), std::invalid_argument);
  const auto narrow = wide.restricted(Window{3, 8});
  CHECK(narrow.left_tail() == 0);
  CHECK(narrow.core_string() == "000000");
  CHECK(hull(Window{0, 2}, Window{5, 9}) == Window{0, 9});
}

TEST_CASE("from_bits and count_ones") {
  const auto c = Configuration::from_bits(0, -2, "10110", 0);
  CHECK(c.window() == Window{-2, 2});
  CHECK(c.core_string() == "10110");
  CHECK(c.count_ones() == 3);
  CHECK_THROWS_AS(Configuration::from_bits(0, 0, "1a", 0), std::invalid_argument);
}
