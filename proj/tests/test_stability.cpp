#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wpdkit/examples.hpp"
#include "wpdkit/stability.hpp"

using namespace wpdkit;

TEST_CASE("judge") {
  CHECK(judge(Bound::point(1), Bound::point(1)) == Verdict::holds);
  CHECK(judge(Bound::point(1), Bound::point(1 - 1e-10)) == Verdict::holds);
  CHECK(judge(Bound::point(2), Bound::point(1)) == Verdict::violated);
  CHECK(judge({0, 2}, Bound::point(1)) == Verdict::holds_vacuously);
  CHECK(judge({0, 1}, {0.5, 3}) == Verdict::holds_vacuously);
  CHECK(judge({0, 0.5}, {0.5, 3}) == Verdict::holds);
  CHECK(to_string(Verdict::holds_vacuously) == "HOLDS-VACUOUSLY");
}

TEST_CASE("stability_report examples") {
  const auto x = examples::ums_x();
  const auto same = stability_report(x, x, 0, kInfinity);
  REQUIRE(same.checks.size() == 3);
  for (const auto& c : same.checks) {
    CHECK(c.verdict == Verdict::holds);
    CHECK(c.lhs.upper == 0.0);
    CHECK(c.rhs.upper == 0.0);
  }

  const auto ums = stability_report(x, examples::ums_y(), 0, kInfinity);
  for (const auto& c : ums.checks) {
    CHECK(c.verdict == Verdict::holds);
    CHECK(c.lhs.exact());
    CHECK(c.rhs.exact());
  }
  CHECK(ums.checks[1].lhs.upper > 0.0);

  const auto two = stability_report(x, examples::ums_y(), 0, 2.0);
  REQUIRE(two.checks.size() == 2);
  CHECK_FALSE(two.violated());
  CHECK(two.checks[1].rhs.lower <= two.checks[1].rhs.upper);

  CHECK_THROWS_AS(stability_report(x, x, 0, 0.5), ValidationError);
  StabilityOptions tight;
  tight.exact_cells = 4;
  CHECK_THROWS_AS(stability_report(x, x, 0, kInfinity, tight), CapExceededError);
}

TEST_CASE("stability_report on random spaces") {
  std::mt19937_64 rng(53);
  int violations = 0;
  for (int t = 0; t < 50; ++t) {
    const auto x = MMSpace::uniform(oracle::random_planar(rng, 4));
    const auto y = MMSpace::uniform(oracle::random_planar(rng, 4));
    const auto rep = stability_report(x, y, 1, kInfinity);
    violations += rep.violated();
    for (const auto& c : rep.checks) CHECK(c.verdict == Verdict::holds);
  }
  CHECK(violations == 0);
}
