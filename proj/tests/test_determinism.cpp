#include <doctest.h>

#include <cmath>

#include "lmn/harness.hpp"

using namespace lmn::harness;

namespace {

ConvergenceTable run(const char* test, const char* variant, bool parallel) {
  RunConfig cfg;
  cfg.test = test;
  cfg.variant = variant;
  cfg.levels = {3};
  cfg.t_end = 0.1;
  cfg.parallel = parallel;
  return run_case(cfg);
}

}  // namespace

TEST_CASE("serial reruns are bitwise identical") {
  for (const char* test : {"test1_euler", "test2_ns"}) {
    CAPTURE(test);
    const auto a = run(test, "lader", false);
    const auto b = run(test, "lader", false);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(a.rows[0].err_pi == b.rows[0].err_pi);
    CHECK(a.rows[0].err_wu == b.rows[0].err_wu);
    CHECK(a.rows[0].steps == b.rows[0].steps);
  }
}

TEST_CASE("parallel runs match serial runs") {
  for (const char* test : {"test1_euler", "test2_ns"}) {
    for (const char* variant : {"order1", "lader"}) {
      CAPTURE(test);
      CAPTURE(variant);
      const auto s = run(test, variant, false);
      const auto p = run(test, variant, true);
      REQUIRE(s.ok());
      REQUIRE(p.ok());
      CHECK(std::abs(s.rows[0].err_pi - p.rows[0].err_pi) <= 1e-13 * s.rows[0].err_pi + 1e-15);
      CHECK(std::abs(s.rows[0].err_wu - p.rows[0].err_wu) <= 1e-13 * s.rows[0].err_wu + 1e-15);
      CHECK(s.rows[0].steps == p.rows[0].steps);
    }
  }
}
