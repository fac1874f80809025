#include <doctest.h>

#include "lmn/cases.hpp"
#include "lmn/source_check.hpp"

using namespace lmn;
using namespace lmn::harness;

namespace {

SourceReport check(const std::string& name, SourceVariant v) {
  return std::visit([](const auto& c) { return validate_source_terms(c); },
                    manufactured_case(name, v));
}

}  // namespace

TEST_CASE("derived sources satisfy every governing equation") {
  for (const char* name : {"test1_euler", "test2_ns", "A1", "A2", "A3"}) {
    CAPTURE(name);
    const auto r = check(name, SourceVariant::derived);
    for (const auto& e : r.equations) {
      CAPTURE(e.equation);
      CHECK(e.relative <= 1e-5);
    }
    CHECK(r.passed());
    CHECK_NOTHROW(r.require());
  }
}

TEST_CASE("typeset sources are flagged") {
  const auto t1 = check("test1_euler", SourceVariant::printed);
  CHECK_FALSE(t1.passed());
  CHECK_THROWS_AS(t1.require(), SourceInconsistencyError);
  bool x_fails = false, z_fails = false;
  for (const auto& e : t1.equations) {
    if (e.equation == "momentum x") x_fails = e.relative > 1e-5;
    if (e.equation == "momentum z") z_fails = e.relative > 1e-5;
  }
  CHECK(x_fails);
  CHECK(z_fails);
  CHECK_FALSE(check("A1", SourceVariant::printed).passed());
  CHECK_FALSE(check("test2_ns", SourceVariant::printed).passed());
}

TEST_CASE("case registry values") {
  const auto t1 = make_case_3d("test1_euler");
  CHECK(t1.params.mu == 0.0);
  CHECK(t1.rho(Vec3::Zero(), 0.0) == doctest::Approx(2.0));
  CHECK((t1.u(Vec3::Zero(), 0.0) - Vec3(0.5, 0.0, 0.0)).norm() < 1e-15);
  const auto t2 = make_case_3d("test2_ns");
  CHECK(t2.params.mu == doctest::Approx(1e-2));
  CHECK((t2.u(Vec3(0.3, 0.6, 0.9), 0.0) - Vec3(1.0, 1.0, -1.0)).norm() < 1e-15);
  // The state equation reproduces the stated density.
  for (const auto* c : {&t1, &t2}) {
    const Vec3 x(0.2, 0.7, 0.4);
    const double rho = c->params.background_pressure(0.3) /
                       (c->params.gas_constant * c->theta(x, 0.3) * c->y(x, 0.3));
    CHECK(rho == doctest::Approx(c->rho(x, 0.3)));
  }
  CHECK_THROWS_AS(make_case_3d("test3"), std::invalid_argument);
  CHECK_THROWS_AS(manufactured_case("B1"), std::invalid_argument);
}
