#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rsquad/catalog.hpp"
#include "rsquad/error.hpp"

using namespace rsquad;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Interval kUnit{0.0, 1.0};

const std::vector<std::string> kUnitCatalog{
    "power:r=0.5",
    "power:r=0.25",
    "power:r=2",
    "poly:1x",
    "identity",
    "poly:1-3x+2x^3",
    "const:c=2",
    "sine:freq=6.283185307179586",
    "exp:rate=-1.5",
    "pwl:knots=0,0.5,1;values=0,1,0",
    "step:points=0;left=-1;right=0",
    "step:points=0.5;left=0;right=1",
    "step:points=0,1;left=1,0;right=0,1",
    "ubump:n=1",
    "ubump:n=2",
};

}  // namespace

TEST_CASE("power map evaluation and Hoelder pair", "[catalog]") {
  const auto e = parse_catalog_entry("power:r=0.5", kUnit);
  CHECK(e.map(0.25) == 0.5);
  REQUIRE(e.profile.hoelder);
  CHECK(e.profile.hoelder->constant == 1.0);
  CHECK(e.profile.hoelder->order == 0.5);
  CHECK_FALSE(e.profile.lipschitz);
  CHECK(e.profile.monotone == Monotonicity::increasing);
}

TEST_CASE("identity is 1-Lipschitz and increasing", "[catalog]") {
  const auto e = parse_catalog_entry("poly:coeffs=0,1", kUnit);
  REQUIRE(e.profile.lipschitz);
  CHECK(*e.profile.lipschitz == 1.0);
  CHECK(e.profile.hoelder_pair()->order == 1.0);
  CHECK(e.profile.monotone == Monotonicity::increasing);
  CHECK(e.profile.variation_rule == VariationRule::monotone_increment);
}

TEST_CASE("step map stores one-sided values at its jumps", "[catalog]") {
  const auto e = parse_catalog_entry("step:points=0;left=-1;right=0", kUnit);
  CHECK(e.map(0.0) == -1.0);
  CHECK(e.map(0.5) == 0.0);
  CHECK(e.map(1.0) == 0.0);
  CHECK(e.map.right_limit(0.0) == 0.0);
  CHECK(e.map.discontinuities() == std::vector<double>{0.0});
  CHECK(e.map.jumps_from_right(0.0));
  CHECK_FALSE(e.map.jumps_from_left(0.0));
  CHECK(e.map.derivative_order_available() == 0);
  CHECK_FALSE(e.profile.hoelder_pair());
}

TEST_CASE("jump at the right end takes the right value at the point", "[catalog]") {
  const auto e = parse_catalog_entry("step:points=1;left=0;right=1", kUnit);
  CHECK(e.map(0.999) == 0.0);
  CHECK(e.map(1.0) == 1.0);
  CHECK(e.map.left_limit(1.0) == 0.0);
  CHECK(e.map.jumps_from_left(1.0));
}

TEST_CASE("interior jump uses the at-value when given", "[catalog]") {
  const auto plain = parse_catalog_entry("step:points=0.5;left=0;right=1", kUnit);
  CHECK(plain.map(0.5) == 1.0);
  const auto with_at = parse_catalog_entry("step:points=0.5;left=0;right=1;at=0.25", kUnit);
  CHECK(with_at.map(0.5) == 0.25);
  CHECK(with_at.map.left_limit(0.5) == 0.0);
  CHECK(with_at.map.right_limit(0.5) == 1.0);
}

TEST_CASE("sine evaluation", "[catalog]") {
  const Interval period{0.0, 2.0 * std::numbers::pi};
  const auto e = parse_catalog_entry("sine:scale=1;freq=1", period);
  CHECK_THAT(e.map(std::numbers::pi / 2.0), WithinAbs(1.0, 1e-15));
  CHECK(*e.profile.lipschitz == 1.0);
  CHECK(e.map.turning_points(period.lo, period.hi).size() == 2);
}

TEST_CASE("polynomial shorthand", "[catalog]") {
  const auto e = parse_catalog_entry("poly:1+2x^2", Interval{-3.0, 3.0});
  CHECK(e.map(2.0) == 9.0);
  CHECK(e.map.derivative(1, 2.0) == 8.0);
  CHECK(e.map.derivative(2, -1.0) == 4.0);
  CHECK(e.map.turning_points(-3.0, 3.0) == std::vector<double>{0.0});
  CHECK(*e.profile.lipschitz == 12.0);
}

TEST_CASE("piecewise-linear rise and fall", "[catalog]") {
  const auto e = parse_catalog_entry("pwl:knots=0,0.5,1;values=0,1,0", kUnit);
  CHECK(e.map(0.25) == 0.5);
  CHECK(e.map(0.5) == 1.0);
  CHECK(e.map(0.75) == 0.5);
  CHECK(*e.profile.lipschitz == 2.0);
  CHECK_FALSE(e.profile.monotone);
}

TEST_CASE("class markers for the bump entries", "[catalog]") {
  for (int n : {1, 2}) {
    const auto e = parse_catalog_entry("ubump:n=" + std::to_string(n), kUnit);
    REQUIRE(e.profile.up_class);
    CHECK(e.profile.up_class->order == n);
    CHECK(std::abs(e.map.derivative(n, 0.0)) <= 1e-12);
    CHECK(std::abs(e.map.derivative(n, 1.0)) <= 1e-12);
    for (int i = 0; i < 100; ++i) CHECK(e.map.derivative(n, (i + 0.5) / 100.0) > 0.0);
    CHECK(e.map(0.0) > 0.0);
  }
  CHECK_FALSE(parse_catalog_entry("power:r=2", kUnit).profile.up_class);
}

TEST_CASE("declared metadata survives sampling", "[catalog]") {
  for (const auto& id : kUnitCatalog) {
    INFO(id);
    const auto e = parse_catalog_entry(id, kUnit);
    const auto audit = audit_profile(e);
    for (const auto& p : audit.problems) UNSCOPED_INFO(p);
    CHECK(audit.ok());
    CHECK(audit.worst_hoelder_ratio <= 1.0 + 1e-9);
  }
}

TEST_CASE("derivatives agree with central differences", "[catalog]") {
  const auto e = parse_catalog_entry("exp:scale=2;rate=0.7", Interval{-1.0, 2.0});
  for (int i = 1; i < 100; ++i) {
    const double t = -1.0 + 3.0 * i / 100.0;
    const double h = 1e-5;
    const double fd = (e.map(t + h) - e.map(t - h)) / (2.0 * h);
    CHECK_THAT(e.map.derivative(1, t), WithinRel(fd, 1e-6));
  }
}

TEST_CASE("Hoelder pair at a lower order", "[catalog]") {
  const auto e = parse_catalog_entry("identity", Interval{0.0, 4.0});
  const auto h = e.profile.hoelder_at_order(0.5, 4.0);
  REQUIRE(h);
  CHECK(h->order == 0.5);
  CHECK_THAT(h->constant, WithinRel(2.0, 1e-15));
  CHECK_FALSE(parse_catalog_entry("power:r=0.5", kUnit).profile.hoelder_at_order(0.75, 1.0));
}

TEST_CASE("invalid catalog input", "[catalog]") {
  CHECK_THROWS_AS(parse_catalog_entry("step:points=0.5,0.2;left=0,1;right=1,2", kUnit), InvalidArgument);
  CHECK_THROWS_AS(parse_catalog_entry("step:points=0.2,0.5;left=0,3;right=1,2", kUnit), InvalidArgument);
  CHECK_THROWS_AS(parse_catalog_entry("step:points=2;left=0;right=1", kUnit), InvalidArgument);
  CHECK_THROWS_AS(parse_catalog_entry("gamma:k=1", kUnit), InvalidArgument);
  CHECK_THROWS_AS(parse_catalog_entry("power:r=0.5;bogus=1", kUnit), InvalidArgument);
  CHECK_THROWS_AS(parse_catalog_entry("power:r=0.5", Interval{-1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(parse_catalog_entry("identity", Interval{1.0, 1.0}), InvalidArgument);
  const auto e = parse_catalog_entry("identity", kUnit);
  CHECK_THROWS_AS(e.map(1.5), InvalidArgument);
  CHECK_THROWS_AS(e.map.derivative(-1, 0.5), InvalidArgument);
}

TEST_CASE("canonical ids", "[catalog]") {
  CHECK(make_catalog_entry(kUnit, PowerMap{0.5, 1.0}).id == "power:r=0.5");
  CHECK(parse_catalog_entry("power:r=0.5", kUnit).id == "power:r=0.5");
}
