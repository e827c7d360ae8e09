#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "rsquad/catalog.hpp"
#include "rsquad/error.hpp"
#include "rsquad/rules.hpp"

using namespace rsquad;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Interval kUnit{0.0, 1.0};

CatalogEntry entry(const char* id, Interval iv = kUnit) { return parse_catalog_entry(id, iv); }

using Fn = std::function<double(double)>;

double rule(const Fn& f, const Fn& u, double a, double b, double t0, double x, double t1) {
  return (u(x) - u(a)) * f(t0) + (u(b) - u(x)) * f(t1);
}

}  // namespace

TEST_CASE("two-point rule value", "[rules]") {
  const auto f = entry("power:r=2");
  const auto u = entry("identity");
  const auto nodes = make_nodes(0.25, 0.5, 0.75, kUnit);
  CHECK_THAT(two_point_eval(f.map, u.map, nodes), WithinAbs(0.3125, 1e-16));
  const auto r = remainder(f.map, u.map, nodes);
  CHECK_THAT(r.q_value, WithinAbs(0.3125, 1e-16));
  CHECK_THAT(r.remainder, WithinAbs(1.0 / 48.0, 1e-12));
  CHECK(r.remainder == r.oracle.value - r.q_value);
}

TEST_CASE("rule against independent evaluation on a grid", "[rules]") {
  const auto f = entry("exp:rate=-1.5");
  const auto u = entry("power:r=0.5");
  const Fn fe = [](double t) { return std::exp(-1.5 * t); };
  const Fn ue = [](double t) { return std::sqrt(t); };
  for (int i = 0; i <= 10; ++i)
    for (int j = i; j <= 10; ++j)
      for (int k = 0; k <= 10; ++k) {
        const double t0 = i / 10.0, t1 = j / 10.0, x = k / 10.0;
        const auto nodes = make_nodes(t0, x, t1, kUnit);
        CHECK_THAT(two_point_eval(f.map, u.map, nodes), WithinAbs(rule(fe, ue, 0.0, 1.0, t0, x, t1), 1e-14));
      }
}

TEST_CASE("rule with a step integrator", "[rules]") {
  const auto f = entry("poly:1-3x+2x^3");
  const auto u = entry("step:points=0.5;left=0;right=1");
  const auto r = remainder(f.map, u.map, make_nodes(0.25, 0.5, 0.75, kUnit));
  CHECK(r.q_value == f.map(0.25));
  CHECK(r.oracle.value == f.map(0.5));
  // x just left of the jump moves the whole mass to t1
  const auto r2 = remainder(f.map, u.map, make_nodes(0.25, 0.49, 0.75, kUnit));
  CHECK(r2.q_value == f.map(0.75));
}

TEST_CASE("node ordering classes", "[rules]") {
  CHECK(make_nodes(0.2, 0.1, 0.5, kUnit).order() == NodeOrder::x_before);
  CHECK(make_nodes(0.2, 0.3, 0.5, kUnit).order() == NodeOrder::x_inside);
  CHECK(make_nodes(0.2, 0.2, 0.5, kUnit).order() == NodeOrder::x_inside);
  CHECK(make_nodes(0.2, 0.5, 0.5, kUnit).order() == NodeOrder::x_inside);
  CHECK(make_nodes(0.2, 0.9, 0.5, kUnit).order() == NodeOrder::x_after);
  CHECK(to_string(NodeOrder::x_inside) == "t0<=x<=t1");
  CHECK_THROWS_AS(make_nodes(0.6, 0.5, 0.4, kUnit), InvalidArgument);
  CHECK_THROWS_AS(make_nodes(-0.1, 0.5, 0.4, kUnit), InvalidArgument);
  CHECK_THROWS_AS(make_nodes(0.1, 1.5, 0.4, kUnit), InvalidArgument);
  CHECK_THROWS_AS(make_nodes(0.1, std::nan(""), 0.4, kUnit), InvalidArgument);
}

TEST_CASE("presets", "[rules]") {
  const Interval iv{2.0, 6.0};
  const auto trap = preset_nodes(parse_preset("trapezoid"), iv);
  CHECK((trap.t0 == 2.0 && trap.x == 4.0 && trap.t1 == 6.0));
  const auto trap_x = preset_nodes(parse_preset("trapezoid:3"), iv);
  CHECK(trap_x.x == 3.0);
  const auto mid = preset_nodes(parse_preset("midpoint"), iv);
  CHECK((mid.t0 == 3.0 && mid.x == 4.0 && mid.t1 == 5.0));
  const auto sym = preset_nodes(parse_preset("symmetric:2.5"), iv);
  CHECK((sym.t0 == 2.5 && sym.x == 4.0 && sym.t1 == 5.5));
  const auto half = preset_nodes(parse_preset("half-nodes:3"), iv);
  CHECK((half.t0 == 2.5 && half.x == 3.0 && half.t1 == 4.5));
  const auto quart = preset_nodes(parse_preset("quartile"), iv);
  CHECK((quart.t0 == 3.0 && quart.x == 4.0 && quart.t1 == 5.0));
  const auto rel = preset_nodes_relative(parse_preset("trapezoid:0.25"), iv);
  CHECK(rel.x == 3.0);
}

TEST_CASE("preset parsing", "[rules]") {
  const auto spec = parse_preset("midpoint:0.2,0.8");
  CHECK(spec.kind == PresetKind::midpoint);
  CHECK(spec.params == std::vector<double>{0.2, 0.8});
  CHECK(parse_preset(format_preset(spec)).params == spec.params);
  CHECK(format_preset(parse_preset("half-nodes")) == "half-nodes");
  CHECK_THROWS_AS(parse_preset("simpson"), InvalidArgument);
  CHECK_THROWS_AS(parse_preset("midpoint:0.2,x"), InvalidArgument);
  CHECK_THROWS_AS(preset_nodes(parse_preset("midpoint:0.6,0.8"), kUnit), InvalidArgument);
  CHECK_THROWS_AS(preset_nodes(parse_preset("symmetric:0.7"), kUnit), InvalidArgument);
  CHECK_THROWS_AS(preset_nodes(parse_preset("trapezoid:0.2,0.3"), kUnit), InvalidArgument);
}

TEST_CASE("composite half-node rule on t^2", "[rules]") {
  const auto f = entry("power:r=2");
  const auto u = entry("identity");
  for (int n : {1, 2, 4, 8, 16, 32}) {
    const auto c = composite_rule(f.map, u.map, kUnit, n, parse_preset("half-nodes"));
    REQUIRE(c.cells.size() == static_cast<std::size_t>(n));
    // each cell of width h contributes h^3/48
    CHECK_THAT(c.remainder_total, WithinRel(1.0 / (48.0 * n * n), 1e-9));
  }
}

TEST_CASE("composite rule on an uneven partition", "[rules]") {
  const auto f = entry("sine:freq=6.283185307179586");
  const auto u = entry("power:r=2");
  const Fn fe = [](double t) { return std::sin(6.283185307179586 * t); };
  const Fn ue = [](double t) { return t * t; };
  const std::vector<double> bp{0.0, 0.1, 0.35, 0.4, 0.9, 1.0};
  const auto c = composite_rule(f.map, u.map, bp, parse_preset("trapezoid:0.3"));
  double expected = 0.0;
  for (std::size_t i = 1; i < bp.size(); ++i) {
    const double a = bp[i - 1], b = bp[i];
    const double q = rule(fe, ue, a, b, a, a + 0.3 * (b - a), b);
    CHECK_THAT(c.cell_q[i - 1], WithinAbs(q, 1e-15));
    expected += q;
  }
  CHECK_THAT(c.q_total, WithinAbs(expected, 1e-14));
  // ∫ sin(2πt) 2t dt = -1/π
  CHECK_THAT(c.oracle.value, WithinAbs(-1.0 / 3.141592653589793, 1e-12));
  CHECK_THROWS_AS(composite_rule(f.map, u.map, std::vector<double>{0.0, 0.5, 0.5, 1.0}, parse_preset("trapezoid")),
                  InvalidArgument);
}
