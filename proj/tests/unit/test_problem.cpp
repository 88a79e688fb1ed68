#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "fracnls/errors.hpp"
#include "fracnls/problem.hpp"
#include "oracles.hpp"

using namespace fracnls;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const HypothesisCheck& check(const ValidationReport& r, const std::string& name) {
  const HypothesisCheck* c = r.find(name);
  REQUIRE(c != nullptr);
  return *c;
}

Nonlinearity cubic_table(double top, int nodes) {
  std::vector<double> xi, f, df;
  for (int i = 0; i < nodes; ++i) {
    const double x = top * i / (nodes - 1);
    xi.push_back(x);
    f.push_back(x * x * x);
    df.push_back(3 * x * x);
  }
  return Nonlinearity::tabulated(xi, f, df, 4.0, 3.5);
}

}  // namespace

TEST_CASE("power nonlinearity: f, f', F and the (f2) equality case") {
  const Nonlinearity f = Nonlinearity::power(3.0, 3.5);
  CHECK(f.kind() == Nonlinearity::Kind::power);
  CHECK(f.theta() == 4.0);
  CHECK(f.f(-2.0) == 0.0);
  CHECK(f.F(-2.0) == 0.0);
  CHECK(f.f(2.0) == 8.0);
  CHECK(f.df(2.0) == 12.0);
  CHECK(f.F(2.0) == 4.0);
  for (double x : {1e-5, 0.3, 1.0, 7.0, 900.0}) CHECK_THAT(f.theta() * f.F(x), WithinRel(x * f.f(x), 1e-12));
  CHECK_THROWS_AS(Nonlinearity::power(0.0, 1.0), ConfigError);
}

TEST_CASE("validate: cubic power passes every hypothesis") {
  const ValidationReport r = validate_nonlinearity(Nonlinearity::power(3.0, 3.5), 400);
  CHECK(r.passed());
  CHECK(r.first_failure() == nullptr);
  for (const char* h : {"f0", "f1", "f2", "f3"}) CHECK(check(r, h).passed);
}

TEST_CASE("validate: p = 1 fails (f1)") {
  const ValidationReport r = validate_nonlinearity(Nonlinearity::power(1.0, 1.5), 400);
  CHECK_FALSE(r.passed());
  REQUIRE(r.first_failure() != nullptr);
  CHECK(r.first_failure()->name == "f1");
}

TEST_CASE("validate: xi^2 with theta = 4 fails (f2) at small xi") {
  // 4 F(xi) = (4/3) xi^3 > xi f(xi) = xi^3 at every xi > 0, in particular at xi = 1.
  const Nonlinearity f = Nonlinearity::power(2.0, 3.5, 4.0);
  CHECK_THAT(4.0 * f.F(1.0), WithinRel(4.0 / 3.0, 1e-15));
  const ValidationReport r = validate_nonlinearity(f, 400);
  const HypothesisCheck& f2 = check(r, "f2");
  CHECK_FALSE(f2.passed);
  CHECK(f2.at > 0.0);
  CHECK(check(r, "f1").passed);
}

TEST_CASE("validate: (f3) needs p0 + 1 > theta and decay of f / xi^p0") {
  CHECK_FALSE(check(validate_nonlinearity(Nonlinearity::power(3.0, 3.0)), "f3").passed);
  CHECK_FALSE(check(validate_nonlinearity(Nonlinearity::power(3.0, 2.5)), "f3").passed);
  CHECK(check(validate_nonlinearity(Nonlinearity::power(3.0, 3.2)), "f3").passed);
}

TEST_CASE("validate: theta <= 2 fails (f2)") {
  CHECK_FALSE(check(validate_nonlinearity(Nonlinearity::power(3.0, 3.5, 2.0)), "f2").passed);
}

TEST_CASE("validate: too few samples is rejected") {
  CHECK_THROWS_AS(validate_nonlinearity(Nonlinearity::power(3.0, 3.5), 99), ConfigError);
}

TEST_CASE("growth bound: p = 3, p0 = 3, eps = 0.1 gives C close to 1") {
  const GrowthBound gb = growth_bound_check(Nonlinearity::power(3.0, 3.0), 0.1, 400);
  // sup over the sample of (xi^3 - 0.1 xi) / xi^3 = 1 - 0.1 / xi_max^2.
  CHECK_THAT(gb.c_eps, WithinAbs(1.0 - 0.1 / 1e6, 1e-12));
  CHECK(gb.argmax_xi == Catch::Approx(1e3));
  CHECK(gb.primitive_bound_holds);
  CHECK(gb.bounded);
}

TEST_CASE("growth bound: large eps leaves only the large-xi regime") {
  const GrowthBound gb = growth_bound_check(Nonlinearity::power(3.0, 3.5), 10.0, 400);
  CHECK(gb.argmax_xi > 1.0);
  CHECK(gb.primitive_bound_holds);
  CHECK(gb.bounded);
  // A sampled constant: on a 5x denser sample it may only be off by the sampling resolution.
  const Nonlinearity f = Nonlinearity::power(3.0, 3.5);
  for (int i = 0; i <= 2000; ++i) {
    const double x = std::pow(10.0, -6.0 + 9.0 * i / 2000.0);
    CHECK(f.f(x) <= 10.0 * x + gb.c_eps * std::pow(x, 3.5) * (1 + 1e-2));
  }
}

TEST_CASE("growth bound: growing ratio is reported unbounded") {
  const GrowthBound gb = growth_bound_check(Nonlinearity::power(4.0, 3.5, 5.0), 0.1, 400);
  CHECK_FALSE(gb.bounded);
}

TEST_CASE("tabulated cubic reproduces the power law exactly, including the tail") {
  const Nonlinearity t = cubic_table(5.0, 11);
  const Nonlinearity p = Nonlinearity::power(3.0, 3.5);
  for (double x : {0.0, 0.01, 0.37, 1.0, 2.45, 4.99, 5.0, 7.5, 40.0}) {
    CHECK_THAT(t.f(x), WithinAbs(p.f(x), 1e-12 * std::max(1.0, p.f(x))));
    CHECK_THAT(t.df(x), WithinAbs(p.df(x), 1e-12 * std::max(1.0, p.df(x))));
    CHECK_THAT(t.F(x), WithinAbs(p.F(x), 1e-10 * std::max(1.0, p.F(x))));
  }
  CHECK(t.f(-1.0) == 0.0);
  INFO(validate_nonlinearity(t).summary());
  CHECK(validate_nonlinearity(t).passed());
}

TEST_CASE("tabulated F is the integral of tabulated f") {
  // f = xi^3 / (1 + xi): f / xi increasing, tail exponent 2 at the last node.
  std::vector<double> xi, f, df;
  for (int i = 0; i <= 40; ++i) {
    const double x = 0.25 * i;
    xi.push_back(x);
    f.push_back(x * x * x / (1 + x));
    df.push_back((3 * x * x * (1 + x) - x * x * x) / ((1 + x) * (1 + x)));
  }
  const Nonlinearity t = Nonlinearity::tabulated(xi, f, df, 3.0, 2.5);
  for (double x : {0.1, 1.3, 4.0, 9.9, 10.0, 12.0}) {
    const double ref = oracle::simpson([&](double s) { return t.f(s); }, 0.0, x, 4000);
    CHECK_THAT(t.F(x), WithinRel(ref, 1e-10));
  }
}

TEST_CASE("tabulated nonlinearity: malformed tables rejected") {
  CHECK_THROWS_AS(Nonlinearity::tabulated({0.0}, {0.0}, {0.0}, 4, 3.5), ConfigError);
  CHECK_THROWS_AS(Nonlinearity::tabulated({0.1, 1.0}, {0.0, 1.0}, {0, 3}, 4, 3.5), ConfigError);
  CHECK_THROWS_AS(Nonlinearity::tabulated({0.0, 1.0}, {0.5, 1.0}, {0, 3}, 4, 3.5), ConfigError);
  CHECK_THROWS_AS(Nonlinearity::tabulated({0.0, 1.0, 0.5}, {0, 1, 2}, {0, 3, 3}, 4, 3.5), ConfigError);
  CHECK_THROWS_AS(Nonlinearity::tabulated({0.0, 1.0}, {0.0, 1.0}, {0.0}, 4, 3.5), ConfigError);
}

TEST_CASE("potential: constant V = 1 passes (V1), (V3) and radial monotonicity") {
  const Grid g(20.0, 256);
  const ValidationReport r = validate_potential(Potential::constant(1.0), g);
  CHECK(r.passed());
  CHECK(check(r, "V1").passed);
  CHECK(check(r, "V3").passed);
  CHECK(check(r, "V5").passed);
  CHECK(r.find("V4") == nullptr);
}

TEST_CASE("potential: 2 - 1/(1+t^2) passes (V1), (V3), (V4), (V5)") {
  const Grid g(20.0, 1024);
  const Potential V = Potential::from_expression("2 - 1/(1+t^2)", 1.0, 2.0, {true, true});
  const ValidationReport r = validate_potential(V, g);
  INFO(r.summary());
  for (const char* h : {"V1", "V2", "V3", "V4", "V5"}) CHECK(check(r, h).passed);
}

TEST_CASE("potential: V = -1 fails (V1)") {
  const Grid g(20.0, 256);
  const ValidationReport r = validate_potential(Potential::from_expression("-1", 1.0, -1.0, {}), g);
  CHECK_FALSE(check(r, "V1").passed);
  CHECK(r.first_failure()->name == "V1");
  CHECK_FALSE(check(validate_potential(Potential::constant(-1.0), g), "V1").passed);
}

TEST_CASE("potential: flag violations are named") {
  const Grid g(10.0, 256);
  // Not radially increasing.
  const Potential bump = Potential::from_expression("1 + exp(-t^2)", 1.0, 1.0, {true, false});
  CHECK_FALSE(check(validate_potential(bump, g), "V5").passed);
  // Above V_inf somewhere.
  const Potential over = Potential::from_expression("1 + exp(-t^2)", 1.0, 1.0, {false, true});
  CHECK_FALSE(check(validate_potential(over, g), "V4").passed);
  // Identically V_inf is not strictly below anywhere.
  CHECK_FALSE(check(validate_potential(Potential::constant(1.0, {false, true}), g), "V4").passed);
  // Not even.
  const Potential skew = Potential::from_expression("2 + tanh(t)", 1.0, 3.0, {true, false});
  CHECK_FALSE(check(validate_potential(skew, g), "V5").passed);
  // Declared limit is not the observed one.
  const Potential wrong = Potential::from_expression("2 - 1/(1+t^2)", 1.0, 3.0, {});
  CHECK_FALSE(check(validate_potential(wrong, g), "V3").passed);
}

TEST_CASE("potential: table interpolation, shift and limit") {
  const Potential V = Potential::from_table({-1.0, 0.0, 2.0}, {3.0, 1.0, 2.0}, 1.0, 2.5, {});
  CHECK(V(-5.0) == 3.0);
  CHECK(V(-0.5) == 2.0);
  CHECK(V(1.0) == 1.5);
  CHECK(V(9.0) == 2.0);
  const Potential W = V.shifted(0.25);
  CHECK(W(1.0) == 1.75);
  CHECK(W.V0() == 1.25);
  CHECK(W.V_inf() == 2.75);
  CHECK(W.limit().is_constant());
  CHECK(W.limit()(123.0) == 2.75);
  CHECK_THROWS_AS(Potential::from_table({0.0}, {1.0}, 1.0, 1.0, {}), ConfigError);
  CHECK_THROWS_AS(Potential::from_table({0.0, 0.0}, {1.0, 1.0}, 1.0, 1.0, {}), ConfigError);
}

TEST_CASE("problem: validate names the failing hypothesis") {
  const Grid g(20.0, 256);
  const Problem ok(FractionalOrder(0.75), g, Nonlinearity::power(3.0, 3.5), Potential::constant(1.0));
  CHECK_NOTHROW(ok.validate());
  CHECK_THROWS_WITH(ok.with_nonlinearity(Nonlinearity::power(1.0, 1.5)).validate(), ContainsSubstring("(f1)"));
  CHECK_THROWS_WITH(ok.with_potential(Potential::constant(-1.0)).validate(), ContainsSubstring("(V1)"));
}

TEST_CASE("problem: modifiers and the limit problem") {
  const Grid g(20.0, 256);
  const Potential V = Potential::from_expression("2 - 1/(1+t^2)", 1.0, 2.0, {true, true});
  const Problem p(FractionalOrder(0.75), g, Nonlinearity::power(3.0, 3.5), V);
  CHECK(p.V_values().size() == 256);
  CHECK(p.V_values()[128] == 1.0);
  CHECK(p.symbol()[0] == 0.0);
  const Problem lim = p.limit_problem();
  for (double v : lim.V_values()) CHECK(v == 2.0);
  const Problem fine = p.with_grid(Grid(20.0, 512));
  CHECK(fine.V_values().size() == 512);
  CHECK(fine.symbol().size() == 512);
  CHECK(p.with_alpha(FractionalOrder(0.9)).alpha().value() == 0.9);
}
