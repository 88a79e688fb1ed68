#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fracnls/energy.hpp"
#include "fracnls/errors.hpp"
#include "fracnls/rearrange.hpp"
#include "fracnls/solver.hpp"
#include "oracles.hpp"

using namespace fracnls;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Potential bowl_potential() { return Potential::from_expression("2 - 1/(1+t^2)", 1.0, 2.0, {true, true}); }

Problem canonical(std::size_t n = 1024, Potential V = Potential::constant(1.0)) {
  return Problem(FractionalOrder(0.75), Grid(20.0, n), Nonlinearity::power(3.0, 3.5), std::move(V));
}

SolverConfig no_limit() {
  SolverConfig cfg;
  cfg.compute_c_infinity = false;
  return cfg;
}

}  // namespace

TEST_CASE("ground state: canonical problem against an independent fixed-point oracle") {
  const Problem p = canonical(1024);
  const GroundStateReport r = ground_state(p, no_limit());
  REQUIRE(r.converged);
  CHECK(r.residual <= 1e-6);
  CHECK(r.c > 0.0);
  CHECK(r.nonneg_violation <= 1e-6);
  CHECK(r.symmetry_defect <= 1e-6);

  const auto fine = oracle::petviashvili_cubic(0.75, 1.0, 20.0, 4096);
  REQUIRE(fine.residual < 1e-10);
  CHECK_THAT(r.c, WithinRel(fine.c, 1e-4));

  // Same grid: the two methods solve the same discrete equations.
  const auto same = oracle::petviashvili_cubic(0.75, 1.0, 20.0, 1024);
  CHECK_THAT(r.c, WithinRel(same.c, 1e-8));
  double diff = 0.0, top = 0.0;
  for (std::size_t j = 0; j < same.u.size(); ++j) {
    diff = std::max(diff, std::abs(r.u[j] - same.u[j]));
    top = std::max(top, std::abs(same.u[j]));
  }
  CHECK(diff <= 1e-5 * top);
}

TEST_CASE("ground state: report invariants") {
  const Problem p = canonical(512, bowl_potential());
  const GroundStateReport r = ground_state(p, SolverConfig{});
  REQUIRE(r.converged);
  CHECK(r.residual <= 1e-6);
  CHECK_THAT(r.c, WithinRel(evaluate_I(r.u, p).total, 1e-12));
  CHECK_THAT(r.energy.total, WithinRel(r.c, 1e-12));
  CHECK_THAT(r.residual, WithinRel(weak_residual_norm(r.u, p), 1e-9));
  REQUIRE(!r.level_history.empty());
  for (std::size_t k = 1; k < r.level_history.size(); ++k) {
    CHECK(r.level_history[k] <= r.level_history[k - 1] + 1e-12 * std::abs(r.level_history[k - 1]));
  }
  CHECK_THAT(r.level_history.back(), WithinRel(r.c, 1e-12));
  CHECK(std::isfinite(r.c_infinity));
  CHECK(r.c_infinity > r.c);
  CHECK(std::abs(nehari_functional(r.u, p)) <= 1e-10 * x_norm_squared(r.u, p));
}

TEST_CASE("ground state: restarting from a converged state takes no steps") {
  const Problem p = canonical(512);
  const GroundStateReport first = ground_state(p, no_limit());
  REQUIRE(first.converged);
  SolverConfig cfg = no_limit();
  cfg.start = CustomStart{first.u};
  const GroundStateReport again = ground_state(p, cfg);
  CHECK(again.converged);
  CHECK(again.iterations == 0);
  CHECK_THAT(again.c, WithinRel(first.c, 1e-12));
}

TEST_CASE("ground state: start without positive part is rejected") {
  const Problem p = canonical(256);
  SolverConfig cfg = no_limit();
  cfg.start = CustomStart{-1.0 * initial_field(p.grid(), GaussianBump{})};
  CHECK_THROWS_AS(ground_state(p, cfg), PreconditionError);
  cfg.start = CustomStart{Field(p.grid())};
  CHECK_THROWS_AS(ground_state(p, cfg), PreconditionError);
}

TEST_CASE("ground state: non-convergence is reported, not thrown") {
  const Problem p = canonical(256);
  SolverConfig cfg = no_limit();
  cfg.max_iters = 1;
  const GroundStateReport r = ground_state(p, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.residual > cfg.grad_tol);
  CHECK(r.c > 0.0);
}

TEST_CASE("ground state: translation covariance for constant V") {
  const Problem p = canonical(512);
  const double dx = p.grid().dx();
  const int shift = 32;
  const GroundStateReport centred = ground_state(p, no_limit());
  SolverConfig cfg = no_limit();
  cfg.start = GaussianBump{shift * dx, 1.0};
  const GroundStateReport moved = ground_state(p, cfg);
  REQUIRE(centred.converged);
  REQUIRE(moved.converged);
  CHECK_THAT(moved.c, WithinRel(centred.c, 1e-6));
  const std::size_t n = p.grid().size();
  double diff = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    diff = std::max(diff, std::abs(moved.u[(j + shift) % n] - centred.u[j]));
  }
  CHECK(diff <= 1e-4 * sup_norm(centred.u));
}

TEST_CASE("ground state: fixed step mode") {
  const Problem p = canonical(256);
  SolverConfig cfg = no_limit();
  cfg.step_rule = FixedStep{0.5};
  const GroundStateReport fixed = ground_state(p, cfg);
  const GroundStateReport bt = ground_state(p, no_limit());
  CHECK(fixed.converged);
  CHECK_THAT(fixed.c, WithinRel(bt.c, 1e-9));
  const GroundStateReport again = ground_state(p, cfg);
  CHECK(again.c == fixed.c);
  CHECK(again.iterations == fixed.iterations);
}

TEST_CASE("solver config checks") {
  SolverConfig cfg;
  cfg.grad_tol = 0.0;
  CHECK_THROWS_AS(cfg.check(), ConfigError);
  cfg = SolverConfig{};
  cfg.step_rule = FixedStep{0.0};
  CHECK_THROWS_AS(cfg.check(), ConfigError);
  cfg = SolverConfig{};
  cfg.step_rule = Backtracking{1.0, 1e-4};
  CHECK_THROWS_AS(cfg.check(), ConfigError);
  cfg = SolverConfig{};
  cfg.max_iters = -1;
  CHECK_THROWS_AS(cfg.check(), ConfigError);
  cfg = SolverConfig{};
  cfg.start = GaussianBump{0.0, 0.0};
  CHECK_THROWS_AS(cfg.check(), ConfigError);
  CHECK_NOTHROW(SolverConfig{}.check());
}

TEST_CASE("random starts: admissible and reproducible") {
  const Grid g(20.0, 256);
  const auto a = random_starts(g, 4, 9);
  const auto b = random_starts(g, 4, 9);
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(sup_norm(a[i] - b[i]) == 0.0);
    double top = 0.0;
    for (double v : a[i].values()) top = std::max(top, v);
    CHECK(top > 0.0);
  }
  CHECK(sup_norm(a[0] - a[1]) > 0.0);
}

TEST_CASE("nonnegativity detector") {
  const Grid g(20.0, 256);
  const Field bump = initial_field(g, GaussianBump{});
  const NonnegativityCheck ok = check_nonnegativity(bump);
  CHECK(ok.passed);
  CHECK(ok.violation == 0.0);

  const Field lobe = bump - 0.5 * initial_field(g, GaussianBump{5.0, 1.0});
  const NonnegativityCheck bad = check_nonnegativity(lobe);
  CHECK_FALSE(bad.passed);
  // ||u_-|| / ||u|| computed directly.
  double neg = 0.0, all = 0.0;
  for (double v : lobe.values()) {
    neg += std::min(v, 0.0) * std::min(v, 0.0);
    all += v * v;
  }
  CHECK_THAT(bad.violation, WithinRel(std::sqrt(neg / all), 1e-12));
  CHECK(check_nonnegativity(Field(g)).violation == 0.0);
}

TEST_CASE("c against c_infinity") {
  const Problem p = canonical(1024, bowl_potential());
  const CInfinityComparison cmp = compare_c_to_c_infinity(p, SolverConfig{});
  CHECK(cmp.converged);
  CHECK(cmp.verdict == CInfinityComparison::Verdict::strict_gap);
  CHECK(cmp.gap >= 10 * cmp.tol);
  CHECK_THAT(cmp.gap, WithinAbs(cmp.c_inf - cmp.c, 1e-15));

  const Problem flat = canonical(256, Potential::constant(2.0, {true, true}));
  const CInfinityComparison eq = compare_c_to_c_infinity(flat, SolverConfig{});
  CHECK(eq.verdict == CInfinityComparison::Verdict::equal_within_tol);
  CHECK(std::abs(eq.gap) <= eq.tol);

  const Problem unflagged = canonical(256, Potential::constant(1.0));
  CHECK_THROWS_AS(compare_c_to_c_infinity(unflagged, SolverConfig{}), PreconditionError);
  const Problem above = canonical(256, Potential::from_expression("1 + 1/(1+t^2)", 1.0, 1.0, {false, true}));
  CHECK_THROWS_AS(compare_c_to_c_infinity(above, SolverConfig{}), PreconditionError);
}

TEST_CASE("symmetry diagnostic") {
  const Problem p = canonical(2048, bowl_potential());
  const GroundStateReport r = ground_state(p, no_limit());
  REQUIRE(r.converged);
  const SymmetryDiagnostic d = symmetry_diagnostic(r, p);
  CHECK(d.defect <= 1e-3);
  CHECK(d.energy_not_raised);

  // A symmetric decreasing field is its own rearrangement.
  GroundStateReport sym = r;
  sym.u = symmetric_decreasing(r.u);
  CHECK(symmetry_diagnostic(sym, p).defect <= 1e-12);

  // Translated bump, constant V: rearranging still does not raise I.
  const Problem flat = canonical(512);
  GroundStateReport moved = r;
  moved.u = initial_field(flat.grid(), GaussianBump{4.3, 1.7});
  const SymmetryDiagnostic t = symmetry_diagnostic(moved, flat);
  CHECK(t.defect > 0.1);
  CHECK(t.energy_u_star <= t.energy_u + 1e-10 * std::abs(t.energy_u));
  CHECK(t.energy_not_raised);

  const Problem unflagged = canonical(512, Potential::constant(1.0, {false, false}));
  CHECK_THROWS_AS(symmetry_diagnostic(moved, unflagged), PreconditionError);
}
