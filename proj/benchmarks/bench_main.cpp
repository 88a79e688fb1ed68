#include <benchmark/benchmark.h>

#include <cmath>

#include "fracnls/energy.hpp"
#include "fracnls/nehari.hpp"
#include "fracnls/rearrange.hpp"
#include "fracnls/solver.hpp"

using namespace fracnls;

namespace {

Field bump(const Grid& g) {
  return Field::sample(g, [](double x) { return std::exp(-x * x) * (1.0 + 0.2 * std::sin(3.0 * x)); });
}

Problem canonical(std::size_t n) {
  return Problem(FractionalOrder(0.75), Grid(20.0, n), Nonlinearity::power(3.0, 3.5), Potential::constant(1.0));
}

void BM_ComposedOperator(benchmark::State& state) {
  const Grid g(20.0, static_cast<std::size_t>(state.range(0)));
  const Field u = bump(g);
  const FractionalOrder a(0.75);
  for (auto _ : state) benchmark::DoNotOptimize(composed_operator(u, a));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComposedOperator)->RangeMultiplier(2)->Range(256, 8192)->Complexity(benchmark::oNLogN);

void BM_LeftDerivative(benchmark::State& state) {
  const Grid g(20.0, static_cast<std::size_t>(state.range(0)));
  const Field u = bump(g);
  const FractionalOrder a(0.75);
  for (auto _ : state) benchmark::DoNotOptimize(left_lw_derivative(u, a));
}
BENCHMARK(BM_LeftDerivative)->RangeMultiplier(4)->Range(256, 4096);

void BM_NehariProjection(benchmark::State& state) {
  const Problem p = canonical(static_cast<std::size_t>(state.range(0)));
  const Field u = bump(p.grid());
  for (auto _ : state) benchmark::DoNotOptimize(nehari_project(u, p));
}
BENCHMARK(BM_NehariProjection)->RangeMultiplier(4)->Range(256, 4096);

void BM_Gradient(benchmark::State& state) {
  const Problem p = canonical(static_cast<std::size_t>(state.range(0)));
  const Field u = bump(p.grid());
  for (auto _ : state) benchmark::DoNotOptimize(gradient_I(u, p));
}
BENCHMARK(BM_Gradient)->RangeMultiplier(4)->Range(256, 4096);

void BM_GroundState(benchmark::State& state) {
  const Problem p = canonical(static_cast<std::size_t>(state.range(0)));
  SolverConfig cfg;
  cfg.compute_c_infinity = false;
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(p, cfg));
}
BENCHMARK(BM_GroundState)->Arg(512)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_Rearrange(benchmark::State& state) {
  const Grid g(20.0, static_cast<std::size_t>(state.range(0)));
  const Field u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_decreasing(u));
}
BENCHMARK(BM_Rearrange)->RangeMultiplier(4)->Range(256, 4096);

}  // namespace
BENCHMARK_MAIN();
