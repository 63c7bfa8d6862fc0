#include <benchmark/benchmark.h>

#include <vector>

#include "evoform/closure.hpp"
#include "evoform/evolution.hpp"
#include "evoform/form.hpp"
#include "evoform/geometry.hpp"
#include "evoform/random.hpp"
#include "evoform/sampling.hpp"

using namespace evoform;

static void BM_DoubleDerivative(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  RandomInputs gen(1);
  std::vector<DifferentialForm> forms;
  for (int i = 0; i < 16; ++i) forms.push_back(gen.polynomial_form(n, 1, 3));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(exterior_derivative(exterior_derivative(forms[k++ % forms.size()])));
  }
}
BENCHMARK(BM_DoubleDerivative)->DenseRange(2, 4);

static void BM_ZeroTest(benchmark::State& state) {
  RandomInputs gen(2);
  Expr e = gen.smooth(3) * gen.polynomial(3, 3, 4);
  ZeroTest zt;
  for (auto _ : state) benchmark::DoNotOptimize(is_identically_zero(e - e, zt));
}
BENCHMARK(BM_ZeroTest);

static void BM_Wedge(benchmark::State& state) {
  RandomInputs gen(3);
  DifferentialForm a = gen.polynomial_form(4, 2, 3);
  DifferentialForm b = gen.polynomial_form(4, 1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(BM_Wedge);

static void BM_HodgeLaplace(benchmark::State& state) {
  RandomInputs gen(4);
  Chart c(default_coordinates(3), gen.constant_metric(3), std::nullopt);
  DifferentialForm t = gen.polynomial_form(3, 1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(laplace_derham(t, c));
}
BENCHMARK(BM_HodgeLaplace);

static void BM_HomotopyPotential(benchmark::State& state) {
  RandomInputs gen(5);
  DifferentialForm t = exterior_derivative(gen.polynomial_form(3, 1, 3));
  for (auto _ : state) benchmark::DoNotOptimize(find_potential(t));
}
BENCHMARK(BM_HomotopyPotential);

static void BM_LociScan(benchmark::State& state) {
  int grid = static_cast<int>(state.range(0));
  Expr x = Expr::symbol(0, "x");
  Expr y = Expr::symbol(1, "y");
  Chart c(default_coordinates(2));
  RawFunctional f{x * x + y * y - Expr(1)};
  for (auto _ : state) benchmark::DoNotOptimize(find_degeneracy_loci(f, c, grid));
  state.SetComplexityN(grid);
}
BENCHMARK(BM_LociScan)->RangeMultiplier(2)->Range(32, 256)->Complexity();
BENCHMARK_MAIN();
