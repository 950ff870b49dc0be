#include <benchmark/benchmark.h>

#include <numbers>

#include "kerrcat/decoherence.hpp"
#include "kerrcat/fock_state.hpp"
#include "kerrcat/kitten.hpp"
#include "kerrcat/phase_space.hpp"
#include "kerrcat/special_fn.hpp"

using namespace kerrcat;

static void hermite_scaled(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hermite_normalized(cplx(1.3, 0.4), n));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(hermite_scaled)->Arg(64)->Arg(512)->Arg(4096);

static void build_and_evolve(benchmark::State& state) {
  ModelParams p;
  p.alpha = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evolve_lambda_t(build_state(p), p, std::numbers::pi / 8));
}
BENCHMARK(build_and_evolve)->Arg(2)->Arg(4);

static void wigner_field(benchmark::State& state) {
  const ModelParams p;
  const auto rho = density(evolve_lambda_t(build_state(p), p, std::numbers::pi / 8));
  const auto grid = default_grid(p, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_decayed(QuasiDistribution::wigner(rho), grid));
}
BENCHMARK(wigner_field)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);

static void r_closed_point(benchmark::State& state) {
  const ModelParams p;
  for (auto _ : state) benchmark::DoNotOptimize(r_closed(p, cplx(0.7, -0.3), 0.8, KittenTime::eighth));
}
BENCHMARK(r_closed_point);

static void kitten_wigner_point(benchmark::State& state) {
  const auto s = kitten_selection(4, ModelParams{});
  for (auto _ : state) benchmark::DoNotOptimize(wigner_kitten_k1(s, cplx(0.7, -0.3)));
}
BENCHMARK(kitten_wigner_point);

static void amplitude_damping(benchmark::State& state) {
  const ModelParams p;
  const auto rho = density(build_state(p));
  const DampingParams d{0.5, DampingKind::amplitude};
  for (auto _ : state) benchmark::DoNotOptimize(amp_damped_rho(rho, p, d, 1.0));
}
BENCHMARK(amplitude_damping)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
