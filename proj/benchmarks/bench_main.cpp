#include <benchmark/benchmark.h>

#include <random>

#include "fatigue/evolution.hpp"
#include "fatigue/fe_operators.hpp"
#include "fatigue/incremental_step.hpp"
#include "fatigue/load_program.hpp"
#include "fatigue/mesh.hpp"

namespace {

using namespace fatigue;

Mesh square(int n) { return build_structured_mesh(n, n, Rectangle{}, {Side::left, Side::right}); }

Vector random_damage(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.6, 1.0);
  Vector a(n);
  for (Eigen::Index i = 0; i < n; ++i) a[i] = d(rng);
  return a;
}

StepInputs loaded_step(const Mesh& mesh, const FeOperators& ops, const MaterialLaws& laws, double amplitude) {
  StepInputs in;
  in.alpha_prev = random_damage(ops.num_nodes(), 7);
  in.V_prev = Vector::Zero(ops.num_elements());
  in.zeta_prev = ZetaField::Zero(laws.zeta_rows(), ops.num_elements());
  in.w_bc = amplitude * spatial_profile(mesh, ProfileKind::x);
  in.eps = 0.1;
  in.tau = 0.01;
  return in;
}

void BM_BuildOperators(benchmark::State& state) {
  const Mesh mesh = square(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_fe_operators(mesh));
  state.SetComplexityN(static_cast<long>(mesh.num_nodes()));
}
BENCHMARK(BM_BuildOperators)->RangeMultiplier(2)->Range(8, 64)->Complexity();

void BM_Equilibrium(benchmark::State& state) {
  const Mesh mesh = square(static_cast<int>(state.range(0)));
  const FeOperators ops = build_fe_operators(mesh);
  const MaterialLaws laws;
  const Vector alpha = random_damage(ops.num_nodes(), 3);
  const Vector w = spatial_profile(mesh, ProfileKind::x);
  for (auto _ : state) benchmark::DoNotOptimize(solve_equilibrium(alpha, w, ops, laws));
}
BENCHMARK(BM_Equilibrium)->RangeMultiplier(2)->Range(8, 64);

void BM_DamageSubproblem(benchmark::State& state) {
  const Mesh mesh = square(static_cast<int>(state.range(0)));
  const FeOperators ops = build_fe_operators(mesh);
  MaterialLaws laws;
  laws.f.f0 = 0.2;
  const StepInputs in = loaded_step(mesh, ops, laws, 2.0);
  const Vector u = solve_equilibrium(in.alpha_prev, in.w_bc, ops, laws);
  for (auto _ : state) benchmark::DoNotOptimize(solve_damage_subproblem(u, in, ops, laws));
}
BENCHMARK(BM_DamageSubproblem)->RangeMultiplier(2)->Range(8, 32);

void BM_AlternateMinimize(benchmark::State& state) {
  const Mesh mesh = square(static_cast<int>(state.range(0)));
  const FeOperators ops = build_fe_operators(mesh);
  MaterialLaws laws;
  laws.f.f0 = 0.2;
  const StepInputs in = loaded_step(mesh, ops, laws, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(alternate_minimize(in, ops, laws));
}
BENCHMARK(BM_AlternateMinimize)->RangeMultiplier(2)->Range(8, 32);

void BM_Evolution(benchmark::State& state) {
  const Mesh mesh = square(8);
  const FeOperators ops = build_fe_operators(mesh);
  EvolutionSetup setup;
  setup.load.profile = spatial_profile(mesh, ProfileKind::x);
  setup.steps = static_cast<int>(state.range(0));
  setup.alpha0 = Vector::Constant(ops.num_nodes(), 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(run_evolution(setup, ops));
}
BENCHMARK(BM_Evolution)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
