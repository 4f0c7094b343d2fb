#include <benchmark/benchmark.h>

#include "mkg/elliptic/a0.hpp"
#include "mkg/evolution/evolution.hpp"
#include "mkg/s3/basis.hpp"
#include "mkg/s3/operators.hpp"
#include "mkg/s3/oracles.hpp"
#include "mkg/s3/poisson.hpp"
#include "mkg/state/gauge.hpp"

namespace {

mkg::s3::BasisPtr basis(int k) {
  mkg::s3::BasisSpec spec;
  spec.band_limit = k;
  return mkg::s3::Basis::create(spec);
}

void BM_TransformRoundTrip(benchmark::State& st) {
  const auto b = basis(static_cast<int>(st.range(0)));
  const auto f = mkg::s3::random_field(b, 1, b->band_limit(), false);
  for (auto _ : st) {
    auto g = mkg::s3::ScalarField::from_values(b, f.values());
    benchmark::DoNotOptimize(g.coeffs().data());
  }
}
BENCHMARK(BM_TransformRoundTrip)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_Laplacian(benchmark::State& st) {
  const auto b = basis(static_cast<int>(st.range(0)));
  const auto f = mkg::s3::random_field(b, 2, b->band_limit(), false);
  for (auto _ : st) benchmark::DoNotOptimize(mkg::s3::laplacian_scalar(f));
}
BENCHMARK(BM_Laplacian)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_ProjectDivfree(benchmark::State& st) {
  const auto b = basis(static_cast<int>(st.range(0)));
  const auto a = mkg::s3::random_one_form(b, 3, b->band_limit());
  for (auto _ : st) benchmark::DoNotOptimize(mkg::s3::project_divfree(a));
}
BENCHMARK(BM_ProjectDivfree)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_SolveA0(benchmark::State& st) {
  const auto s = mkg::state::random_admissible(basis(static_cast<int>(st.range(0))), 0.1, 1);
  for (auto _ : st) benchmark::DoNotOptimize(mkg::elliptic::solve_a0(s.phi, s.phi_dot, 1e-12));
}
BENCHMARK(BM_SolveA0)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Rhs(benchmark::State& st) {
  const auto s = mkg::state::random_admissible(basis(static_cast<int>(st.range(0))), 0.1, 1);
  for (auto _ : st) benchmark::DoNotOptimize(mkg::evolution::rhs(s));
}
BENCHMARK(BM_Rhs)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_StepRk4(benchmark::State& st) {
  const auto s = mkg::state::random_admissible(basis(static_cast<int>(st.range(0))), 0.1, 1);
  for (auto _ : st) benchmark::DoNotOptimize(mkg::evolution::step_rk4(s, 1e-3));
}
BENCHMARK(BM_StepRk4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
