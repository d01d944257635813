#include <benchmark/benchmark.h>

#include "modzero/eigen.hpp"
#include "modzero/incgamma.hpp"
#include "modzero/measure.hpp"
#include "modzero/qseries.hpp"
#include "modzero/zerofind.hpp"

using namespace modzero;

namespace {

void BM_MillerBasis(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int N = default_basis_truncation(k, 2);
  for (auto _ : state) benchmark::DoNotOptimize(miller_basis(k, N));
}
BENCHMARK(BM_MillerBasis)->Arg(60)->Arg(120)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Eigenforms(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int N = default_form_truncation(k, FormKind::Eigenform);
  for (auto _ : state) benchmark::DoNotOptimize(eigenforms(k, N));
  state.counters["forms"] = dim_cusp(k);
}
BENCHMARK(BM_Eigenforms)->Arg(24)->Arg(60)->Arg(120)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ZerosEisenstein(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto f = eisenstein_form(k, default_form_truncation(k, FormKind::Eisenstein));
  for (auto _ : state) benchmark::DoNotOptimize(zeros_in_F(f));
}
BENCHMARK(BM_ZerosEisenstein)->Arg(24)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ZerosEigenform(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto f = eigenform(k, 0, default_form_truncation(k, FormKind::Eigenform));
  for (auto _ : state) benchmark::DoNotOptimize(zeros_in_F(f));
}
BENCHMARK(BM_ZerosEigenform)->Arg(60)->Arg(120)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_EvalLogReference(benchmark::State& state) {
  const auto f = eigenform(60, 0, default_form_truncation(60, FormKind::Eigenform));
  const UpperHalfPoint z{-0.21, 0.93};
  for (auto _ : state) benchmark::DoNotOptimize(eval_log(f, z));
}
BENCHMARK(BM_EvalLogReference)->Unit(benchmark::kMicrosecond);

void BM_FastEvaluator(benchmark::State& state) {
  const auto f = eigenform(60, 0, default_form_truncation(60, FormKind::Eigenform));
  const FastEvaluator fe(f);
  for (auto _ : state) benchmark::DoNotOptimize(fe.eval(-0.21L, 0.93L));
}
BENCHMARK(BM_FastEvaluator)->Unit(benchmark::kMicrosecond);

void BM_PeterssonNorm(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto f = eigenform(k, 0, default_form_truncation(k, FormKind::Eigenform));
  for (auto _ : state) benchmark::DoNotOptimize(petersson_norm(f, 1e-8));
}
BENCHMARK(BM_PeterssonNorm)->Arg(24)->Arg(120)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_ArgumentPrinciple(benchmark::State& state) {
  const auto f = eigenform(48, 1, default_form_truncation(48, FormKind::Eigenform));
  const BoxRegion box{-0.5137, -0.18, 0.75, 1.1};
  for (auto _ : state) benchmark::DoNotOptimize(argument_principle_count(f, box));
}
BENCHMARK(BM_ArgumentPrinciple)->Unit(benchmark::kMillisecond);

void BM_GammaReport(benchmark::State& state) {
  const long k = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(gamma_report(k));
}
BENCHMARK(BM_GammaReport)->Arg(100)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_BoundSeries(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int N = bound_series_terms(k, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(bound_series(k, 0.9, N));
}
BENCHMARK(BM_BoundSeries)->Arg(60)->Arg(300)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
