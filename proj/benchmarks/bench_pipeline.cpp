#include <benchmark/benchmark.h>

#include "dgsm/bounds.hpp"
#include "dgsm/qmc.hpp"
#include "dgsm/testfns.hpp"

namespace {

const std::vector<double> kTableA = {0, 1, 4.5, 9, 99, 99, 99, 99};

void BM_SobolPoints(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dgsm::SamplePlan plan{16, n, dgsm::replicate_shift(16, 1, 0), 1};
  for (auto _ : state) benchmark::DoNotOptimize(dgsm::sobol_points(plan));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_SobolPoints)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_ReportGFunction(benchmark::State& state) {
  const auto fn = dgsm::make_g_function(kTableA);
  const auto plan = dgsm::make_plan(fn.model, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dgsm::assemble_report(fn.model, plan));
}
BENCHMARK(BM_ReportGFunction)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond);

void BM_ReportHartmann(benchmark::State& state) {
  const auto fn = dgsm::make_hartmann6();
  const auto plan = dgsm::make_plan(fn.model, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dgsm::assemble_report(fn.model, plan));
}
BENCHMARK(BM_ReportHartmann)->Arg(1 << 12)->Arg(1 << 15)->Unit(benchmark::kMillisecond);

void BM_ReportHartmannFiniteDifference(benchmark::State& state) {
  const auto model = dgsm::make_hartmann6().model.without_gradient();
  const auto plan = dgsm::make_plan(model, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dgsm::assemble_report(model, plan));
}
BENCHMARK(BM_ReportHartmannFiniteDifference)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

void BM_GammaMaximization(benchmark::State& state) {
  const auto fn = dgsm::make_g_function(kTableA);
  const auto plan = dgsm::make_plan(fn.model, 1 << 14);
  const auto base = dgsm::draw_base(fn.model, plan);
  const auto ends = dgsm::sample_endpoints(fn.model, base);
  const auto derivs = dgsm::sample_derivatives(fn.model, base);
  const dgsm::GammaEvaluator eval(base, ends, derivs, 0.4654);
  for (auto _ : state) benchmark::DoNotOptimize(dgsm::maximize_gamma(eval));
}
BENCHMARK(BM_GammaMaximization)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
