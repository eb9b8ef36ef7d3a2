#include <benchmark/benchmark.h>

#include "dnp/barriers.hpp"
#include "dnp/certify.hpp"

namespace {

void BM_CertifyHopfShell(benchmark::State& state) {
  const auto op = dnp::OperatorSpec::pucci_max(1.0, 2.0);
  const auto bar = dnp::make_hopf_shell(op, {dnp::Vec::Zero(2), 1.0, 0.5, 0.0});
  dnp::SampleOptions so;
  so.per_axis = static_cast<int>(state.range(0));
  so.n_quasi = 1024;
  for (auto _ : state) benchmark::DoNotOptimize(dnp::certify(*bar, so));
}
BENCHMARK(BM_CertifyHopfShell)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_CounterexampleJet(benchmark::State& state) {
  const auto op = dnp::OperatorSpec::p_laplacian(3.0);
  const auto bar = dnp::make_counterexample(op, 2, op.k, {});
  dnp::Vec x(2);
  x << 0.3, -0.2;
  for (auto _ : state) benchmark::DoNotOptimize(bar->jet(x, 0.5));
}
BENCHMARK(BM_CounterexampleJet);

void BM_CheckDerivatives(benchmark::State& state) {
  const auto op = dnp::OperatorSpec::laplacian();
  const auto bar = dnp::make_hopf_shell(op, {dnp::Vec::Zero(1), 1.0, 0.5, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(dnp::check_derivatives(*bar, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CheckDerivatives)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
