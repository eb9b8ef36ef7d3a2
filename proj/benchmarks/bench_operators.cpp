#include <benchmark/benchmark.h>

#include <random>

#include "dnp/operators.hpp"

namespace {

dnp::OperatorSpec family_for(int64_t i) {
  switch (i) {
    case 0: return dnp::OperatorSpec::laplacian();
    case 1: return dnp::OperatorSpec::p_laplacian(3.0);
    case 2: return dnp::OperatorSpec::pseudo_p_laplacian(3.0);
    case 3: return dnp::OperatorSpec::infinity_laplacian();
    default: return dnp::OperatorSpec::pucci_max(1.0, 2.0);
  }
}

void BM_Evaluate(benchmark::State& state) {
  const auto op = family_for(state.range(0));
  const int n = static_cast<int>(state.range(1));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  dnp::Vec p(n);
  dnp::Mat X(n, n);
  for (int i = 0; i < n; ++i) {
    p(i) = g(rng);
    for (int j = 0; j < n; ++j) X(i, j) = g(rng);
  }
  const auto S = dnp::SymmetricMatrix::from_upper(X);
  for (auto _ : state) benchmark::DoNotOptimize(dnp::evaluate_unchecked(op, p, S));
  state.SetLabel(op.family_name());
}
BENCHMARK(BM_Evaluate)->ArgsProduct({{0, 1, 2, 3, 4}, {1, 2, 3}});

void BM_FindLambda1(benchmark::State& state) {
  const auto op = family_for(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dnp::find_lambda1(op, 2));
  state.SetLabel(op.family_name());
}
BENCHMARK(BM_FindLambda1)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

}  // namespace
