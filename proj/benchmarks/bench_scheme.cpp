#include <benchmark/benchmark.h>

#include <memory>

#include "dnp/grid.hpp"
#include "dnp/parabolic.hpp"
#include "dnp/scheme.hpp"

namespace {

std::shared_ptr<const dnp::GridDomain> square(int cells) {
  const dnp::Vec lo = dnp::Vec::Zero(2), hi = dnp::Vec::Ones(2);
  return std::make_shared<const dnp::GridDomain>(dnp::GridDomain::build(dnp::Shape::box(lo, hi), 1.0 / cells));
}

void BM_GridBuildBall(benchmark::State& state) {
  const auto shape = dnp::Shape::ball(dnp::Vec::Zero(2), 1.0);
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dnp::GridDomain::build(shape, h));
}
BENCHMARK(BM_GridBuildBall)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_DiscreteOperator(benchmark::State& state) {
  const auto grid = square(static_cast<int>(state.range(1)));
  const auto op = state.range(0) == 0 ? dnp::OperatorSpec::laplacian() : dnp::OperatorSpec::p_laplacian(3.0);
  std::vector<double> u(grid->size());
  for (int i = 0; i < grid->size(); ++i) u[i] = 1.0 + grid->point(i).squaredNorm();
  std::vector<double> H, L;
  for (auto _ : state) {
    dnp::discrete_operator_all(op, *grid, u, dnp::SchemeMode::direct, H, L);
    benchmark::DoNotOptimize(H.data());
  }
  state.SetItemsProcessed(state.iterations() * grid->n_interior());
  state.SetLabel(op.family_name());
}
BENCHMARK(BM_DiscreteOperator)->ArgsProduct({{0, 1}, {32, 64, 128}});

void BM_Step(benchmark::State& state) {
  const auto grid = square(static_cast<int>(state.range(0)));
  dnp::ParabolicProblem prob{dnp::OperatorSpec::pucci_max(1.0, 2.0), grid, 1.0,
                             dnp::InitialData::sine(grid->shape(), 1.0, 1.0), dnp::BoundaryData::constant(1.0)};
  auto u = dnp::initial_field(prob);
  const double dt = 0.8 * dnp::cfl_bound(prob, u);
  for (auto _ : state) benchmark::DoNotOptimize(dnp::step(prob, u, 0.0, dt));
  state.SetItemsProcessed(state.iterations() * grid->n_interior());
}
BENCHMARK(BM_Step)->Arg(32)->Arg(64)->Arg(128);

void BM_Evolve1D(benchmark::State& state) {
  const auto grid = std::make_shared<const dnp::GridDomain>(
      dnp::GridDomain::build(dnp::Shape::interval(0.0, 1.0), 1.0 / static_cast<double>(state.range(0))));
  dnp::ParabolicProblem prob{dnp::OperatorSpec::p_laplacian(3.0), grid, 0.1,
                             dnp::InitialData::sine(grid->shape(), 1.0, 1.0), dnp::BoundaryData::constant(1.0)};
  for (auto _ : state) benchmark::DoNotOptimize(dnp::evolve(prob, dnp::linear_times(0.0, 0.1, 4)));
}
BENCHMARK(BM_Evolve1D)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
