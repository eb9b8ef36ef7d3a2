#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>

#include "dnp/compare.hpp"
#include "dnp/error.hpp"
#include "dnp/field_io.hpp"
#include "dnp/grid.hpp"
#include "dnp/parabolic.hpp"
#include "dnp/scheme.hpp"

namespace dnp {
namespace {

using GridPtr = std::shared_ptr<const GridDomain>;

GridPtr grid(const Shape& s, double h) { return std::make_shared<const GridDomain>(GridDomain::build(s, h)); }

Vec v1(double a) { return (Vec(1) << a).finished(); }

GridPtr unit_square(double h) { return grid(Shape::box(Vec::Zero(2), Vec::Ones(2)), h); }

ParabolicProblem heat_sine(GridPtr g, double T_end) {
  ParabolicProblem p{OperatorSpec::laplacian(), g, T_end, InitialData::sine(g->shape(), 0.0, 1.0),
                     BoundaryData::constant(0.0)};
  p.eigen_decay = true;
  return p;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

// --- grid --------------------------------------------------------------------

TEST(Grid, IntervalLayout) {
  const auto g = grid(Shape::interval(0.0, M_PI), M_PI / 64);
  EXPECT_EQ(g->size(), 65);
  EXPECT_EQ(g->n_interior(), 63);
  EXPECT_NEAR(g->spacing(), M_PI / 64, 1e-15);
  for (int i = 0; i < g->n_interior(); ++i) {
    EXPECT_GT(g->point(i)(0), 0.0);
    EXPECT_LT(g->point(i)(0), M_PI);
    EXPECT_NEAR(g->arm(i, 0, 0).length, M_PI / 64, 1e-12);
  }
  EXPECT_EQ(g->n_directions(), 1);
}

TEST(Grid, BallBoundaryOnSphere) {
  const auto g = grid(Shape::ball(Vec::Zero(2), 1.0), 1.0 / 16);
  EXPECT_EQ(g->dim(), 2);
  EXPECT_EQ(g->n_directions(), 4);
  for (int i = g->n_interior(); i < g->size(); ++i) EXPECT_NEAR(g->point(i).norm(), 1.0, 1e-12);
  for (int i = 0; i < g->n_interior(); ++i) {
    EXPECT_LT(g->point(i).norm(), 1.0);
    for (int d = 0; d < g->n_directions(); ++d)
      for (int s = 0; s < 2; ++s) {
        const Arm& a = g->arm(i, d, s);
        ASSERT_GE(a.node, 0);
        EXPECT_GT(a.length, 0.0);
        EXPECT_NEAR((g->point(a.node) - g->point(i)).norm(), a.length, 1e-12);
      }
  }
  EXPECT_GT(g->min_arm(), 0.0);
}

TEST(Grid, RejectsBadSpacing) {
  EXPECT_THROW(GridDomain::build(Shape::interval(0.0, 1.0), 0.0), InputError);
  EXPECT_THROW(GridDomain::build(Shape::interval(0.0, 1.0), 0.9), InputError);
  EXPECT_THROW(GridDomain::build(Shape::box(Vec::Zero(2), (Vec(2) << 1.0, 1.3).finished()), 0.25), InputError);
}

// --- scheme and step -----------------------------------------------------------

TEST(Step, HeatReducesToForwardEuler) {
  const auto g = grid(Shape::interval(0.0, M_PI), M_PI / 64);
  const auto p = heat_sine(g, 1.0);
  const auto u = initial_field(p);
  const double h = M_PI / 64, dt = 0.4 * h * h;
  const auto next = step(p, u, 0.0, dt);
  for (int i = 0; i < g->n_interior(); ++i) {
    const double x = g->point(i)(0);
    const double lap = (std::sin(x + h) - 2.0 * std::sin(x) + std::sin(x - h)) / (h * h);
    EXPECT_NEAR(next[i], std::sin(x) + dt * lap, 1e-14);
  }
  for (int i = g->n_interior(); i < g->size(); ++i) EXPECT_EQ(next[i], 0.0);
}

TEST(Step, ConstantFieldUnchanged) {
  for (const auto& op : {OperatorSpec::laplacian(), OperatorSpec::p_laplacian(3.0), OperatorSpec::pucci_max(1.0, 2.0),
                         OperatorSpec::infinity_laplacian()}) {
    const auto g = unit_square(1.0 / 16);
    ParabolicProblem p{op, g, 1.0, InitialData::constant(2.0), BoundaryData::constant(2.0)};
    const auto u = initial_field(p);
    const double dt = std::min(1e-3, 0.8 * cfl_bound(p, u));
    EXPECT_EQ(step(p, u, 0.0, dt), u) << op.describe();
  }
}

TEST(Step, PLaplacianBumpMaximumDecreases) {
  const auto g = grid(Shape::interval(0.0, 1.0), 1.0 / 64);
  ParabolicProblem p{OperatorSpec::p_laplacian(3.0), g, 1.0, InitialData::bump(v1(0.5), 0.3, 1.0, 1.0),
                     BoundaryData::constant(1.0)};
  const auto u = initial_field(p);
  int imax = 0;
  for (int i = 0; i < g->n_interior(); ++i)
    if (u[i] > u[imax]) imax = i;
  const auto e = discrete_operator(p.op, *g, u, imax);
  EXPECT_LE(e.H, 0.0);
  const auto next = step(p, u, 0.0, 0.8 * cfl_bound(p, u));
  EXPECT_LE(next[imax], u[imax]);
}

TEST(Step, Errors) {
  const auto g = grid(Shape::interval(0.0, M_PI), M_PI / 32);
  const auto p = heat_sine(g, 1.0);
  auto u = initial_field(p);
  EXPECT_THROW(step(p, u, 0.0, 2.0 * cfl_bound(p, u)), StepSizeError);
  u[3] = std::nan("");
  EXPECT_THROW(step(p, u, 0.0, 1e-6), NumericError);
}

TEST(Cfl, HeatBoundAndScaling) {
  const double h = 1.0 / 32;
  const auto p1 = heat_sine(grid(Shape::interval(0.0, 1.0), h), 1.0);
  const double b1 = cfl_bound(p1, initial_field(p1));
  EXPECT_NEAR(b1, h * h / 2.0, 1e-15);
  const auto p2 = heat_sine(grid(Shape::interval(0.0, 1.0), 2.0 * h), 1.0);
  EXPECT_NEAR(cfl_bound(p2, initial_field(p2)) / b1, 4.0, 1e-9);
  const auto q1 = heat_sine(unit_square(h), 1.0);
  const auto q2 = heat_sine(unit_square(2.0 * h), 1.0);
  EXPECT_NEAR(cfl_bound(q2, initial_field(q2)) / cfl_bound(q1, initial_field(q1)), 4.0, 1e-6);
}

TEST(Cfl, DivisionByPowerOfU) {
  // k = 2: dt bound ~ u / Lipschitz(H). Raising the base level at fixed
  // gradients raises the bound.
  const auto g = grid(Shape::interval(0.0, 1.0), 1.0 / 32);
  double prev = 0.0;
  for (double base : {0.5, 1.0, 4.0}) {
    ParabolicProblem p{OperatorSpec::p_laplacian(3.0), g, 1.0, InitialData::sine(g->shape(), base, 0.2),
                       BoundaryData::constant(base)};
    const double b = cfl_bound(p, initial_field(p));
    EXPECT_GT(b, prev);
    prev = b;
  }
}

TEST(Scheme, MonotoneInNeighborValues) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(0.5, 2.0), D(0.0, 0.5);
  const std::vector<std::pair<OperatorSpec, GridPtr>> cases = {
      {OperatorSpec::laplacian(), unit_square(1.0 / 8)},
      {OperatorSpec::pucci_max(1.0, 2.0), unit_square(1.0 / 8)},
      {OperatorSpec::pucci_min(1.0, 3.0), grid(Shape::ball(Vec::Zero(2), 1.0), 0.25)},
      {OperatorSpec::p_laplacian(3.0), grid(Shape::interval(0.0, 1.0), 1.0 / 16)},
      {OperatorSpec::infinity_laplacian(), grid(Shape::interval(0.0, 1.0), 1.0 / 16)},
      {OperatorSpec::pseudo_p_laplacian(3.0), unit_square(1.0 / 8)},
  };
  int instances = 0;
  for (const auto& [op, g] : cases) {
    ASSERT_TRUE(scheme_exactly_monotone(op, g->dim()));
    ParabolicProblem p{op, g, 1.0, InitialData::constant(1.0), BoundaryData::constant(1.0)};
    for (int trial = 0; trial < 170; ++trial) {
      std::vector<double> u(g->size());
      for (auto& v : u) v = U(rng);
      const int i = std::uniform_int_distribution<int>(0, g->n_interior() - 1)(rng);
      const int d = std::uniform_int_distribution<int>(0, g->n_directions() - 1)(rng);
      const int side = std::uniform_int_distribution<int>(0, 1)(rng);
      const int j = g->arm(i, d, side).node;
      auto w = u;
      w[j] += D(rng);
      const double dt = 0.8 * std::min(cfl_bound(p, u), cfl_bound(p, w));
      const auto a = step(p, u, 0.0, dt);
      const auto b = step(p, w, 0.0, dt);
      if (g->is_interior(i)) EXPECT_GE(b[i], a[i] - 1e-13) << op.describe() << " node " << i;
      ++instances;
    }
  }
  EXPECT_GE(instances, 1000);
}

// --- evolve ------------------------------------------------------------------

TEST(Evolve, HeatModeOracle) {
  const auto p = heat_sine(grid(Shape::interval(0.0, M_PI), M_PI / 256), 1.0);
  const auto tr = evolve(p, {0.0, 0.5, 1.0});
  EXPECT_NEAR(tr.sup(2), std::exp(-1.0), 2e-3);
  EXPECT_NEAR(tr.sup(1), std::exp(-0.5), 2e-3);
  ASSERT_EQ(tr.n_snapshots(), 3);
  EXPECT_EQ(tr.times[2], 1.0);
}

TEST(Evolve, RefinementOrder) {
  std::vector<double> errors;
  for (int N : {32, 64, 128}) {
    const auto g = grid(Shape::interval(0.0, M_PI), M_PI / N);
    const auto tr = evolve(heat_sine(g, 0.5), {0.0, 0.5});
    double e = 0.0;
    for (int i = 0; i < g->size(); ++i) e = std::max(e, std::abs(tr.fields[1][i] - std::exp(-0.5) * std::sin(g->point(i)(0))));
    errors.push_back(e);
  }
  EXPECT_GT(errors[0] / errors[1], 1.8);
  EXPECT_GT(errors[1] / errors[2], 1.8);
}

TEST(Evolve, SteadyState) {
  const auto g = unit_square(1.0 / 16);
  ParabolicProblem p{OperatorSpec::p_laplacian(3.0), g, 0.5, InitialData::constant(1.5), BoundaryData::constant(1.5)};
  const auto tr = evolve(p, linear_times(0.0, 0.5, 5));
  for (const auto& f : tr.fields)
    for (double v : f) EXPECT_EQ(v, 1.5);
}

TEST(Evolve, LogVariableAgreesWithDirect) {
  const auto g = grid(Shape::interval(0.0, M_PI), M_PI / 128);
  ParabolicProblem p{OperatorSpec::laplacian(), g, 1.0, InitialData::sine(g->shape(), 1.0, 1.0),
                     BoundaryData::constant(1.0)};
  const auto times = linear_times(0.0, 1.0, 4);
  const auto a = evolve(p, times);
  EvolveOptions o;
  o.mode = SchemeMode::log_variable;
  const auto b = evolve(p, times, o);
  for (int s = 0; s < a.n_snapshots(); ++s) EXPECT_LE(sup_diff(a.fields[s], b.fields[s]), 5e-3);
}

TEST(Evolve, DiscreteMaximumPrincipleAndPositivity) {
  for (const auto& op : {OperatorSpec::laplacian(), OperatorSpec::pucci_max(1.0, 2.0)}) {
    const auto g = unit_square(1.0 / 16);
    ParabolicProblem p{op, g, 0.3, InitialData::bump((Vec(2) << 0.4, 0.6).finished(), 0.3, 0.2, 3.0),
                       BoundaryData::constant(0.2)};
    const auto tr = evolve(p, linear_times(0.0, 0.3, 30));
    for (int s = 1; s < tr.n_snapshots(); ++s) {
      EXPECT_LE(tr.sup(s), std::max(tr.sup(s - 1), 0.2) + 1e-14) << op.describe();
      EXPECT_GE(tr.inf(s), p.floor());
    }
  }
  const auto g = grid(Shape::interval(0.0, 1.0), 1.0 / 64);
  ParabolicProblem q{OperatorSpec::p_laplacian(3.0), g, 2.0, InitialData::bump(v1(0.5), 0.3, 1e-3, 1.0),
                     BoundaryData::constant(1e-3)};
  const auto tr = evolve(q, linear_times(0.0, 2.0, 8));
  for (int s = 0; s < tr.n_snapshots(); ++s) EXPECT_GE(tr.inf(s), q.floor());
}

TEST(Evolve, ZeroDurationKeepsInitialSnapshot) {
  const auto g = grid(Shape::interval(0.0, M_PI), M_PI / 32);
  ParabolicProblem p{OperatorSpec::laplacian(), g, 0.0, InitialData::sine(g->shape(), 1.0, 1.0),
                     BoundaryData::constant(1.0)};
  const auto tr = evolve(p, {0.0});
  ASSERT_EQ(tr.n_snapshots(), 1);
  EXPECT_EQ(tr.fields[0], initial_field(p));
  EXPECT_EQ(tr.n_steps, 0);
}

TEST(Evolve, Deterministic) {
  const auto g = unit_square(1.0 / 16);
  ParabolicProblem p{OperatorSpec::pucci_max(1.0, 2.0), g, 0.1, InitialData::sine(g->shape(), 1.0, 1.0),
                     BoundaryData::constant(1.0)};
  const auto a = evolve(p, linear_times(0.0, 0.1, 3));
  const auto b = evolve(p, linear_times(0.0, 0.1, 3));
  EXPECT_EQ(a.fields, b.fields);
  EXPECT_EQ(a.dt_log, b.dt_log);
}

TEST(Problem, ValidationErrors) {
  const auto g = grid(Shape::interval(0.0, 1.0), 1.0 / 16);
  ParabolicProblem p{OperatorSpec::laplacian(), g, 1.0, InitialData::constant(0.0), BoundaryData::constant(0.0)};
  EXPECT_THROW(p.validate(), InputError);
  p.eigen_decay = true;
  EXPECT_NO_THROW(p.validate());
  ParabolicProblem q{OperatorSpec::laplacian(), g, 1.0, InitialData::constant(2.0), BoundaryData::constant(1.0)};
  EXPECT_THROW(initial_field(q), InputError);
  EXPECT_THROW(evolve(q, {0.0, 2.0}), InputError);
  EXPECT_THROW(evolve(heat_sine(g, 1.0), {0.5, 0.2}), InputError);
}

TEST(BoundaryData, Forms) {
  const auto d = BoundaryData::decaying(1.0, 2.0, 3.0);
  EXPECT_NEAR(d(v1(0.0), 0.5), 1.0 + 2.0 * std::exp(-1.5), 1e-15);
  ASSERT_TRUE(d.limit().has_value());
  EXPECT_EQ(*d.limit(), 1.0);
  EXPECT_TRUE(d.time_dependent());
  const auto t = BoundaryData::tabulated({0.0, 1.0, 3.0}, {1.0, 3.0, 2.0});
  EXPECT_NEAR(t(v1(0.0), 0.5), 2.0, 1e-15);
  EXPECT_NEAR(t(v1(0.0), 2.0), 2.5, 1e-15);
  EXPECT_NEAR(t(v1(0.0), 9.0), 2.0, 1e-15);
  EXPECT_EQ(t.inf(), 1.0);
  EXPECT_EQ(t.sup(), 3.0);
}

TEST(Times, GeometricAndLinear) {
  const auto g = geometric_times(1.0, 1000.0, 3);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_NEAR(g[1], 10.0, 1e-12);
  EXPECT_NEAR(g[3], 1000.0, 1e-9);
  const auto l = linear_times(0.0, 1.0, 4);
  ASSERT_EQ(l.size(), 5u);
  EXPECT_DOUBLE_EQ(l[2], 0.5);
}

// --- comparison ------------------------------------------------------------------

TEST(Compare, IdenticalTrajectories) {
  const auto g = grid(Shape::interval(0.0, 1.0), 1.0 / 32);
  ParabolicProblem p{OperatorSpec::laplacian(), g, 0.1, InitialData::sine(g->shape(), 1.0, 1.0),
                     BoundaryData::constant(1.0)};
  const auto tr = evolve(p, linear_times(0.0, 0.1, 4));
  const auto r = compare_quotient(tr, tr);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.interior_max, 1.0, 1e-15);
  EXPECT_NEAR(r.boundary_max, 1.0, 1e-15);
  EXPECT_TRUE(compare_difference(tr, tr).pass);
}

TEST(Compare, InteriorViolationLocated) {
  const auto g = grid(Shape::interval(0.0, 1.0), 1.0 / 32);
  ParabolicProblem p{OperatorSpec::laplacian(), g, 0.1, InitialData::sine(g->shape(), 1.0, 1.0),
                     BoundaryData::constant(1.0)};
  auto super = evolve(p, linear_times(0.0, 0.1, 4));
  auto sub = super;
  const int node = 10;
  sub.fields[3][node] *= 1.5;
  const auto r = compare_quotient(sub, super);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.interior_node, node);
  EXPECT_EQ(r.interior_snapshot, 3);
  EXPECT_NEAR(r.excess, 0.5, 1e-12);

  auto lifted = super;
  lifted.fields[0][node] *= 1.5;  // initial slice is part of the parabolic boundary
  const auto b = compare_quotient(lifted, super);
  EXPECT_TRUE(b.pass);
  EXPECT_EQ(b.boundary_node, node);
  EXPECT_EQ(b.boundary_snapshot, 0);
}

TEST(Compare, GridMismatch) {
  const auto a = evolve(heat_sine(grid(Shape::interval(0.0, M_PI), M_PI / 16), 0.1), {0.0, 0.1});
  const auto b = evolve(heat_sine(grid(Shape::interval(0.0, M_PI), M_PI / 32), 0.1), {0.0, 0.1});
  EXPECT_THROW(compare_quotient(a, b), InputError);
}

TEST(Compare, RegionMaskRoles) {
  const auto g = grid(Shape::interval(0.0, 1.0), 1.0 / 16);
  ParabolicProblem p{OperatorSpec::laplacian(), g, 0.2, InitialData::constant(1.0), BoundaryData::constant(1.0)};
  const auto tr = evolve(p, linear_times(0.0, 0.2, 4));
  const auto mask = region_mask(tr, [](const Vec& x, double t) { return std::abs(x(0) - 0.5) <= 0.25 && t >= 0.05; });
  ASSERT_EQ(mask.roles.size(), 5u);
  for (int i = 0; i < g->size(); ++i) EXPECT_EQ(mask.roles[0][i], NodeRole::outside);
  const int center = g->nearest(v1(0.5));
  EXPECT_EQ(mask.roles[1][center], NodeRole::boundary);  // first member snapshot
  EXPECT_EQ(mask.roles[2][center], NodeRole::interior);
  EXPECT_EQ(mask.roles[2][g->nearest(v1(0.25))], NodeRole::boundary);
}

// --- field io ----------------------------------------------------------------------

TEST(FieldIo, BinaryRoundTripAndCsv) {
  const auto g = unit_square(1.0 / 8);
  ParabolicProblem p{OperatorSpec::laplacian(), g, 0.05, InitialData::sine(g->shape(), 1.0, 1.0),
                     BoundaryData::constant(1.0)};
  const auto tr = evolve(p, linear_times(0.0, 0.05, 2));
  const auto dir = std::filesystem::temp_directory_path() / "dnp_field_io_test";
  std::filesystem::create_directories(dir);
  const auto bin = (dir / "u.bin").string();
  write_field_binary(tr, bin);
  const auto dump = read_field_binary(bin);
  EXPECT_EQ(dump.version, 1u);
  EXPECT_EQ(dump.dim, 2u);
  EXPECT_EQ(dump.n_points(), static_cast<std::size_t>(g->size()));
  EXPECT_EQ(dump.times, tr.times);
  for (int s = 0; s < tr.n_snapshots(); ++s)
    for (int i = 0; i < g->size(); ++i) EXPECT_EQ(dump.values[s * g->size() + i], tr.fields[s][i]);
  EXPECT_EQ(dump.coords[2 * 5 + 1], g->point(5)(1));

  const auto csv = (dir / "u.csv").string();
  write_field_csv(tr, csv);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x,y,t,u");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, g->size() * tr.n_snapshots());

  const auto series = (dir / "s.csv").string();
  write_series_csv(tr, series);
  std::ifstream sin(series);
  std::getline(sin, header);
  EXPECT_EQ(header, "t,sup_u,inf_u,interior_min,argmin_x,argmin_y");

  {
    std::ofstream bad(dir / "bad.bin", std::ios::binary);
    bad << "NOPE";
  }
  EXPECT_THROW(read_field_binary((dir / "bad.bin").string()), InputError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace dnp
