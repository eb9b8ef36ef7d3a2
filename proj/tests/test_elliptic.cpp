#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "dnp/elliptic.hpp"
#include "dnp/error.hpp"

namespace dnp {
namespace {

using GridPtr = std::shared_ptr<const GridDomain>;

GridPtr grid(const Shape& s, double h) { return std::make_shared<const GridDomain>(GridDomain::build(s, h)); }

TEST(SolveElliptic, RadialPoissonOnDisk) {
  for (double h : {1.0 / 8, 1.0 / 16}) {
    const auto g = grid(Shape::ball(Vec::Zero(2), 1.0), h);
    const auto sol = solve_elliptic({OperatorSpec::laplacian(), g, 1.0, 0.0});
    EXPECT_LT(sol.residual, 1e-8);
    double err = 0.0;
    for (int i = 0; i < g->size(); ++i) err = std::max(err, std::abs(sol.psi[i] - (g->point(i).squaredNorm() - 1.0) / 4.0));
    EXPECT_LE(err, 5.0 * h * h) << "h=" << h;
    EXPECT_NEAR(sol.psi[g->nearest(Vec::Zero(2))], -0.25, 5.0 * h * h);
    EXPECT_LE(sol.theta_violation, 0.0);
    EXPECT_TRUE(sol.perron_checked);
    EXPECT_TRUE(sol.perron_pass);
  }
}

TEST(SolveElliptic, RootScalingIdentity) {
  const auto g = grid(Shape::interval(0.0, 1.0), 1.0 / 64);
  const auto op = OperatorSpec::p_laplacian(3.0);  // k = 2
  const auto base = solve_elliptic({op, g, 1.0, 0.0});
  const auto scaled = solve_elliptic({op, g, 16.0, 2.0});
  double err = 0.0;
  for (int i = 0; i < g->size(); ++i) err = std::max(err, std::abs(scaled.psi[i] - (2.0 + 4.0 * base.psi[i])));
  EXPECT_LE(err, 1e-6);
}

TEST(SolveElliptic, SignOfForcing) {
  const auto g = grid(Shape::interval(0.0, 1.0), 1.0 / 32);
  for (const auto& op : {OperatorSpec::laplacian(), OperatorSpec::p_laplacian(3.0), OperatorSpec::pucci_min(1.0, 2.0)}) {
    const auto neg = solve_elliptic({op, g, -1.0, 0.5});
    for (double v : neg.psi) EXPECT_GE(v, 0.5 - 1e-12) << op.describe();
    const auto pos = solve_elliptic({op, g, 1.0, 0.5});
    for (double v : pos.psi) EXPECT_LE(v, 0.5 + 1e-12) << op.describe();
    // Larger forcing pushes the solution lower.
    const auto big = solve_elliptic({op, g, 2.0, 0.5});
    for (int i = 0; i < g->size(); ++i) EXPECT_LE(big.psi[i], pos.psi[i] + 1e-7) << op.describe();
  }
}

TEST(SolveElliptic, PerronSandwichOnBox) {
  const auto g = grid(Shape::box(Vec::Zero(2), Vec::Ones(2)), 1.0 / 16);
  const auto sol = solve_elliptic({OperatorSpec::pucci_max(1.0, 2.0), g, 1.0, 0.0});
  EXPECT_TRUE(sol.perron_checked);
  EXPECT_TRUE(sol.perron_pass) << sol.perron_violation;
}

TEST(SolveElliptic, IterationCapRaises) {
  const auto g = grid(Shape::interval(0.0, 1.0), 1.0 / 64);
  EllipticOptions o;
  o.max_iterations = 10;
  EXPECT_THROW(solve_elliptic({OperatorSpec::laplacian(), g, 1.0, 0.0}, o), ConvergenceError);
}

TEST(EstimateLambda, IntervalEigenvalues) {
  const auto pi = estimate_lambda(OperatorSpec::laplacian(), grid(Shape::interval(0.0, M_PI), M_PI / 128), 1.0, 4.0);
  EXPECT_LT(pi.lambda_lo, pi.lambda_hi);
  EXPECT_LE(pi.lambda_hi - pi.lambda_lo, 0.02 * pi.lambda_hi + 1e-12);
  EXPECT_GE(pi.midpoint(), 0.95);
  EXPECT_LE(pi.midpoint(), 1.05);
  EXPECT_GT(pi.psi_min_interior, 0.0);

  const auto unit = estimate_lambda(OperatorSpec::laplacian(), grid(Shape::interval(0.0, 1.0), 1.0 / 128), 1.0, 20.0);
  EXPECT_NEAR(unit.midpoint(), M_PI * M_PI, 0.05 * M_PI * M_PI);

  const auto half =
      estimate_lambda(OperatorSpec::laplacian(), grid(Shape::interval(0.0, M_PI / 2), M_PI / 256), 1.0, 8.0);
  EXPECT_LE(pi.midpoint(), half.midpoint());
}

TEST(EstimateLambda, StableUnderRefinement) {
  const auto a = estimate_lambda(OperatorSpec::laplacian(), grid(Shape::interval(0.0, M_PI), M_PI / 64), 1.0, 4.0);
  const auto b = estimate_lambda(OperatorSpec::laplacian(), grid(Shape::interval(0.0, M_PI), M_PI / 128), 1.0, 4.0);
  EXPECT_LT(std::abs(a.midpoint() - b.midpoint()), 0.02 * b.midpoint());
}

TEST(EstimateLambda, BracketNotFound) {
  EXPECT_THROW(estimate_lambda(OperatorSpec::laplacian(), grid(Shape::interval(0.0, M_PI), M_PI / 32), 1.0, 0.5),
               BracketNotFoundError);
}

TEST(EigenTrial, Classification) {
  const auto g = GridDomain::build(Shape::interval(0.0, M_PI), M_PI / 64);
  EXPECT_TRUE(eigen_trial(OperatorSpec::laplacian(), g, 1.0, 0.5).admissible);
  EXPECT_FALSE(eigen_trial(OperatorSpec::laplacian(), g, 1.0, 1.5).admissible);
}

TEST(EstimateLambda, JsonReport) {
  const auto est = estimate_lambda(OperatorSpec::laplacian(), grid(Shape::interval(0.0, M_PI), M_PI / 32), 1.0, 4.0);
  const auto j = est.to_json();
  for (const char* key : {"lambda_lo", "lambda_hi", "grid", "k", "operator", "residuals", "trials"}) EXPECT_TRUE(j.contains(key)) << key;
}

}  // namespace
}  // namespace dnp
