#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "dnp/error.hpp"
#include "dnp/operators.hpp"

namespace dnp {
namespace {

std::vector<OperatorSpec> builtins() {
  return {OperatorSpec::laplacian(),          OperatorSpec::p_laplacian(3.0),     OperatorSpec::p_laplacian(4.5),
          OperatorSpec::pseudo_p_laplacian(3.0), OperatorSpec::infinity_laplacian(), OperatorSpec::pucci_max(1.0, 2.0),
          OperatorSpec::pucci_min(0.5, 3.0)};
}

Vec random_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

SymmetricMatrix random_sym(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return SymmetricMatrix::from_upper(m);
}

// Pucci extremal operator from the eigenvalues.
double pucci_oracle(const SymmetricMatrix& X, double pos_weight, double neg_weight) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(X.full()));
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    s += l > 0 ? pos_weight * l : neg_weight * l;
  }
  return s;
}

TEST(Evaluate, LaplacianOfIdentity) {
  Vec g(2);
  g << 0.3, -7.0;
  EXPECT_DOUBLE_EQ(evaluate(OperatorSpec::laplacian(), g, SymmetricMatrix::identity(2)), 2.0);
}

TEST(Evaluate, PLaplacianRankOneFormula) {
  const auto op = OperatorSpec::p_laplacian(3.0);
  Vec e(2);
  e << std::cos(0.7), std::sin(0.7);
  for (double L : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double h = evaluate(op, e, SymmetricMatrix::identity_plus_rank_one(e, 1.0, -L));
    EXPECT_NEAR(h, (2.0 + 3.0 - 2.0) - (3.0 - 1.0) * L, 1e-12) << "Lambda=" << L;
  }
}

TEST(Evaluate, ZeroHessianGivesZero) {
  std::mt19937_64 rng(1);
  for (const auto& op : builtins())
    for (int n = 1; n <= 3; ++n)
      for (int s = 0; s < 20; ++s) EXPECT_EQ(evaluate(op, random_vec(rng, n), SymmetricMatrix(n)), 0.0) << op.describe();
}

TEST(Evaluate, MatchesClosedForms) {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 3; ++n) {
    for (int s = 0; s < 50; ++s) {
      const Vec g = random_vec(rng, n);
      const auto X = random_sym(rng, n);
      const Mat F = X.full();
      const double tr = F.trace();
      const double q = g.dot(F * g);
      EXPECT_NEAR(evaluate(OperatorSpec::laplacian(), g, X), tr, 1e-12);
      EXPECT_NEAR(evaluate(OperatorSpec::infinity_laplacian(), g, X), q, 1e-12 * (1 + std::abs(q)));
      const double p = 3.5;
      const double plap = std::pow(g.norm(), p - 2.0) * (tr + (p - 2.0) * q / g.squaredNorm());
      EXPECT_NEAR(evaluate(OperatorSpec::p_laplacian(p), g, X), plap, 1e-11 * (1 + std::abs(plap)));
      double pseudo = 0.0;
      for (int i = 0; i < n; ++i) pseudo += (p - 1.0) * std::pow(std::abs(g(i)), p - 2.0) * F(i, i);
      EXPECT_NEAR(evaluate(OperatorSpec::pseudo_p_laplacian(p), g, X), pseudo, 1e-11 * (1 + std::abs(pseudo)));
      EXPECT_NEAR(evaluate(OperatorSpec::pucci_max(1.0, 2.0), g, X), pucci_oracle(X, 2.0, 1.0), 1e-10);
      EXPECT_NEAR(evaluate(OperatorSpec::pucci_min(1.0, 2.0), g, X), pucci_oracle(X, 1.0, 2.0), 1e-10);
    }
  }
}

TEST(Evaluate, RejectsBadInput) {
  Vec g(2);
  g << std::nan(""), 1.0;
  EXPECT_THROW(evaluate(OperatorSpec::laplacian(), g, SymmetricMatrix::identity(2)), InputError);
  EXPECT_THROW(evaluate(OperatorSpec::laplacian(), Vec::Zero(3), SymmetricMatrix::identity(2)), InputError);
}

TEST(OperatorSpec, DegreesAndConstraints) {
  for (const auto& op : builtins()) EXPECT_EQ(op.k, op.k1 + 1.0) << op.describe();
  EXPECT_EQ(OperatorSpec::p_laplacian(3.0).k, 2.0);
  EXPECT_EQ(OperatorSpec::infinity_laplacian().k1, 2.0);
  EXPECT_THROW(OperatorSpec::p_laplacian(1.5), ConstructionError);
  EXPECT_THROW(OperatorSpec::pucci_max(2.0, 1.0), ConstructionError);
  EXPECT_THROW(OperatorSpec::pucci_min(0.0, 1.0), ConstructionError);
}

TEST(OperatorSpec, FromName) {
  const auto op = OperatorSpec::from_name("p_laplacian", {{"p", 4.0}});
  EXPECT_EQ(op.family, OperatorFamily::p_laplacian);
  EXPECT_EQ(op.p, 4.0);
  const auto pm = OperatorSpec::from_name("pucci_max", {{"lo", 0.5}, {"hi", 2.0}});
  EXPECT_EQ(pm.lo, 0.5);
  EXPECT_EQ(pm.hi, 2.0);
  EXPECT_THROW(OperatorSpec::from_name("heat"), InputError);
  EXPECT_THROW(OperatorSpec::from_name("laplacian", {{"p", 3.0}}), InputError);
  try {
    OperatorSpec::from_name("p_laplacian", {{"p", 1.5}});
    FAIL() << "expected ConstructionError";
  } catch (const ConstructionError& e) {
    EXPECT_NE(std::string(e.what()).find("p >= 2"), std::string::npos);
  }
}

TEST(RadialEval, LaplacianOfRSquared) {
  Vec e = Vec::Zero(3);
  e(0) = 1.0;
  for (double r : {0.1, 1.0, 3.0})
    EXPECT_NEAR(radial_eval(OperatorSpec::laplacian(), {2.0 * r, 2.0}, r, e), 6.0, 1e-12);
}

TEST(RadialEval, PLaplacianOfPower) {
  // v = r^3, v' = 3, v'' = 6 at r = 1.
  const auto op = OperatorSpec::p_laplacian(3.0);
  Vec e(2);
  e << 0.6, 0.8;
  const double expected = 9.0 * evaluate(op, e, SymmetricMatrix::identity_plus_rank_one(e, 1.0, 1.0));
  EXPECT_NEAR(radial_eval(op, {3.0, 6.0}, 1.0, e), expected, 1e-12);
}

TEST(RadialEval, ZeroProfileAndDomain) {
  Vec e = Vec::Zero(2);
  e(1) = 1.0;
  for (const auto& op : builtins()) EXPECT_EQ(radial_eval(op, {0.0, 0.0}, 0.5, e), 0.0);
  EXPECT_THROW(radial_eval(OperatorSpec::laplacian(), {1.0, 1.0}, 0.0, e), DomainError);
  EXPECT_THROW(radial_eval(OperatorSpec::laplacian(), {1.0, 1.0}, -1.0, e), DomainError);
}

TEST(RadialEval, AgreesWithExplicitFrame) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (const auto& op : builtins()) {
    for (int n = 1; n <= 3; ++n) {
      for (int s = 0; s < 20; ++s) {
        Vec e = random_vec(rng, n);
        e.normalize();
        const double r = 0.1 + std::abs(U(rng));
        const RadialDerivatives v{U(rng), U(rng)};
        const auto X = SymmetricMatrix::identity_plus_rank_one(e, v.dv / r, v.d2v - v.dv / r);
        const double direct = evaluate(op, Vec(v.dv * e), X);
        EXPECT_NEAR(radial_eval(op, v, r, e), direct, 1e-12 * (1.0 + std::abs(direct))) << op.describe();
      }
    }
  }
}

TEST(Monotonicity, BuiltinsPass) {
  const auto lap = check_monotonicity(OperatorSpec::laplacian(), 2, 1000, 0);
  EXPECT_TRUE(lap.pass);
  EXPECT_EQ(lap.worst_violation, 0.0);
  for (const auto& op : builtins())
    for (int n = 1; n <= 3; ++n) EXPECT_TRUE(check_monotonicity(op, n, 1000, 11).pass) << op.describe() << " n=" << n;
}

TEST(Monotonicity, NegatedFixtureFails) {
  const auto r = check_monotonicity(OperatorSpec::negated_laplacian(), 2, 1000, 0);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.worst_violation, 0.0);
}

TEST(Homogeneity, EstimatedDegrees) {
  const auto pl = check_homogeneity(OperatorSpec::p_laplacian(3.0), 2, 200, 0);
  EXPECT_TRUE(pl.pass);
  EXPECT_NEAR(pl.k1, 1.0, 1e-9);
  EXPECT_NEAR(pl.k, 2.0, 1e-9);
  const auto lap = check_homogeneity(OperatorSpec::laplacian(), 2, 200, 0);
  EXPECT_TRUE(lap.pass);
  EXPECT_NEAR(lap.k1, 0.0, 1e-9);
  const auto inf = check_homogeneity(OperatorSpec::infinity_laplacian(), 2, 200, 0);
  EXPECT_TRUE(inf.pass);
  EXPECT_NEAR(inf.k, 3.0, 1e-9);
}

TEST(Homogeneity, JointScaling) {
  std::mt19937_64 rng(5);
  for (const auto& op : builtins()) {
    for (int s = 0; s < 100; ++s) {
      const Vec g = random_vec(rng, 2);
      const auto X = random_sym(rng, 2);
      const double H = evaluate(op, g, X);
      for (double th : {0.5, 2.0, 10.0}) {
        const double lhs = evaluate(op, Vec(th * g), th * X);
        const double rhs = std::pow(th, op.k) * H;
        EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::abs(rhs) + 1e-300) << op.describe();
      }
    }
  }
}

TEST(ComputeMM, PLaplacianLine) {
  const auto op = OperatorSpec::p_laplacian(3.0);
  for (double L : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const auto v = compute_mM(op, 2, L);
    const double expected = (2.0 + 3.0 - 2.0) - (3.0 - 1.0) * L;
    EXPECT_NEAR(v.m, expected, 1e-6);
    EXPECT_NEAR(v.M, expected, 1e-6);
  }
}

TEST(ComputeMM, LaplacianAtThree) {
  const auto v = compute_mM(OperatorSpec::laplacian(), 2, 3.0);
  EXPECT_NEAR(v.m, -1.0, 1e-12);
  EXPECT_NEAR(v.M, -1.0, 1e-12);
  EXPECT_NEAR(v.L, 1.0, 1e-12);
}

TEST(ComputeMM, LowerBoundAtZero) {
  for (const auto& op : builtins()) {
    for (int n = 1; n <= 3; ++n) {
      const double m0 = compute_mM(op, n, 0.0).m;
      EXPECT_GT(m0, 0.0) << op.describe();
      for (const auto& e : std::vector<Vec>{Vec::Unit(n, 0), Vec::Ones(n).normalized()})
        EXPECT_GE(evaluate(op, e, SymmetricMatrix::identity(n)), m0 - 1e-9) << op.describe();
    }
  }
}

TEST(ComputeMM, OrderingAndMonotoneInLambda) {
  for (const auto& op : builtins()) {
    double prev_m = INFINITY, prev_M = INFINITY;
    const bool linear_in_X = op.family == OperatorFamily::laplacian || op.family == OperatorFamily::pucci_max ||
                             op.family == OperatorFamily::pucci_min;
    for (int i = 0; i <= 24; ++i) {
      const double L = 0.25 * i;
      const auto v = compute_mM(op, 2, L);
      EXPECT_LE(v.m, v.M + 1e-12) << op.describe() << " Lambda=" << L;
      if (L <= 1.0) EXPECT_GE(v.m, -1e-12) << op.describe() << " Lambda=" << L;
      if (v.M < 0.0) EXPECT_GE(v.L, -v.M - 1e-9) << op.describe() << " Lambda=" << L;
      if (linear_in_X) {
        EXPECT_LE(v.m, prev_m + 1e-12);
        EXPECT_LE(v.M, prev_M + 1e-12);
      }
      prev_m = v.m;
      prev_M = v.M;
    }
  }
}

TEST(FindLambda1, KnownThresholds) {
  const auto lap = find_lambda1(OperatorSpec::laplacian(), 2);
  ASSERT_TRUE(lap.has_value());
  EXPECT_NEAR(*lap, 2.0, 1e-5);
  const auto pl = find_lambda1(OperatorSpec::p_laplacian(3.0), 2);
  ASSERT_TRUE(pl.has_value());
  EXPECT_NEAR(*pl, 1.5, 1e-5);
  EXPECT_FALSE(find_lambda1(OperatorSpec::positive_trace(), 2).has_value());
}

TEST(CoercivityReport, ConditionsPerFamily) {
  for (const auto& op : builtins()) {
    const auto r = coercivity_report(op, 2, 0.0, 8.0, 33);
    EXPECT_TRUE(r.c_i_pass) << op.describe();
    EXPECT_TRUE(r.c_ii_pass) << op.describe();
    ASSERT_EQ(r.lambda_grid.size(), 33u);
    for (std::size_t i = 0; i < r.lambda_grid.size(); ++i) EXPECT_LE(r.m_values[i], r.M_values[i] + 1e-12);
  }
  const auto bad = coercivity_report(OperatorSpec::positive_trace(), 2, 0.0, 8.0, 33);
  EXPECT_FALSE(bad.c_ii_pass);
  EXPECT_FALSE(bad.lambda1_found.has_value());
}

TEST(RefineLambda1, UsesFoundThreshold) {
  EXPECT_NEAR(refine_lambda1(OperatorSpec::p_laplacian(3.0), 2).lambda1, 1.5, 1e-5);
  const auto fixture = OperatorSpec::positive_trace();
  EXPECT_EQ(refine_lambda1(fixture, 2).lambda1, fixture.lambda1);
}

}  // namespace
}  // namespace dnp
