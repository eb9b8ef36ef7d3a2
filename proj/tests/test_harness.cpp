#include <gtest/gtest.h>

#include "dnp/harness.hpp"

namespace dnp {
namespace {

std::string failing_checks(const ExperimentReport& r) {
  std::string out;
  for (const auto& c : r.checks)
    if (!c.pass) out += c.name + " (" + std::to_string(c.value) + " vs " + std::to_string(c.threshold) + ") ";
  return out;
}

TEST(MinPrinciple, HeatAndPucciOnInterval) {
  MinPrincipleConfig c;
  EXPECT_TRUE(run_min_principle_k1(c).pass);
  c.op = OperatorSpec::pucci_max(1.0, 2.0);
  const auto r = run_min_principle_k1(c);
  EXPECT_TRUE(r.pass) << failing_checks(r);
  for (const auto& s : r.minima)
    if (s.t > 0.0) EXPECT_GT(s.margin, r.threshold) << "t=" << s.t;
}

TEST(MinPrinciple, SquareShortHorizon) {
  MinPrincipleConfig c;
  c.shape = Shape::box(Vec::Zero(2), Vec::Ones(2));
  c.h = 1.0 / 32;
  c.bump.radius = 0.2;
  c.T_end = 0.2;
  c.times = {0.05, 0.1, 0.2};
  const auto r = run_min_principle_k1(c);
  EXPECT_TRUE(r.pass) << failing_checks(r);
}

TEST(MinPrinciple, MarginGrowsWithAmplitude) {
  std::vector<double> prev;
  for (double a : {0.25, 0.5, 1.0, 2.0}) {
    MinPrincipleConfig c;
    c.h = M_PI / 64;
    c.bump.amplitude = a;
    const auto r = run_min_principle_k1(c);
    ASSERT_TRUE(r.pass) << failing_checks(r);
    if (!prev.empty()) {
      ASSERT_EQ(prev.size(), r.minima.size());
      for (std::size_t s = 0; s < prev.size(); ++s) EXPECT_GE(r.minima[s].margin, prev[s] - 1e-12);
    }
    prev.clear();
    for (const auto& s : r.minima) prev.push_back(s.margin);
  }
}

TEST(MinPrinciple, ZeroBumpIsVacuous) {
  MinPrincipleConfig c;
  c.bump.amplitude = 0.0;
  EXPECT_TRUE(run_min_principle_k1(c).pass);
}

TEST(MinPrinciple, Deterministic) {
  MinPrincipleConfig c;
  c.h = M_PI / 64;
  EXPECT_EQ(run_min_principle_k1(c).to_json().dump(), run_min_principle_k1(c).to_json().dump());
}

TEST(Hopf, SimulationQuotientPositive) {
  const auto r = run_hopf_check(HopfConfig{});
  EXPECT_TRUE(r.pass) << failing_checks(r);
}

TEST(Hopf, CounterexampleQuotientVanishes) {
  HopfConfig c;
  c.source = HopfConfig::Source::counterexample;
  c.op = OperatorSpec::p_laplacian(3.0);
  const auto r = run_hopf_check(c);
  EXPECT_TRUE(r.pass) << failing_checks(r);
}

TEST(KGreaterOne, CounterexampleAndPersistence) {
  const auto r = run_k_gt_1_example(KGreaterOneConfig{});
  EXPECT_TRUE(r.pass) << failing_checks(r);
}

TEST(Asymptotics, ConstantAndDecayingBoundary) {
  AsymptoticsConfig a;
  a.u0 = InitialData::sine(a.shape, 1.0, 1.0);
  auto r = run_asymptotics(a);
  EXPECT_TRUE(r.pass) << failing_checks(r);
  a.boundary = BoundaryData::decaying(1.0, 1.0, 1.0);
  a.u0 = InitialData::sine(a.shape, 2.0, 1.0);
  r = run_asymptotics(a);
  EXPECT_TRUE(r.pass) << failing_checks(r);
}

TEST(Decay, PowerLaw) {
  DecayConfig d;
  d.u0 = InitialData::bump((Vec(1) << 0.5).finished(), 0.3, 1.0, 1.0);
  const auto r = run_decay(d);
  EXPECT_TRUE(r.pass) << failing_checks(r);
  ASSERT_FALSE(r.fits.empty());
  EXPECT_GE(r.fits.front().exponent, 0.9);
}

TEST(Decay, ExponentialHeat) {
  DecayConfig e;
  e.op = OperatorSpec::laplacian();
  e.shape = Shape::interval(0.0, M_PI);
  e.h = M_PI / 128;
  e.model = RateModel::exponential;
  e.nu = 0.0;
  e.u0 = InitialData::sine(e.shape, 0.0, 1.0);
  e.t_last = 8.0;
  e.n_snapshots = 40;
  e.expected_rate = 1.0;
  const auto r = run_decay(e);
  EXPECT_TRUE(r.pass) << failing_checks(r);
  ASSERT_FALSE(r.fits.empty());
  EXPECT_NEAR(r.fits.front().exponent, 1.0, 0.05);
}

TEST(ComparisonSuite, AllPairsOrdered) {
  const auto r = run_comparison_suite(ComparisonSuiteConfig{});
  EXPECT_TRUE(r.pass) << failing_checks(r);
  EXPECT_EQ(r.to_json().dump(), run_comparison_suite(ComparisonSuiteConfig{}).to_json().dump());
}

TEST(MarginThreshold, Formula) {
  EXPECT_DOUBLE_EQ(margin_threshold(1e-8, 1.0), 1e-6);
  EXPECT_DOUBLE_EQ(margin_threshold(1e-6, 1.0), 1e-5);
  EXPECT_DOUBLE_EQ(margin_threshold(1e-8, 100.0), 1e-4);
}

TEST(Report, FindAndConjunction) {
  ExperimentReport r;
  r.add({"a", true, 1.0, 0.0, {}});
  EXPECT_TRUE(r.pass);
  r.add({"b", false, 0.0, 1.0, {}});
  EXPECT_FALSE(r.pass);
  ASSERT_NE(r.find("b"), nullptr);
  EXPECT_EQ(r.find("c"), nullptr);
  EXPECT_EQ(r.to_json()["checks"].size(), 2u);
}

}  // namespace
}  // namespace dnp
