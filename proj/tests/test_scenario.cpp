#include <gtest/gtest.h>

#include <cmath>

#include "dnplab/scenario.hpp"

namespace dnplab {
namespace {

testing::AssertionResult throws_with(const std::string& text, const std::string& needle) {
  try {
    parse_scenario_text(text);
  } catch (const ConfigError& e) {
    if (std::string(e.what()).find(needle) != std::string::npos) return testing::AssertionSuccess();
    return testing::AssertionFailure() << "message was: " << e.what();
  }
  return testing::AssertionFailure() << "no ConfigError";
}

TEST(Scenario, SimulateDefaults) {
  const auto s = parse_scenario_text("kind: simulate\n");
  EXPECT_EQ(s.kind, Kind::simulate);
  EXPECT_EQ(s.config["operator"]["family"], "laplacian");
  EXPECT_EQ(s.config["domain"]["shape"], "interval");
  EXPECT_DOUBLE_EQ(s.config["domain"]["upper"].get<double>(), M_PI);
  EXPECT_DOUBLE_EQ(s.config["domain"]["h"].get<double>(), M_PI / 128);
  EXPECT_DOUBLE_EQ(s.config["simulate"]["safety"].get<double>(), 0.8);
  EXPECT_EQ(s.config["simulate"]["mode"], "direct");
  EXPECT_EQ(s.seed, 0u);
}

TEST(Scenario, PiExpressions) {
  const auto j = yaml_to_json("a: pi\nb: pi/4\nc: 2*pi\nd: 3*pi/2\ne: '2*pi'\n");
  EXPECT_DOUBLE_EQ(j["a"].get<double>(), M_PI);
  EXPECT_DOUBLE_EQ(j["b"].get<double>(), M_PI / 4);
  EXPECT_DOUBLE_EQ(j["c"].get<double>(), 2 * M_PI);
  EXPECT_DOUBLE_EQ(j["d"].get<double>(), 1.5 * M_PI);
  EXPECT_TRUE(j["e"].is_string());
}

TEST(Scenario, ScalarTypes) {
  const auto j = yaml_to_json("i: 3\nf: 0.5\nb: true\nn: ~\ns: hello\nl: [1, 2.5]\n");
  EXPECT_TRUE(j["i"].is_number_integer());
  EXPECT_TRUE(j["f"].is_number_float());
  EXPECT_TRUE(j["b"].is_boolean());
  EXPECT_TRUE(j["n"].is_null());
  EXPECT_EQ(j["s"], "hello");
  EXPECT_EQ(j["l"].size(), 2u);
}

TEST(Scenario, RejectsSubquadraticP) {
  EXPECT_TRUE(throws_with("kind: simulate\noperator: {family: p_laplacian, p: 1.5}\n", "p >= 2"));
}

TEST(Scenario, RejectsMissingP) {
  EXPECT_TRUE(throws_with("kind: simulate\noperator: {family: p_laplacian}\n", "operator.p"));
}

TEST(Scenario, NamesUnknownKeys) {
  EXPECT_TRUE(throws_with("kind: simulate\nsimulate: {foo: 1}\n", "'simulate.foo'"));
  EXPECT_TRUE(throws_with("kind: simulate\nfoo: 1\nbar: {x: 2}\n", "'bar', 'foo'"));
}

TEST(Scenario, TypeAndBoundErrors) {
  EXPECT_TRUE(throws_with("kind: simulate\nsimulate: {T_end: fast}\n", "simulate.T_end"));
  EXPECT_TRUE(throws_with("kind: simulate\nsimulate: {T_end: -1}\n", "simulate.T_end"));
  EXPECT_TRUE(throws_with("kind: simulate\nsimulate: {safety: 1.5}\n", "simulate.safety"));
  EXPECT_TRUE(throws_with("kind: simulate\nsimulate: {mode: implicit}\n", "simulate.mode"));
  EXPECT_TRUE(throws_with("kind: simulate\ndomain: {shape: torus}\n", "domain.shape"));
  EXPECT_TRUE(throws_with("kind: simulate\ndomain: {lower: 1, upper: 0}\n", "domain.upper"));
  EXPECT_TRUE(throws_with("kind: teleport\n", "unknown kind"));
  EXPECT_TRUE(throws_with("simulate: {}\n", "'kind' is required"));
  EXPECT_TRUE(throws_with("kind: simulate\nkind: elliptic\n", "duplicate key"));
  EXPECT_TRUE(throws_with("kind: experiment\nexperiment: {name: nope}\n", "experiment.name"));
  EXPECT_TRUE(throws_with("kind: certify-barrier\nbarrier: {kind: nope}\n", "barrier.kind"));
  EXPECT_TRUE(throws_with("kind: check-operator\ncheck: {n: 5}\n", "check.n"));
  EXPECT_TRUE(throws_with("kind: simulate\nseed: -3\n", "seed"));
}

TEST(Scenario, RoundTripThroughYaml) {
  for (const char* text :
       {"kind: simulate\nseed: 5\noperator: {family: pucci_max, lo: 1, hi: 2}\ndomain: {shape: box, lower: [0, 0], "
        "upper: [1, 1], h: 0.125}\n",
        "kind: check-operator\noperator: {family: p_laplacian, p: 3}\n",
        "kind: certify-barrier\nbarrier: {kind: hopf_shell}\n", "kind: elliptic\ndomain: {h: pi/32}\n",
        "kind: eigenvalue\n", "kind: experiment\nexperiment: {name: decay-power}\n",
        "kind: experiment\nexperiment: {name: comparison-suite}\n"}) {
    SCOPED_TRACE(text);
    const auto s = parse_scenario_text(text);
    const auto again = parse_scenario_text(s.to_yaml());
    EXPECT_EQ(s, again);
    EXPECT_EQ(s.to_yaml(), again.to_yaml());
  }
}

TEST(Scenario, SetPathParsesScalars) {
  nlohmann::json tree{{"kind", "simulate"}};
  set_path(tree, "simulate.T_end", "0.25");
  set_path(tree, "domain.h", "pi/64");
  set_path(tree, "simulate.eigen_decay", "true");
  EXPECT_DOUBLE_EQ(tree["simulate"]["T_end"].get<double>(), 0.25);
  EXPECT_DOUBLE_EQ(tree["domain"]["h"].get<double>(), M_PI / 64);
  EXPECT_EQ(tree["simulate"]["eigen_decay"], true);
  const auto s = parse_scenario_tree(tree);
  EXPECT_DOUBLE_EQ(s.config["simulate"]["T_end"].get<double>(), 0.25);
}

TEST(Scenario, ExperimentDefaults) {
  const auto hopf = parse_scenario_text("kind: experiment\nexperiment: {name: hopf-check}\n");
  EXPECT_DOUBLE_EQ(hopf.config["domain"]["h"].get<double>(), M_PI / 256);
  const auto k = parse_scenario_text("kind: experiment\nexperiment: {name: k-gt-1-example}\n");
  EXPECT_EQ(k.config["operator"]["family"], "p_laplacian");
  EXPECT_DOUBLE_EQ(k.config["operator"]["p"].get<double>(), 3.0);
  const auto cmp = parse_scenario_text("kind: experiment\nexperiment: {name: comparison-suite}\n");
  EXPECT_FALSE(cmp.config.contains("operator"));
}

TEST(Scenario, KindNames) {
  for (auto k : {Kind::check_operator, Kind::certify_barrier, Kind::simulate, Kind::elliptic, Kind::eigenvalue,
                 Kind::experiment})
    EXPECT_EQ(kind_from_string(to_string(k)), k);
  EXPECT_THROW(kind_from_string("nope"), ConfigError);
}

}  // namespace
}  // namespace dnplab
