#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnp/certify.hpp"
#include "dnp/compare.hpp"
#include "dnp/geometry.hpp"
#include "dnp/operators.hpp"
#include "dnp/parabolic.hpp"
#include "dnp/rate_fit.hpp"

namespace dnp {

/// One named assertion inside an experiment.
struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  nlohmann::json detail;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Result of one experiment. `pass` is the conjunction of the checks.
struct ExperimentReport {
  std::string experiment;
  bool pass = true;
  std::vector<Check> checks;
  nlohmann::json data = nlohmann::json::object();
  /// Named trajectories for CSV output.
  std::vector<std::pair<std::string, Trajectory>> series;
  std::vector<RateFit> fits;

  void add(Check c);
  /// Adds "comparison:<name>" with the excess as value.
  void add_comparison(const std::string& name, const ComparisonReport& report);
  /// Adds "certificate:<name>"; returns whether the barrier is certified.
  bool add_certificate(const std::string& name, const SignCertificate& cert);
  [[nodiscard]] const Check* find(const std::string& name) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

struct SnapshotMin {
  double t = 0.0;
  double value = 0.0;
  double margin = 0.0;  // value - m
  int node = -1;
  Vec location;
};

struct MinPrincipleReport : ExperimentReport {
  double m = 0.0;
  double threshold = 0.0;
  std::vector<SnapshotMin> minima;
};

struct BumpData {
  Vec center;           // empty: shape center
  double radius = 0.0;  // <= 0: a quarter of the diameter
  double amplitude = 1.0;
};

struct MinPrincipleConfig {
  OperatorSpec op = OperatorSpec::laplacian();
  Shape shape = Shape::interval(0.0, M_PI);
  double h = M_PI / 128.0;
  double m = 1.0;
  BumpData bump;
  double T_end = 0.5;
  /// Positive snapshot times; empty picks 0.05, 0.1, 0.2, ..., T_end.
  std::vector<double> times;
  double scheme_tol = 1e-8;
  bool barrier_check = true;
  EvolveOptions evolve;
};

/// Strong minimum principle for k = 1: u0 = m + bump, h = m.
MinPrincipleReport run_min_principle_k1(const MinPrincipleConfig& config);

struct HopfConfig {
  enum class Source { simulation, counterexample };
  Source source = Source::simulation;
  OperatorSpec op = OperatorSpec::laplacian();
  // simulation: u0 = m + amplitude * sine on the bounding box, h = m
  Shape shape = Shape::interval(0.0, M_PI);
  double h = M_PI / 256.0;
  double m = 1.0;
  double amplitude = 1.0;
  Vec p;             // boundary point; empty picks the lower corner
  double tau = 1.0;  // time of the quotient
  Vec gamma;         // spatial part of the direction; empty picks the inward normal
  double gamma_t = 0.0;
  double rho = 1.0;  // theta runs over 2^-3 rho, ..., 2^-8 rho
  double threshold = 0.1;
  // counterexample: xi about the origin, p on the sphere |x - z| = |z|
  int dim = 1;
  double T = 1.0;
  double R = 1.0;
  double fail_threshold = 1e-3;
};

/// Directional difference quotients of u at a boundary minimum point. The
/// simulation source passes when the liminf proxy is >= threshold; the
/// counterexample source passes when it is < fail_threshold (Hopf fails).
ExperimentReport run_hopf_check(const HopfConfig& config);

struct KGreaterOneConfig {
  OperatorSpec op = OperatorSpec::p_laplacian(3.0);
  // counterexample
  int dim = 1;
  double m = 1.0;
  double T = 1.0;
  double R = 1.0;
  double h_axis = 1.0 / 64.0;
  int n_slices = 9;
  // persistence run: u0 = m + bump, boundary m
  Shape shape = Shape::interval(0.0, 1.0);
  double h = 1.0 / 128.0;
  BumpData bump;
  double tau = 0.05;
  double T_cyl = 0.15;
  double rho = 0.2;
  int n_snapshots = 16;
  double scheme_tol = 1e-8;
  bool control = true;
  EvolveOptions evolve;
};

ExperimentReport run_k_gt_1_example(const KGreaterOneConfig& config);

struct AsymptoticsConfig {
  OperatorSpec op = OperatorSpec::laplacian();
  Shape shape = Shape::interval(0.0, 1.0);
  double h = 1.0 / 64.0;
  InitialData u0 = InitialData::constant(1.0);
  BoundaryData boundary = BoundaryData::constant(1.0);
  double T_end = 20.0;
  int n_snapshots = 80;
  double tol = 1e-2;
  bool envelopes = true;
  EvolveOptions evolve;
};

/// Tail statistics mu_inf(t) = inf over the closure x [t, T_end] and mu_sup(t)
/// against the boundary limit.
ExperimentReport run_asymptotics(const AsymptoticsConfig& config);

struct DecayConfig {
  OperatorSpec op = OperatorSpec::p_laplacian(3.0);
  Shape shape = Shape::interval(0.0, 1.0);
  double h = 1.0 / 64.0;
  InitialData u0 = InitialData::constant(1.0);
  double nu = 1.0;
  RateModel model = RateModel::power;
  double t_first = 1.0;  // power: first positive snapshot
  double t_last = 1000.0;
  int n_snapshots = 60;
  double tail_fraction = 0.5;
  double min_exponent = 0.9;  // power
  double min_r2 = 0.95;
  // exponential
  std::optional<double> expected_rate;
  double rate_tol = 0.05;
  bool estimate = true;
  double estimate_slack = 0.05;
  EvolveOptions evolve;
};

ExperimentReport run_decay(const DecayConfig& config);

struct ComparisonSuiteConfig {
  int n_pairs = 20;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  double h = 1.0 / 32.0;
  int n_snapshots = 33;
};

/// Randomized certified (sub, super) barrier pairs compared on their grids.
ExperimentReport run_comparison_suite(const ComparisonSuiteConfig& config);

/// Threshold max(10 scheme_tol, 1e-6 (sup u0 - m)) used for strict inequalities.
double margin_threshold(double scheme_tol, double excess);

}  // namespace dnp
