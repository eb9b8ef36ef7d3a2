#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnp/grid.hpp"
#include "dnp/operators.hpp"
#include "dnp/scheme.hpp"

namespace dnp {

/// Lateral boundary data h(x, t).
class BoundaryData {
 public:
  using Fn = std::function<double(const Vec&, double)>;

  static BoundaryData constant(double nu);
  /// nu + amplitude * exp(-rate t)
  static BoundaryData decaying(double nu, double amplitude, double rate);
  /// Piecewise linear in t through (times[i], values[i]); constant outside.
  static BoundaryData tabulated(std::vector<double> times, std::vector<double> values);
  /// Arbitrary data with caller-supplied bounds and limit.
  static BoundaryData function(Fn fn, double inf, double sup, std::optional<double> limit,
                               nlohmann::json descriptor);

  double operator()(const Vec& x, double t) const { return fn_(x, t); }
  [[nodiscard]] double inf() const { return inf_; }
  [[nodiscard]] double sup() const { return sup_; }
  /// Limit as t -> infinity, when the data has one.
  [[nodiscard]] std::optional<double> limit() const { return limit_; }
  [[nodiscard]] bool time_dependent() const { return time_dependent_; }
  [[nodiscard]] const nlohmann::json& to_json() const { return descriptor_; }

 private:
  Fn fn_;
  double inf_ = 0.0, sup_ = 0.0;
  std::optional<double> limit_;
  bool time_dependent_ = false;
  nlohmann::json descriptor_;
};

/// Initial data u0(x).
class InitialData {
 public:
  using Fn = std::function<double(const Vec&)>;

  static InitialData constant(double c);
  /// base + amplitude * prod_i sin(pi (x_i - lower_i) / (upper_i - lower_i)) over the bounding box.
  static InitialData sine(const Shape& shape, double base, double amplitude);
  /// base + amplitude * (1 - |x - center|^2 / radius^2)^3 inside the ball, base outside.
  static InitialData bump(const Vec& center, double radius, double base, double amplitude);
  static InitialData function(Fn fn, nlohmann::json descriptor);

  double operator()(const Vec& x) const { return fn_(x); }
  [[nodiscard]] const nlohmann::json& to_json() const { return descriptor_; }

 private:
  Fn fn_;
  nlohmann::json descriptor_;
};

struct ParabolicProblem {
  OperatorSpec op;
  std::shared_ptr<const GridDomain> grid;
  double T_end = 1.0;
  InitialData u0 = InitialData::constant(1.0);
  BoundaryData h = BoundaryData::constant(1.0);
  /// Allows inf h = 0 (exponential decay experiments); otherwise inf h > 0 is required.
  bool eigen_decay = false;

  /// Throws InputError naming the violated condition.
  void validate() const;
  /// 1e-8 inf h, or 1e-12 when inf h = 0.
  [[nodiscard]] double floor() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

struct EvolveOptions {
  SchemeMode mode = SchemeMode::direct;
  double safety = 0.8;
  double max_dt = std::numeric_limits<double>::infinity();
  long long max_steps = 200'000'000;
  /// Allowed mismatch |u0 - h(., 0)| on the boundary, relative to 1 + |h|.
  double compat_tol = 1e-9;
  bool record_dt = true;
};

struct Trajectory {
  std::shared_ptr<const GridDomain> grid;
  SchemeMode mode = SchemeMode::direct;
  double floor = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> fields;  // u (not w) at each snapshot
  std::vector<double> dt_log;
  long long n_steps = 0;
  long long n_floor_clamps = 0;

  [[nodiscard]] int n_snapshots() const { return static_cast<int>(times.size()); }
  [[nodiscard]] double sup(int s) const;
  [[nodiscard]] double inf(int s) const;
  /// Smallest interior value at snapshot s; `where` receives the node.
  [[nodiscard]] double interior_min(int s, int* where = nullptr) const;
  [[nodiscard]] nlohmann::json summary() const;
};

/// u0 on interior nodes and h(., 0) on boundary nodes. Throws InputError when
/// the two disagree on the boundary beyond `compat_tol`.
std::vector<double> initial_field(const ParabolicProblem& problem, double compat_tol = 1e-9);

/// Largest dt for which the explicit update is monotone. Infinite when the
/// discrete operator has zero Lipschitz bound everywhere.
double cfl_bound(const ParabolicProblem& problem, const std::vector<double>& u,
                 SchemeMode mode = SchemeMode::direct);

/// One explicit step from time t. In log_variable mode `u` holds w = log u.
/// Throws StepSizeError when dt exceeds cfl_bound and NumericError on
/// non-finite values.
std::vector<double> step(const ParabolicProblem& problem, const std::vector<double>& u, double t, double dt,
                         SchemeMode mode = SchemeMode::direct);

/// Repeated steps with dt = safety * cfl_bound; snapshots by linear
/// interpolation in time. Snapshot times must be increasing and lie in [0, T_end].
Trajectory evolve(const ParabolicProblem& problem, const std::vector<double>& snapshot_times,
                  const EvolveOptions& options = {});

/// n+1 times t0 * (t1/t0)^(i/n); t0 > 0.
std::vector<double> geometric_times(double t0, double t1, int n);
/// n+1 equally spaced times on [t0, t1].
std::vector<double> linear_times(double t0, double t1, int n);

}  // namespace dnp
