#pragma once

#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnp/grid.hpp"
#include "dnp/operators.hpp"

namespace dnp {

/// H(D psi, D^2 psi) = delta in the domain, psi = theta on the boundary.
struct EllipticProblem {
  OperatorSpec op;
  std::shared_ptr<const GridDomain> grid;
  double delta = 1.0;
  double theta = 0.0;
};

struct EllipticOptions {
  double tol = 1e-8;  // sup-norm residual
  long long max_iterations = 5'000'000;
  double safety = 0.8;
  int history_stride = 1000;
  /// Boundary points at which the Perron envelopes are checked (0 disables).
  int perron_points = 8;
  double perron_tol = 5e-3;
};

struct EllipticSolution {
  std::shared_ptr<const GridDomain> grid;
  std::vector<double> psi;
  double residual = 0.0;
  long long iterations = 0;
  std::vector<double> residual_history;
  /// max of (psi - theta) for delta > 0, of (theta - psi) for delta < 0; <= 0 expected.
  double theta_violation = 0.0;
  bool perron_checked = false;
  /// Largest amount by which psi leaves the envelope between theta and the Perron barrier.
  double perron_violation = 0.0;
  bool perron_pass = true;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Pseudo-time marching psi_t = H - delta with local time steps from the
/// constant theta. Throws ConvergenceError with the residual history when the
/// residual does not fall below tol.
EllipticSolution solve_elliptic(const EllipticProblem& problem, const EllipticOptions& options = {});

struct EigenOptions {
  double bracket_fraction = 0.02;  // stop when hi - lo <= fraction * hi
  double blowup_factor = 1e6;
  long long max_steps = 1'000'000;
  double safety = 0.8;
  /// Steps per classification window; 0 picks max(1000, (diameter/h)^2 / 2).
  long long window_steps = 0;
  double converged_tol = 1e-11;
};

struct EigenTrial {
  double lambda = 0.0;
  bool admissible = false;
  long long steps = 0;
  int windows = 0;
  double sup_u = 0.0;
  double last_rate = 0.0;  // sup|u_t| at the end of the run
  std::string reason;
};

struct EigenEstimate {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  std::vector<double> psi;  // state reached at lambda_lo
  int iterations = 0;
  double residual = 0.0;
  double psi_min_interior = 0.0;
  std::vector<EigenTrial> trials;
  nlohmann::json grid;
  double k = 1.0;
  nlohmann::json op;

  [[nodiscard]] double midpoint() const { return 0.5 * (lambda_lo + lambda_hi); }
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Classifies one lambda by marching u_t = H(Du, D^2u) + lambda u^k from u = delta.
EigenTrial eigen_trial(const OperatorSpec& op, const GridDomain& grid, double delta, double lambda,
                       const EigenOptions& options = {}, std::vector<double>* state = nullptr);

/// Bisection on (0, lambda_max). Throws BracketNotFoundError when lambda_max
/// is still admissible.
EigenEstimate estimate_lambda(const OperatorSpec& op, std::shared_ptr<const GridDomain> grid, double delta,
                              double lambda_max, const EigenOptions& options = {});

}  // namespace dnp
