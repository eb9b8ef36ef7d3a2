#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnp/linalg.hpp"

namespace dnp {

/// Built-in families of the spatial operator H(p, X). The last two entries are
/// test fixtures that deliberately break one of the structural conditions.
enum class OperatorFamily {
  laplacian,
  p_laplacian,
  pseudo_p_laplacian,
  infinity_laplacian,
  pucci_max,
  pucci_min,
  negated_laplacian,  // fixture: -tr X, not monotone
  positive_trace,     // fixture: max(0, tr X), never coercive for large Lambda
};

/// A fully nonlinear operator H(p, X) together with its declared homogeneity.
///
/// `k1` is the degree of homogeneity in the gradient and `k = k1 + 1` the joint
/// degree. `lambda1` is the declared coercivity threshold; callers usually
/// replace it with the numerically found value via refine_lambda1().
struct OperatorSpec {
  OperatorFamily family = OperatorFamily::laplacian;
  double p = 2.0;   // p_laplacian, pseudo_p_laplacian
  double lo = 1.0;  // pucci ellipticity constants
  double hi = 1.0;
  double k1 = 0.0;
  double k = 1.0;
  double lambda1 = 1.0;

  static OperatorSpec laplacian();
  static OperatorSpec p_laplacian(double p);
  static OperatorSpec pseudo_p_laplacian(double p);
  static OperatorSpec infinity_laplacian();
  static OperatorSpec pucci_max(double lo, double hi);
  static OperatorSpec pucci_min(double lo, double hi);
  static OperatorSpec negated_laplacian();
  static OperatorSpec positive_trace();

  /// Builds an operator from its family name and parameters ("p", "lo", "hi",
  /// "lambda1"). Throws InputError on unknown names or parameters and
  /// ConstructionError when a parameter bound is violated.
  static OperatorSpec from_name(std::string_view family, const std::map<std::string, double>& params = {});

  [[nodiscard]] std::string family_name() const;
  [[nodiscard]] std::string describe() const;
  /// H(Q p, Q X Q^T) = H(p, X) for every rotation Q.
  [[nodiscard]] bool rotation_invariant() const;
  /// H depends on X only (k1 == 0).
  [[nodiscard]] bool gradient_free() const { return k1 == 0.0; }
  [[nodiscard]] bool is_fixture() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// H(grad, hess). Throws InputError on non-finite input or mismatched dimensions.
double evaluate(const OperatorSpec& op, const Vec& grad, const SymmetricMatrix& hess);

/// Unchecked evaluation used on hot paths; inputs must already be valid.
double evaluate_unchecked(const OperatorSpec& op, const Vec& grad, const SymmetricMatrix& hess);

/// First and second radial derivatives of a profile v(r).
struct RadialDerivatives {
  double dv = 0.0;   // v'(r)
  double d2v = 0.0;  // v''(r)
};

/// H(v'(r) e, (v'(r)/r)(I - e(x)e) + v''(r) e(x)e) for the unit direction e.
/// Throws DomainError for r <= 0.
double radial_eval(const OperatorSpec& op, const RadialDerivatives& v, double r, const Vec& e);

struct RadialExtremes {
  double min = 0.0;
  double max = 0.0;
};

/// Min and max of radial_eval over unit directions in R^n. Identical for
/// rotation invariant families.
RadialExtremes radial_extremes(const OperatorSpec& op, const RadialDerivatives& v, double r, int n,
                               int n_directions = 0);

struct MonotonicityReport {
  bool pass = true;
  double worst_violation = 0.0;  // max over samples of H(p,X) - H(p,Y), clamped at 0
  int n_samples = 0;
  Vec worst_grad;
};

/// Samples X <= Y = X + PSD and gradients p; passes iff H(p,X) <= H(p,Y) + tol.
MonotonicityReport check_monotonicity(const OperatorSpec& op, int n, int n_samples, std::uint64_t seed);

struct HomogeneityReport {
  double k1 = 0.0;  // log-ratio regression estimate
  double k = 0.0;
  bool pass = false;
  double max_rel_error_gradient = 0.0;
  double max_rel_error_hessian = 0.0;
  double max_rel_error_joint = 0.0;
  int n_used = 0;
};

/// Estimates the gradient homogeneity degree and verifies degree one in X and
/// the joint scaling theta^k. Throws InconclusiveError if H vanishes on every sample.
HomogeneityReport check_homogeneity(const OperatorSpec& op, int n, int n_samples, std::uint64_t seed);

/// Extremal values on rank-one perturbations of the identity at a given Lambda.
struct MMValues {
  double m = 0.0;  // min(min_e H(e, I - L e(x)e), -max_e H(e, L e(x)e - I))
  double M = 0.0;  // max(max_e H(e, I - L e(x)e), -min_e H(e, L e(x)e - I))
  double L = 0.0;  // min_e H(e, L e(x)e - I)
};

int default_direction_count(int n);

MMValues compute_mM(const OperatorSpec& op, int n, double lambda, int n_directions = 0);

/// Smallest Lambda in [1, lambda_max] beyond which M stays negative, refined by
/// bisection to 1e-6. Empty when M(lambda_max) >= 0.
std::optional<double> find_lambda1(const OperatorSpec& op, int n, double lambda_max = 20.0, int n_grid = 200,
                                   int n_directions = 0);

/// Copy of `op` whose lambda1 is the numerically found threshold (unchanged when none is found).
OperatorSpec refine_lambda1(const OperatorSpec& op, int n, double lambda_max = 20.0);

struct CoercivityReport {
  std::vector<double> lambda_grid;
  std::vector<double> m_values;
  std::vector<double> M_values;
  std::vector<double> L_values;
  std::optional<double> lambda1_found;
  bool c_i_pass = false;
  bool c_ii_pass = false;
  int n_directions = 0;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Samples m, M, L at n_grid uniform points of [lambda_min, lambda_max] and evaluates
/// both coercivity conditions.
CoercivityReport coercivity_report(const OperatorSpec& op, int n, double lambda_min, double lambda_max,
                                   int n_grid, int n_directions = 0);

/// Extremes of g(e) = H(e, a I + b e(x)e) over unit e, used by the barrier constants.
double min_over_directions_rank_one(const OperatorSpec& op, int n, double a, double b, int n_directions = 0);
double max_over_directions_rank_one(const OperatorSpec& op, int n, double a, double b, int n_directions = 0);

}  // namespace dnp
