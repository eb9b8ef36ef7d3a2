#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "dnp/geometry.hpp"
#include "dnp/linalg.hpp"
#include "dnp/operators.hpp"
#include "dnp/region.hpp"

namespace dnp {

enum class BarrierKind {
  hopf_shell,
  slanted_cylinder,
  counterexample_k_gt_1,
  cylinder_min,
  exp_growth_sub,
  exp_decay_super,
  power_decay_super,
  power_decay_sub,
  eigen_exponential,
  perron_sub,
  perron_super,
};

std::string to_string(BarrierKind kind);

/// Subsolution: Gamma_k >= forcing. Supersolution: Gamma_k <= forcing.
enum class Sign { subsolution, supersolution };

std::string to_string(Sign sign);

/// Value and exact derivatives of a barrier at one space-time point.
struct Jet {
  double value = 0.0;
  Vec grad;
  SymmetricMatrix hess;
  double dt = 0.0;
};

/// Closed-form auxiliary function. Immutable after construction.
class Barrier {
 public:
  virtual ~Barrier() = default;

  [[nodiscard]] virtual BarrierKind kind() const = 0;
  [[nodiscard]] virtual Sign sign() const = 0;
  [[nodiscard]] virtual Jet jet(const Vec& x, double t) const = 0;
  /// The set on which the construction claims its sign.
  [[nodiscard]] virtual Region defining_region() const = 0;
  [[nodiscard]] virtual nlohmann::json params() const = 0;
  /// Stationary barriers are checked against H alone, with no time term.
  [[nodiscard]] virtual bool stationary() const { return false; }
  /// Right-hand side of the claimed inequality (nonzero for the elliptic barriers).
  [[nodiscard]] virtual double forcing() const { return 0.0; }

  [[nodiscard]] double value(const Vec& x, double t) const { return jet(x, t).value; }
  /// H(D psi, D^2 psi) - psi^(k-1) psi_t - forcing.
  [[nodiscard]] double residual(const Vec& x, double t) const;
  [[nodiscard]] std::string name() const;
  [[nodiscard]] const OperatorSpec& op() const { return op_; }
  [[nodiscard]] int dim() const { return n_; }
  [[nodiscard]] nlohmann::json to_json() const;

 protected:
  Barrier(OperatorSpec op, int n);

  OperatorSpec op_;
  int n_;
};

using BarrierPtr = std::shared_ptr<const Barrier>;

/// Whether factories verify the defining inequalities. Skipping is for
/// deliberately broken fixtures only.
enum class Checks { enforce, skip };

/// Constants derived from the coercivity curves at a chosen Lambda.
struct CoercivityConstants {
  double lambda1 = 1.0;   // threshold actually used
  double Lambda = 2.0;
  double L = 0.0;         // min_e H(e, Lambda e(x)e - I)
  double M_Lambda = 0.0;  // M(Lambda) < 0
  double M_abs = 0.0;     // max_e -H(e, -I)
  double upsilon = 0.0;   // sqrt(Lambda / (Lambda + 2))
  double upsilon0 = 0.0;  // sqrt(2 / (Lambda + 2))
};

/// Uses Lambda = lambda1 + offset, with lambda1 taken from `op` when M is
/// negative there and from find_lambda1 otherwise. `min_Lambda` raises Lambda.
CoercivityConstants coercivity_constants(const OperatorSpec& op, int n, double offset = 1.0,
                                         double min_Lambda = 0.0);

struct HopfShellParams {
  Vec center;         // q
  double tau = 0.0;
  double rho = 0.5;
  double a = 0.0;     // <= 0 picks the smallest admissible value
};
BarrierPtr make_hopf_shell(const OperatorSpec& op, const HopfShellParams& p, Checks checks = Checks::enforce);

struct SlantedCylinderParams {
  Vec p;
  double tau = 0.0;
  Vec q;
  double s = 1.0;
  double rho = 0.3;
  double level = 0.0;      // m
  double amplitude = 1.0;
};
BarrierPtr make_slanted_cylinder(const OperatorSpec& op, const SlantedCylinderParams& p,
                                 Checks checks = Checks::enforce);
/// Largest admissible |q - p| for the given rho and delta = s - tau.
double slanted_cylinder_max_shift(const OperatorSpec& op, int n, double rho, double delta);
/// Time height Delta of the slanted cylinder for the given rho.
double slanted_cylinder_height(const OperatorSpec& op, int n, double rho);

struct CounterexampleParams {
  double m = 1.0;
  double T = 1.0;
  double R = 1.0;
  Vec center;  // o; defaults to the origin of R^n
};
BarrierPtr make_counterexample(const OperatorSpec& op, int n, double k, const CounterexampleParams& p);

struct CylinderMinParams {
  Vec p;
  double tau = 0.0;
  double T = 1.0;
  double rho = 0.5;
  double m = 1.0;
  double eps = 0.0;  // <= 0 picks half of the admissible bound
};
BarrierPtr make_cylinder_min(const OperatorSpec& op, const CylinderMinParams& p, Checks checks = Checks::enforce);
/// Upper bound on eps from the smallness constraint (infinite when k = 1 and the
/// constraint holds for every eps; zero when it fails for every eps).
double cylinder_min_eps_bound(const OperatorSpec& op, int n, double tau, double T, double rho, double m);

struct ExpGrowthParams {
  double D = 1.0, E = 1.0, F = 1.0, a = 0.0;
  double T0 = 0.0;
  double t_end = 10.0;
};
struct ExpDecayParams {
  double D = 1.0, E = 0.0, F = 1.0, a = 0.0;
  double T0 = 0.0;
  double t_end = 10.0;
};
/// Geometric constants of an exterior point z: inf and sup of |x - z| and the diameter.
struct ExteriorGeometry {
  double R_inf = 0.0;  // inf |x - z|
  double R_sup = 0.0;  // sup |x - z|
  double diameter = 0.0;
};
ExteriorGeometry exterior_geometry(const Shape& shape, const Vec& z);

/// Upper bounds on the rate a for each auxiliary function.
double exp_growth_rate_bound(const OperatorSpec& op, const Shape& shape, const Vec& z, double E);
double exp_decay_rate_bound(const OperatorSpec& op, const Shape& shape, const Vec& z, double E);

/// The lower-envelope choice D = m0, E = log(target/m0)/(R+D)^2, F = target/m0 - 1,
/// with a = a_fraction times its bound. Requires target > m0 > 0.
ExpGrowthParams exp_growth_params_for(const OperatorSpec& op, const Shape& shape, const Vec& z, double m0,
                                      double target, double a_fraction, double T0, double t_end);
/// The upper-envelope choice D = e^(kappa/2) target, E = kappa/(2(R+D)^2),
/// F = M0/target - 1. Requires M0 >= target > 0 and 0 < kappa < 1.
ExpDecayParams exp_decay_params_for(const OperatorSpec& op, const Shape& shape, const Vec& z, double kappa,
                                    double target, double M0, double a_fraction, double T0, double t_end);

BarrierPtr make_exp_growth_sub(const OperatorSpec& op, const Shape& shape, const Vec& z, const ExpGrowthParams& p);
BarrierPtr make_exp_decay_super(const OperatorSpec& op, const Shape& shape, const Vec& z, const ExpDecayParams& p);
std::pair<BarrierPtr, BarrierPtr> make_asymptotic_pair(const OperatorSpec& op, const Shape& shape, const Vec& z,
                                                       const ExpGrowthParams& sub, const ExpDecayParams& super);

enum class DecaySide { super, sub };

struct PowerDecayParams {
  double nu = 1.0;
  double eps = 0.1;
  double T_anchor = 0.0;  // <= 0 picks the smallest admissible anchor
  double T0 = 0.0;        // lower bound on the anchor
  double t_end = 0.0;     // <= 0 means 16 * T_anchor
};
/// nu + eps psi(x) (T_anchor/t)^(1/(k-1)) with the closed-form radial profile
/// psi = +-(1 + A(R^a - r^a)), a = (k+1)/k, about the center of `shape`; psi
/// satisfies H = -1 (super side) or H = 1 (sub side) exactly for rotation
/// invariant operators and as an inequality otherwise.
BarrierPtr make_power_decay(const OperatorSpec& op, const Shape& shape, DecaySide side, const PowerDecayParams& p);
/// Profile value psi(x) and its sup |psi| for the power-decay barrier.
struct PowerProfile {
  double A = 0.0;
  double alpha = 0.0;
  double R = 0.0;
  double M_psi = 0.0;
  Vec center;
  double sign = 1.0;  // +1 super side, -1 sub side
  [[nodiscard]] double value(const Vec& x) const;
};
PowerProfile power_profile(const OperatorSpec& op, const Shape& shape, DecaySide side);

struct EigenExponentialParams {
  double M = 1.0;          // psi >= M on the boundary
  double T0 = 0.0;
  double t_end = 10.0;
  double lambda = 0.0;     // <= 0 uses the profile's own rate
};
/// e^(-lambda (t-T0)) psi(x) with H(D psi, D^2 psi) + lambda psi^k <= 0 and psi >= M on the boundary.
BarrierPtr make_eigen_exponential(const OperatorSpec& op, const Shape& shape, const EigenExponentialParams& p);
/// Largest lambda the closed-form profile supports on `shape`.
double eigen_exponential_rate(const OperatorSpec& op, const Shape& shape);

struct PerronParams {
  Vec y;               // boundary point
  double rho = 0.5;    // outer ball radius; q = y + rho * outward normal
  double theta = 0.0;
  double delta = 1.0;
};
/// v_y (H >= delta, v_y <= theta on the boundary) and w_y (H <= -delta, w_y >= theta).
std::pair<BarrierPtr, BarrierPtr> make_perron_pair(const OperatorSpec& op, const Shape& shape, const PerronParams& p);

}  // namespace dnp
