#include "dnp/barriers.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dnp {

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void check(bool ok, Checks checks, const std::string& what) {
  if (!ok && checks == Checks::enforce) throw ConstructionError(what);
}

SymmetricMatrix outer(const Vec& v, double scale_outer, double scale_identity) {
  return SymmetricMatrix::identity_plus_rank_one(v, scale_identity, scale_outer);
}

double min_H_rank_one(const OperatorSpec& op, int n, double a, double b) {
  return min_over_directions_rank_one(op, n, a, b);
}

double max_H_rank_one(const OperatorSpec& op, int n, double a, double b) {
  return max_over_directions_rank_one(op, n, a, b);
}

// Radius, relative to the profile's extent, of the ball excluded about a
// singular center.
constexpr double kSingularExclusion = 0.02;

void require_dim(const Vec& v, int n, const char* what) {
  if (v.size() != n) throw InputError(std::string(what) + ": dimension mismatch");
}

}  // namespace

std::string to_string(BarrierKind kind) {
  switch (kind) {
    case BarrierKind::hopf_shell: return "hopf_shell";
    case BarrierKind::slanted_cylinder: return "slanted_cylinder";
    case BarrierKind::counterexample_k_gt_1: return "counterexample_k_gt_1";
    case BarrierKind::cylinder_min: return "cylinder_min";
    case BarrierKind::exp_growth_sub: return "exp_growth_sub";
    case BarrierKind::exp_decay_super: return "exp_decay_super";
    case BarrierKind::power_decay_super: return "power_decay_super";
    case BarrierKind::power_decay_sub: return "power_decay_sub";
    case BarrierKind::eigen_exponential: return "eigen_exponential";
    case BarrierKind::perron_sub: return "perron_sub";
    case BarrierKind::perron_super: return "perron_super";
  }
  return "unknown";
}

std::string to_string(Sign sign) { return sign == Sign::subsolution ? "subsolution" : "supersolution"; }

Barrier::Barrier(OperatorSpec op, int n) : op_(op), n_(n) {
  if (n < 1 || n > kMaxDim) throw InputError("barrier dimension must be in 1..3");
}

double Barrier::residual(const Vec& x, double t) const {
  const Jet j = jet(x, t);
  const double h = evaluate_unchecked(op_, j.grad, j.hess);
  if (stationary()) return h - forcing();
  double time_factor = 1.0;
  if (op_.k != 1.0) {
    if (!(j.value > 0.0)) throw DomainError(name() + ": barrier must be positive where k > 1");
    time_factor = std::pow(j.value, op_.k - 1.0);
  }
  return h - time_factor * j.dt - forcing();
}

std::string Barrier::name() const { return to_string(kind()) + "[" + op_.describe() + "]"; }

nlohmann::json Barrier::to_json() const {
  return {{"kind", to_string(kind())},
          {"sign", to_string(sign())},
          {"operator", op_.to_json()},
          {"dim", n_},
          {"params", params()}};
}

CoercivityConstants coercivity_constants(const OperatorSpec& op, int n, double offset, double min_Lambda) {
  const double lambda_max = std::max(20.0, 2.0 * op.lambda1);
  const auto found = find_lambda1(op, n, lambda_max);
  if (!found)
    throw ConstructionError("operator " + op.describe() + " has no coercivity threshold: M(Lambda) >= 0 up to " +
                            fmt(lambda_max));
  CoercivityConstants c;
  c.lambda1 = std::max(op.lambda1, *found);
  c.Lambda = std::max(c.lambda1 + offset, min_Lambda);
  const auto mm = compute_mM(op, n, c.Lambda);
  if (!(mm.M < 0.0)) throw ConstructionError("M(Lambda) must be negative at Lambda = " + fmt(c.Lambda));
  c.L = mm.L;
  c.M_Lambda = mm.M;
  c.M_abs = -min_H_rank_one(op, n, -1.0, 0.0);
  c.upsilon = std::sqrt(c.Lambda / (c.Lambda + 2.0));
  c.upsilon0 = std::sqrt(2.0 / (c.Lambda + 2.0));
  return c;
}

// ---------------------------------------------------------------------------
// Hopf shell: psi = exp(-a(r^2 + (tau-t)^2)) - exp(-a rho^2)

namespace {

class HopfShell final : public Barrier {
 public:
  HopfShell(const OperatorSpec& op, const HopfShellParams& p, const CoercivityConstants& c)
      : Barrier(op, static_cast<int>(p.center.size())), p_(p), c_(c) {}

  BarrierKind kind() const override { return BarrierKind::hopf_shell; }
  Sign sign() const override { return Sign::subsolution; }

  Jet jet(const Vec& x, double t) const override {
    const Vec y = x - p_.center;
    const double s = p_.tau - t;
    const double eta = std::exp(-p_.a * (y.squaredNorm() + s * s));
    return {eta - std::exp(-p_.a * p_.rho * p_.rho), -2.0 * p_.a * eta * y,
            outer(y, 4.0 * p_.a * p_.a * eta, -2.0 * p_.a * eta), 2.0 * p_.a * s * eta};
  }

  Region defining_region() const override { return Region::hopf_shell(p_.center, p_.tau, p_.rho); }

  nlohmann::json params() const override {
    return {{"center", to_std(p_.center)}, {"tau", p_.tau}, {"rho", p_.rho}, {"a", p_.a},
            {"Lambda", c_.Lambda},         {"L", c_.L}};
  }

 private:
  HopfShellParams p_;
  CoercivityConstants c_;
};

}  // namespace

BarrierPtr make_hopf_shell(const OperatorSpec& op, const HopfShellParams& params, Checks checks) {
  auto p = params;
  const int n = static_cast<int>(p.center.size());
  if (n < 1) throw InputError("hopf_shell: center is required");
  if (!(p.rho > 0.0)) throw ConstructionError("hopf_shell: rho must be positive");
  check(op.k == 1.0, checks, "hopf_shell requires k = 1 (got k = " + fmt(op.k) + ")");
  const auto c = coercivity_constants(op, n);
  if (p.a <= 0.0) p.a = 8.0 * c.Lambda / (3.0 * p.rho * p.rho);
  check(3.0 * p.a * p.rho * p.rho / 8.0 >= c.Lambda * (1.0 - 1e-12), checks,
        "hopf_shell: 3 a rho^2 / 8 >= Lambda fails (a = " + fmt(p.a) + ", Lambda = " + fmt(c.Lambda) + ")");
  check(c.L - p.rho / 4.0 > 0.0, checks,
        "hopf_shell: L(Lambda) - rho/4 > 0 fails (L = " + fmt(c.L) + ", rho = " + fmt(p.rho) + ")");
  return std::make_shared<HopfShell>(op, p, c);
}

// ---------------------------------------------------------------------------
// Slanted cylinder: psi = m + amp * phi(d)^2 eta(t) / rho^4

namespace {

class SlantedCylinder final : public Barrier {
 public:
  SlantedCylinder(const OperatorSpec& op, const SlantedCylinderParams& p, const CoercivityConstants& c,
                  double Delta)
      : Barrier(op, static_cast<int>(p.p.size())), p_(p), c_(c), Delta_(Delta), delta_(p.s - p.tau),
        gamma_(p.q - p.p) {}

  BarrierKind kind() const override { return BarrierKind::slanted_cylinder; }
  Sign sign() const override { return Sign::subsolution; }

  Jet jet(const Vec& x, double t) const override {
    const Vec d = x - p_.p - ((t - p_.tau) / delta_) * gamma_;
    const double phi = p_.rho * p_.rho - d.squaredNorm();
    const double eta = (p_.tau + 2.0 * Delta_ - t) / (2.0 * Delta_);
    const double c = p_.amplitude / std::pow(p_.rho, 4);
    const double phi_t = 2.0 * d.dot(gamma_) / delta_;
    return {p_.level + c * phi * phi * eta, -4.0 * c * eta * phi * d, outer(d, 8.0 * c * eta, -4.0 * c * eta * phi),
            c * (2.0 * phi * phi_t * eta - phi * phi / (2.0 * Delta_))};
  }

  Region defining_region() const override {
    return Region::slanted_cylinder(p_.p, p_.tau, gamma_, delta_, p_.rho, Delta_);
  }

  nlohmann::json params() const override {
    return {{"p", to_std(p_.p)},   {"tau", p_.tau},     {"q", to_std(p_.q)},        {"s", p_.s},
            {"rho", p_.rho},       {"level", p_.level}, {"amplitude", p_.amplitude}, {"Delta", Delta_},
            {"Lambda", c_.Lambda}, {"L", c_.L},         {"M_abs", c_.M_abs}};
  }

 private:
  SlantedCylinderParams p_;
  CoercivityConstants c_;
  double Delta_;
  double delta_;
  Vec gamma_;
};

}  // namespace

double slanted_cylinder_height(const OperatorSpec& op, int n, double rho) {
  const auto c = coercivity_constants(op, n);
  return c.upsilon0 * c.upsilon0 * rho * rho / (16.0 * c.M_abs);
}

double slanted_cylinder_max_shift(const OperatorSpec& op, int n, double rho, double delta) {
  const auto c = coercivity_constants(op, n);
  return std::min(c.L / 2.0, c.M_abs) * delta / rho;
}

BarrierPtr make_slanted_cylinder(const OperatorSpec& op, const SlantedCylinderParams& p, Checks checks) {
  const int n = static_cast<int>(p.p.size());
  if (n < 1) throw InputError("slanted_cylinder: p is required");
  require_dim(p.q, n, "slanted_cylinder");
  if (!(p.rho > 0.0)) throw ConstructionError("slanted_cylinder: rho must be positive");
  if (!(p.s > p.tau)) throw ConstructionError("slanted_cylinder: s must exceed tau");
  if (!(p.amplitude > 0.0)) throw ConstructionError("slanted_cylinder: amplitude must be positive");
  check(op.k == 1.0, checks, "slanted_cylinder requires k = 1 (got k = " + fmt(op.k) + ")");
  const auto c = coercivity_constants(op, n);
  const double delta = p.s - p.tau;
  const double Delta = c.upsilon0 * c.upsilon0 * p.rho * p.rho / (16.0 * c.M_abs);
  const double K2 = std::min(c.L / 2.0, c.M_abs);
  const double shift = (p.q - p.p).norm();
  check(shift <= K2 * delta / p.rho * (1.0 + 1e-12), checks,
        "slanted_cylinder: |q - p| <= K2 delta / rho fails (|q - p| = " + fmt(shift) +
            ", bound = " + fmt(K2 * delta / p.rho) + ")");
  return std::make_shared<SlantedCylinder>(op, p, c, Delta);
}

// ---------------------------------------------------------------------------
// Counterexample: xi = m + r^alpha eta(t), eta = (E(2T - t))^(-1/(k-1))

namespace {

class Counterexample final : public Barrier {
 public:
  Counterexample(const OperatorSpec& op, int n, const CounterexampleParams& p, double alpha, double c, double L,
                 double E)
      : Barrier(op, n), p_(p), alpha_(alpha), c_(c), L_(L), E_(E) {}

  BarrierKind kind() const override { return BarrierKind::counterexample_k_gt_1; }
  Sign sign() const override { return Sign::supersolution; }

  Jet jet(const Vec& x, double t) const override {
    const double k = op_.k;
    const double eta = std::pow(E_ * (2.0 * p_.T - t), -1.0 / (k - 1.0));
    const double eta_t = E_ * std::pow(eta, k) / (k - 1.0);
    const Vec y = x - p_.center;
    const double r = y.norm();
    Jet j;
    j.grad = Vec::Zero(n_);
    j.hess = SymmetricMatrix(n_);
    if (r == 0.0) {
      if (alpha_ < 2.0) throw DomainError("counterexample: Hessian is singular at the axis for k > 3");
      j.value = p_.m;
      if (alpha_ == 2.0) j.hess = (2.0 * eta) * SymmetricMatrix::identity(n_);
      j.dt = 0.0;
      return j;
    }
    const double ra = std::pow(r, alpha_);
    const double g = alpha_ * std::pow(r, alpha_ - 2.0) * eta;  // phi'(r)/r * eta
    j.value = p_.m + ra * eta;
    j.grad = g * y;
    j.hess = outer(y, g * (alpha_ - 2.0) / (r * r), g);
    j.dt = ra * eta_t;
    return j;
  }

  Region defining_region() const override {
    const double r_min = alpha_ < 2.0 ? kSingularExclusion * p_.R : 0.0;
    return Region::ball_time(p_.center, r_min, p_.R, 0.0, p_.T);
  }

  nlohmann::json params() const override {
    return {{"m", p_.m}, {"T", p_.T}, {"R", p_.R}, {"center", to_std(p_.center)},
            {"alpha", alpha_}, {"c", c_}, {"L", L_}, {"E", E_}};
  }

  [[nodiscard]] double alpha() const { return alpha_; }

 private:
  CounterexampleParams p_;
  double alpha_, c_, L_, E_;
};

}  // namespace

BarrierPtr make_counterexample(const OperatorSpec& op, int n, double k, const CounterexampleParams& params) {
  if (!(k > 1.0)) throw DomainError("counterexample requires k > 1 (got k = " + fmt(k) + ")");
  if (std::abs(k - op.k) > 1e-12)
    throw ConstructionError("counterexample: k = " + fmt(k) + " does not match the operator's k = " + fmt(op.k));
  auto p = params;
  if (p.center.size() == 0) p.center = Vec::Zero(n);
  require_dim(p.center, n, "counterexample");
  if (!(p.m > 0.0 && p.T > 0.0 && p.R > 0.0)) throw ConstructionError("counterexample requires m, T, R > 0");
  const double alpha = (k + 1.0) / (k - 1.0);
  const double L = max_H_rank_one(op, n, 1.0, 0.0);
  if (!(L > 0.0)) throw ConstructionError("counterexample: max_e H(e, I) must be positive");
  const double hmax = max_H_rank_one(op, n, 1.0, alpha - 2.0);
  // small relative safety margin on the sampled maximum
  const double c = std::max(std::pow(alpha, k) * hmax * (1.0 + 1e-12) / L, 1e-12);
  const double E = c * (k - 1.0) * L / std::pow(p.m, k - 1.0);
  return std::make_shared<Counterexample>(op, n, p, alpha, c, L, E);
}

// ---------------------------------------------------------------------------
// Cylinder minimum barrier: psi = m + eps phi(r)^2 eta(t)

namespace {

class CylinderMin final : public Barrier {
 public:
  CylinderMin(const OperatorSpec& op, const CylinderMinParams& p, const CoercivityConstants& c, double bound)
      : Barrier(op, static_cast<int>(p.p.size())), p_(p), c_(c), bound_(bound) {}

  BarrierKind kind() const override { return BarrierKind::cylinder_min; }
  Sign sign() const override { return Sign::subsolution; }

  Jet jet(const Vec& x, double t) const override {
    const double delta = p_.T - p_.tau;
    const Vec y = x - p_.p;
    const double phi = p_.rho * p_.rho - y.squaredNorm();
    const double eta = (p_.tau + 2.0 * delta - t) / (2.0 * delta);
    const double e = p_.eps;
    return {p_.m + e * phi * phi * eta, -4.0 * e * eta * phi * y, outer(y, 8.0 * e * eta, -4.0 * e * eta * phi),
            -e * phi * phi / (2.0 * delta)};
  }

  Region defining_region() const override { return Region::ball_time(p_.p, 0.0, p_.rho, p_.tau, p_.T); }

  nlohmann::json params() const override {
    return {{"p", to_std(p_.p)}, {"tau", p_.tau},        {"T", p_.T},           {"rho", p_.rho},
            {"m", p_.m},         {"eps", p_.eps},        {"eps_bound", bound_}, {"Lambda", c_.Lambda},
            {"M_abs", c_.M_abs}, {"upsilon0", c_.upsilon0}};
  }

 private:
  CylinderMinParams p_;
  CoercivityConstants c_;
  double bound_;
};

}  // namespace

double cylinder_min_eps_bound(const OperatorSpec& op, int n, double tau, double T, double rho, double m) {
  const auto c = coercivity_constants(op, n);
  const double k = op.k;
  const double delta = T - tau;
  const double lead = std::pow(m, k - 1.0) * std::pow(c.upsilon0, 4) / (2.0 * delta);
  const double coef = std::pow(4.0, k) * std::pow(rho, 3.0 * k - 5.0) * c.M_abs;
  if (k == 1.0) return lead - coef >= 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return std::pow(lead / coef, 1.0 / (k - 1.0));
}

BarrierPtr make_cylinder_min(const OperatorSpec& op, const CylinderMinParams& params, Checks checks) {
  auto p = params;
  const int n = static_cast<int>(p.p.size());
  if (n < 1) throw InputError("cylinder_min: p is required");
  if (!(p.T > p.tau)) throw ConstructionError("cylinder_min: T must exceed tau");
  if (!(p.rho > 0.0 && p.m > 0.0)) throw ConstructionError("cylinder_min requires rho > 0 and m > 0");
  const auto c = coercivity_constants(op, n);
  const double bound = cylinder_min_eps_bound(op, n, p.tau, p.T, p.rho, p.m);
  if (p.eps <= 0.0) {
    if (!std::isfinite(bound)) throw ConstructionError("cylinder_min: eps must be given explicitly when unbounded");
    p.eps = 0.5 * bound;
  }
  check(p.eps <= bound * (1.0 + 1e-12), checks,
        "cylinder_min: eps = " + fmt(p.eps) + " exceeds the admissible bound " + fmt(bound));
  if (!(p.eps > 0.0)) throw ConstructionError("cylinder_min: eps must be positive");
  return std::make_shared<CylinderMin>(op, p, c, bound);
}

// ---------------------------------------------------------------------------
// Auxiliary functions for the large-time limits

ExteriorGeometry exterior_geometry(const Shape& shape, const Vec& z) {
  require_dim(z, shape.dim(), "exterior_geometry");
  ExteriorGeometry g;
  g.R_inf = shape.inf_distance(z);
  g.R_sup = shape.sup_distance(z);
  g.diameter = shape.diameter();
  if (!(g.R_inf > 0.0)) throw ConstructionError("exterior point z must lie outside the closure of the domain");
  return g;
}

double exp_growth_rate_bound(const OperatorSpec& op, const Shape& shape, const Vec& z, double E) {
  const auto g = exterior_geometry(shape, z);
  const double minH = min_H_rank_one(op, shape.dim(), 1.0, 0.0);
  return std::pow(2.0 * E, op.k) * std::pow(g.R_inf, op.k - 1.0) * minH;
}

double exp_decay_rate_bound(const OperatorSpec& op, const Shape& shape, const Vec& z, double E) {
  const auto g = exterior_geometry(shape, z);
  const double kappa = 2.0 * E * std::pow(g.R_inf + g.diameter, 2);
  const double J = max_H_rank_one(op, shape.dim(), -1.0, kappa);
  return std::pow(2.0 * E, op.k) * std::pow(g.R_inf, op.k - 1.0) * std::abs(J);
}

namespace {

class ExpGrowthSub final : public Barrier {
 public:
  ExpGrowthSub(const OperatorSpec& op, const Shape& shape, const Vec& z, const ExpGrowthParams& p, double a_max)
      : Barrier(op, shape.dim()), shape_(shape), z_(z), p_(p), a_max_(a_max) {}

  BarrierKind kind() const override { return BarrierKind::exp_growth_sub; }
  Sign sign() const override { return Sign::subsolution; }

  Jet jet(const Vec& x, double t) const override {
    const Vec y = x - z_;
    const double ex = std::exp(p_.a * (t - p_.T0));
    const double xi = p_.D * std::exp(p_.E * y.squaredNorm()) * ex / (ex + p_.F);
    return {xi, 2.0 * p_.E * xi * y, outer(y, 4.0 * p_.E * p_.E * xi, 2.0 * p_.E * xi),
            xi * p_.a * p_.F / (ex + p_.F)};
  }

  Region defining_region() const override { return Region::shape_time(shape_, p_.T0, p_.t_end); }

  nlohmann::json params() const override {
    return {{"z", to_std(z_)}, {"D", p_.D},         {"E", p_.E},         {"F", p_.F},
            {"a", p_.a},       {"a_bound", a_max_}, {"T0", p_.T0},       {"t_end", p_.t_end},
            {"shape", shape_.to_json()}};
  }

 private:
  Shape shape_;
  Vec z_;
  ExpGrowthParams p_;
  double a_max_;
};

class ExpDecaySuper final : public Barrier {
 public:
  ExpDecaySuper(const OperatorSpec& op, const Shape& shape, const Vec& z, const ExpDecayParams& p, double kappa,
                double a_max)
      : Barrier(op, shape.dim()), shape_(shape), z_(z), p_(p), kappa_(kappa), a_max_(a_max) {}

  BarrierKind kind() const override { return BarrierKind::exp_decay_super; }
  Sign sign() const override { return Sign::supersolution; }

  Jet jet(const Vec& x, double t) const override {
    const Vec y = x - z_;
    const double beta = p_.D * std::exp(-p_.E * y.squaredNorm());
    const double decay = p_.F * std::exp(-p_.a * (t - p_.T0));
    const double zeta = beta * (1.0 + decay);
    return {zeta, -2.0 * p_.E * zeta * y, outer(y, 4.0 * p_.E * p_.E * zeta, -2.0 * p_.E * zeta),
            -beta * p_.a * decay};
  }

  Region defining_region() const override { return Region::shape_time(shape_, p_.T0, p_.t_end); }

  nlohmann::json params() const override {
    return {{"z", to_std(z_)}, {"D", p_.D},   {"E", p_.E},         {"F", p_.F},      {"a", p_.a},
            {"kappa", kappa_}, {"a_bound", a_max_}, {"T0", p_.T0}, {"t_end", p_.t_end}, {"shape", shape_.to_json()}};
  }

 private:
  Shape shape_;
  Vec z_;
  ExpDecayParams p_;
  double kappa_;
  double a_max_;
};

}  // namespace

ExpGrowthParams exp_growth_params_for(const OperatorSpec& op, const Shape& shape, const Vec& z, double m0,
                                      double target, double a_fraction, double T0, double t_end) {
  if (!(m0 > 0.0 && target > m0)) throw ConstructionError("exp_growth: requires target > m0 > 0");
  if (!(a_fraction > 0.0 && a_fraction < 1.0)) throw ConstructionError("exp_growth: a_fraction must be in (0,1)");
  const auto g = exterior_geometry(shape, z);
  ExpGrowthParams p;
  p.D = m0;
  p.E = std::log(target / m0) / std::pow(g.R_inf + g.diameter, 2);
  p.F = target / m0 - 1.0;
  p.a = a_fraction * exp_growth_rate_bound(op, shape, z, p.E);
  p.T0 = T0;
  p.t_end = t_end;
  return p;
}

ExpDecayParams exp_decay_params_for(const OperatorSpec& op, const Shape& shape, const Vec& z, double kappa,
                                    double target, double M0, double a_fraction, double T0, double t_end) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw ConstructionError("exp_decay: kappa must be in (0,1)");
  if (!(target > 0.0 && M0 >= target)) throw ConstructionError("exp_decay: requires M0 >= target > 0");
  if (!(a_fraction > 0.0 && a_fraction < 1.0)) throw ConstructionError("exp_decay: a_fraction must be in (0,1)");
  const auto g = exterior_geometry(shape, z);
  ExpDecayParams p;
  p.D = std::exp(kappa / 2.0) * target;
  p.E = kappa / (2.0 * std::pow(g.R_inf + g.diameter, 2));
  p.F = M0 / target - 1.0;
  p.a = a_fraction * exp_decay_rate_bound(op, shape, z, p.E);
  p.T0 = T0;
  p.t_end = t_end;
  return p;
}

BarrierPtr make_exp_growth_sub(const OperatorSpec& op, const Shape& shape, const Vec& z, const ExpGrowthParams& p) {
  exterior_geometry(shape, z);
  if (!(p.D > 0.0 && p.E > 0.0 && p.F >= 0.0)) throw ConstructionError("exp_growth_sub requires D, E > 0, F >= 0");
  if (!(p.t_end >= p.T0)) throw ConstructionError("exp_growth_sub: t_end must not precede T0");
  const double a_max = exp_growth_rate_bound(op, shape, z, p.E);
  if (!(p.a > 0.0 && p.a < a_max))
    throw ConstructionError("exp_growth_sub: 0 < a < (2E)^k R^(k-1) min H(w, I) fails (a = " + fmt(p.a) +
                            ", bound = " + fmt(a_max) + ")");
  return std::make_shared<ExpGrowthSub>(op, shape, z, p, a_max);
}

BarrierPtr make_exp_decay_super(const OperatorSpec& op, const Shape& shape, const Vec& z, const ExpDecayParams& p) {
  const auto g = exterior_geometry(shape, z);
  if (!(p.D > 0.0 && p.E > 0.0 && p.F >= 0.0)) throw ConstructionError("exp_decay_super requires D, E > 0, F >= 0");
  if (!(p.t_end >= p.T0)) throw ConstructionError("exp_decay_super: t_end must not precede T0");
  const double kappa = 2.0 * p.E * std::pow(g.R_inf + g.diameter, 2);
  if (!(kappa < 1.0)) throw ConstructionError("exp_decay_super: kappa = 2E(R+D)^2 < 1 fails (kappa = " + fmt(kappa) + ")");
  const double J = max_H_rank_one(op, shape.dim(), -1.0, kappa);
  if (!(J < 0.0)) throw ConstructionError("exp_decay_super: J = max H(w, kappa w(x)w - I) < 0 fails (J = " + fmt(J) + ")");
  const double a_max = exp_decay_rate_bound(op, shape, z, p.E);
  if (!(p.a > 0.0 && p.a < a_max))
    throw ConstructionError("exp_decay_super: 0 < a < (2E)^k R^(k-1) |J| fails (a = " + fmt(p.a) +
                            ", bound = " + fmt(a_max) + ")");
  return std::make_shared<ExpDecaySuper>(op, shape, z, p, kappa, a_max);
}

std::pair<BarrierPtr, BarrierPtr> make_asymptotic_pair(const OperatorSpec& op, const Shape& shape, const Vec& z,
                                                       const ExpGrowthParams& sub, const ExpDecayParams& super) {
  return {make_exp_growth_sub(op, shape, z, sub), make_exp_decay_super(op, shape, z, super)};
}

// ---------------------------------------------------------------------------
// Power-law decay barriers

double PowerProfile::value(const Vec& x) const {
  const double r = (x - center).norm();
  return sign * (1.0 + A * (std::pow(R, alpha) - std::pow(r, alpha)));
}

PowerProfile power_profile(const OperatorSpec& op, const Shape& shape, DecaySide side) {
  const int n = shape.dim();
  const double k = op.k;
  PowerProfile prof;
  prof.alpha = (k + 1.0) / k;
  prof.center = shape.center();
  prof.R = shape.sup_distance(prof.center);
  prof.sign = side == DecaySide::super ? 1.0 : -1.0;
  double h = 0.0;
  if (side == DecaySide::super) {
    // H(e, (2 - alpha) e(x)e - I) < 0; the profile needs its largest value.
    h = -max_H_rank_one(op, n, -1.0, 2.0 - prof.alpha);
  } else {
    // H(e, I + (alpha - 2) e(x)e) > 0; the profile needs its smallest value.
    h = min_H_rank_one(op, n, 1.0, prof.alpha - 2.0);
  }
  if (!(h > 0.0)) throw ConstructionError("power_decay: the radial profile is not admissible for " + op.describe());
  prof.A = 1.0 / (prof.alpha * std::pow(h, 1.0 / k));
  prof.M_psi = 1.0 + prof.A * std::pow(prof.R, prof.alpha);
  return prof;
}

namespace {

class PowerDecay final : public Barrier {
 public:
  PowerDecay(const OperatorSpec& op, const Shape& shape, DecaySide side, const PowerDecayParams& p,
             const PowerProfile& prof, double anchor_min)
      : Barrier(op, shape.dim()), shape_(shape), side_(side), p_(p), prof_(prof), anchor_min_(anchor_min) {}

  BarrierKind kind() const override {
    return side_ == DecaySide::super ? BarrierKind::power_decay_super : BarrierKind::power_decay_sub;
  }
  Sign sign() const override { return side_ == DecaySide::super ? Sign::supersolution : Sign::subsolution; }

  Jet jet(const Vec& x, double t) const override {
    const double k = op_.k;
    const double tau = std::pow(p_.T_anchor / t, 1.0 / (k - 1.0));
    const double tau_t = -tau / ((k - 1.0) * t);
    const Vec y = x - prof_.center;
    const double r = y.norm();
    if (r == 0.0) throw DomainError("power_decay: the profile is singular at the center");
    const double a = prof_.alpha;
    const double psi = prof_.value(x);
    // d/dr of psi = -sign * A * a * r^(a-1)
    const double g = -prof_.sign * prof_.A * a * std::pow(r, a - 2.0);
    const double scale = p_.eps * tau;
    return {p_.nu + scale * psi, scale * g * y, outer(y, scale * g * (a - 2.0) / (r * r), scale * g),
            p_.eps * psi * tau_t};
  }

  Region defining_region() const override {
    return Region::shape_time(shape_, p_.T_anchor, p_.t_end, prof_.center, kSingularExclusion * prof_.R);
  }

  nlohmann::json params() const override {
    return {{"nu", p_.nu},          {"eps", p_.eps},     {"T_anchor", p_.T_anchor}, {"anchor_min", anchor_min_},
            {"t_end", p_.t_end},    {"A", prof_.A},      {"alpha", prof_.alpha},    {"R", prof_.R},
            {"M_psi", prof_.M_psi}, {"shape", shape_.to_json()}};
  }

 private:
  Shape shape_;
  DecaySide side_;
  PowerDecayParams p_;
  PowerProfile prof_;
  double anchor_min_;
};

}  // namespace

BarrierPtr make_power_decay(const OperatorSpec& op, const Shape& shape, DecaySide side, const PowerDecayParams& params) {
  const double k = op.k;
  if (!(k > 1.0)) throw ConstructionError("power_decay requires k > 1 (got k = " + fmt(k) + ")");
  auto p = params;
  if (!(p.nu > 0.0 && p.eps > 0.0)) throw ConstructionError("power_decay requires nu > 0 and eps > 0");
  const auto prof = power_profile(op, shape, side);
  const double Mp = prof.M_psi;
  double anchor_min = 0.0;
  if (side == DecaySide::super) {
    anchor_min = Mp * std::pow(p.nu + p.eps * Mp, k - 1.0) / ((k - 1.0) * std::pow(p.eps, k - 1.0));
  } else {
    if (!(p.nu - p.eps * Mp > 0.0))
      throw ConstructionError("power_decay_sub: nu - eps M_psi > 0 fails (M_psi = " + fmt(Mp) + ")");
    anchor_min = std::pow(p.nu, k - 1.0) * Mp / ((k - 1.0) * std::pow(p.eps, k - 1.0));
  }
  anchor_min = std::max(anchor_min, p.T0);
  if (p.T_anchor <= 0.0) p.T_anchor = anchor_min;
  if (p.T_anchor < anchor_min * (1.0 - 1e-12))
    throw ConstructionError("power_decay: anchor " + fmt(p.T_anchor) + " is below the minimum anchor " +
                            fmt(anchor_min));
  if (p.t_end <= 0.0) p.t_end = 16.0 * p.T_anchor;
  return std::make_shared<PowerDecay>(op, shape, side, p, prof, anchor_min);
}

// ---------------------------------------------------------------------------
// Exponential decay barrier from a positive eigen-supersolution profile

namespace {

struct EigenProfile {
  bool cosine = false;
  double A = 0.0;
  double lambda = 0.0;
  // cosine product
  Vec omega, mid;
  // radial power
  double alpha = 0.0, beta = 0.0, R = 0.0;
  Vec center;
};

EigenProfile eigen_profile(const OperatorSpec& op, const Shape& shape, double M) {
  const int n = shape.dim();
  EigenProfile e;
  if (op.family == OperatorFamily::laplacian && shape.kind() != ShapeKind::ball) {
    e.cosine = true;
    e.mid = shape.center();
    e.omega = Vec(n);
    double corner = 1.0;
    for (int i = 0; i < n; ++i) {
      const double len = shape.upper()(i) - shape.lower()(i);
      e.omega(i) = 0.95 * M_PI / len;
      e.lambda += e.omega(i) * e.omega(i);
      corner *= std::cos(0.5 * e.omega(i) * len);
    }
    e.A = M / corner;
    return e;
  }
  const double k = op.k;
  e.alpha = (k + 1.0) / k;
  e.center = shape.center();
  e.R = shape.sup_distance(e.center);
  e.beta = 1.05 * std::pow(e.R, e.alpha);
  const double hmax = max_H_rank_one(op, n, -1.0, 2.0 - e.alpha);
  if (!(hmax < 0.0)) throw ConstructionError("eigen_exponential: radial profile not admissible for " + op.describe());
  e.lambda = std::pow(e.alpha, k) * (-hmax) / std::pow(e.beta, k);
  e.A = M / (e.beta - std::pow(e.R, e.alpha));
  return e;
}

class EigenExponential final : public Barrier {
 public:
  EigenExponential(const OperatorSpec& op, const Shape& shape, const EigenExponentialParams& p, EigenProfile prof)
      : Barrier(op, shape.dim()), shape_(shape), p_(p), prof_(std::move(prof)) {}

  BarrierKind kind() const override { return BarrierKind::eigen_exponential; }
  Sign sign() const override { return Sign::supersolution; }

  Jet jet(const Vec& x, double t) const override {
    const double decay = std::exp(-p_.lambda * (t - p_.T0));
    Jet j;
    j.grad = Vec::Zero(n_);
    j.hess = SymmetricMatrix(n_);
    double psi = 0.0;
    if (prof_.cosine) {
      Vec c(n_), s(n_);
      for (int i = 0; i < n_; ++i) {
        c(i) = std::cos(prof_.omega(i) * (x(i) - prof_.mid(i)));
        s(i) = std::sin(prof_.omega(i) * (x(i) - prof_.mid(i)));
      }
      psi = prof_.A * c.prod();
      for (int i = 0; i < n_; ++i) {
        double gi = -prof_.A * prof_.omega(i) * s(i);
        for (int l = 0; l < n_; ++l)
          if (l != i) gi *= c(l);
        j.grad(i) = gi;
        for (int m = i; m < n_; ++m) {
          double hij = prof_.A;
          for (int l = 0; l < n_; ++l) {
            if (l == i && l == m) {
              hij *= -prof_.omega(l) * prof_.omega(l) * c(l);
            } else if (l == i || l == m) {
              hij *= -prof_.omega(l) * s(l);
            } else {
              hij *= c(l);
            }
          }
          j.hess.set(i, m, hij);
        }
      }
    } else {
      const Vec y = x - prof_.center;
      const double r = y.norm();
      const double a = prof_.alpha;
      if (r == 0.0) {
        if (a < 2.0) throw DomainError("eigen_exponential: the profile is singular at the center");
        psi = prof_.A * prof_.beta;
        j.hess = (-2.0 * prof_.A) * SymmetricMatrix::identity(n_);
      } else {
        psi = prof_.A * (prof_.beta - std::pow(r, a));
        const double g = -prof_.A * a * std::pow(r, a - 2.0);
        j.grad = g * y;
        j.hess = outer(y, g * (a - 2.0) / (r * r), g);
      }
    }
    j.value = decay * psi;
    j.grad *= decay;
    j.hess *= decay;
    j.dt = -p_.lambda * j.value;
    return j;
  }

  Region defining_region() const override {
    if (!prof_.cosine && prof_.alpha < 2.0)
      return Region::shape_time(shape_, p_.T0, p_.t_end, prof_.center, kSingularExclusion * prof_.R);
    return Region::shape_time(shape_, p_.T0, p_.t_end);
  }

  nlohmann::json params() const override {
    nlohmann::json j{{"M", p_.M},           {"T0", p_.T0}, {"t_end", p_.t_end}, {"lambda", p_.lambda},
                     {"lambda_profile", prof_.lambda}, {"A", prof_.A}, {"profile", prof_.cosine ? "cosine" : "radial"},
                     {"shape", shape_.to_json()}};
    if (!prof_.cosine) {
      j["alpha"] = prof_.alpha;
      j["beta"] = prof_.beta;
    }
    return j;
  }

 private:
  Shape shape_;
  EigenExponentialParams p_;
  EigenProfile prof_;
};

}  // namespace

double eigen_exponential_rate(const OperatorSpec& op, const Shape& shape) {
  return eigen_profile(op, shape, 1.0).lambda;
}

BarrierPtr make_eigen_exponential(const OperatorSpec& op, const Shape& shape, const EigenExponentialParams& params) {
  auto p = params;
  if (!(p.M > 0.0)) throw ConstructionError("eigen_exponential requires M > 0");
  if (!(p.t_end >= p.T0)) throw ConstructionError("eigen_exponential: t_end must not precede T0");
  auto prof = eigen_profile(op, shape, p.M);
  if (p.lambda <= 0.0) p.lambda = prof.lambda;
  if (p.lambda > prof.lambda * (1.0 + 1e-12))
    throw ConstructionError("eigen_exponential: lambda = " + fmt(p.lambda) + " exceeds the profile rate " +
                            fmt(prof.lambda));
  return std::make_shared<EigenExponential>(op, shape, p, std::move(prof));
}

// ---------------------------------------------------------------------------
// Perron barriers for the elliptic problems

namespace {

class Perron final : public Barrier {
 public:
  Perron(const OperatorSpec& op, const Shape& shape, const PerronParams& p, bool sub, const Vec& q, double alpha,
         double E, double Lambda, double diam)
      : Barrier(op, shape.dim()), shape_(shape), p_(p), sub_(sub), q_(q), alpha_(alpha), E_(E), Lambda_(Lambda),
        diam_(diam) {}

  BarrierKind kind() const override { return sub_ ? BarrierKind::perron_sub : BarrierKind::perron_super; }
  Sign sign() const override { return sub_ ? Sign::subsolution : Sign::supersolution; }
  bool stationary() const override { return true; }
  double forcing() const override { return sub_ ? p_.delta : -p_.delta; }

  Jet jet(const Vec& x, double) const override {
    const Vec y = x - q_;
    const double r = y.norm();
    if (!(r > 0.0)) throw DomainError("perron barrier is singular at the outer ball center");
    const double s = sub_ ? 1.0 : -1.0;
    const double ra = std::pow(r, -alpha_);
    const double g = -s * E_ * alpha_ * ra / (r * r);  // f'(r)/r
    return {p_.theta + s * E_ * (ra - std::pow(p_.rho, -alpha_)), g * y,
            outer(y, -g * (alpha_ + 2.0) / (r * r), g), 0.0};
  }

  Region defining_region() const override { return Region::shape_time(shape_, 0.0, 0.0); }

  nlohmann::json params() const override {
    return {{"y", to_std(p_.y)}, {"q", to_std(q_)},   {"rho", p_.rho},   {"theta", p_.theta},
            {"delta", p_.delta}, {"alpha", alpha_},   {"E", E_},         {"Lambda", Lambda_},
            {"diameter", diam_}, {"shape", shape_.to_json()}};
  }

 private:
  Shape shape_;
  PerronParams p_;
  bool sub_;
  Vec q_;
  double alpha_, E_, Lambda_, diam_;
};

}  // namespace

std::pair<BarrierPtr, BarrierPtr> make_perron_pair(const OperatorSpec& op, const Shape& shape, const PerronParams& p) {
  const int n = shape.dim();
  require_dim(p.y, n, "perron");
  if (!(p.rho > 0.0 && p.delta > 0.0)) throw ConstructionError("perron requires rho > 0 and delta > 0");
  const double tol = 1e-9 * (1.0 + shape.diameter());
  if (std::abs(shape.depth(p.y)) > tol) throw ConstructionError("perron: y must lie on the boundary");
  const Vec q = p.y + p.rho * shape.outward_normal(p.y);
  if (shape.inf_distance(q) < p.rho - tol)
    throw ConstructionError("perron: the outer ball B_rho(q) meets the domain");
  const auto c = coercivity_constants(op, n, 1.0, 3.0);
  const double alpha = c.Lambda - 2.0;
  const double diam = shape.diameter();
  const double k = op.k;
  const double E = std::pow(p.delta * std::pow(p.rho + diam, k * alpha + k + 1.0) / std::abs(c.M_Lambda), 1.0 / k) /
                   alpha;
  return {std::make_shared<Perron>(op, shape, p, true, q, alpha, E, c.Lambda, diam),
          std::make_shared<Perron>(op, shape, p, false, q, alpha, E, c.Lambda, diam)};
}

}  // namespace dnp
