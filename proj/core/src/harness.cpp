#include "dnp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "dnp/barriers.hpp"
#include "dnp/elliptic.hpp"
#include "dnp/error.hpp"
#include "dnp/grid.hpp"

namespace dnp {

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Sorted union of the given times with duplicates (to 1e-12) removed.
std::vector<double> merge_times(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  std::vector<double> out;
  for (double t : a)
    if (out.empty() || t - out.back() > 1e-12 * (1.0 + std::abs(t))) out.push_back(t);
  return out;
}

int snapshot_index(const Trajectory& traj, double t) {
  for (int s = 0; s < traj.n_snapshots(); ++s)
    if (std::abs(traj.times[s] - t) <= 1e-12 * (1.0 + std::abs(t))) return s;
  throw InputError("no snapshot at t = " + fmt(t));
}

std::shared_ptr<const GridDomain> make_grid(const Shape& shape, double h) {
  return std::make_shared<const GridDomain>(GridDomain::build(shape, h));
}

// Piecewise linear (1D) or bilinear (2D lattice) interpolation of a nodal field.
class FieldInterpolator {
 public:
  explicit FieldInterpolator(const GridDomain& g) : g_(g) {
    const Shape& s = g.shape();
    const int n = g.dim();
    if (n == 1) {
      order_.resize(static_cast<std::size_t>(g.size()));
      for (int i = 0; i < g.size(); ++i) order_[i] = i;
      std::sort(order_.begin(), order_.end(), [&](int a, int b) { return g.point(a)(0) < g.point(b)(0); });
      return;
    }
    origin_ = s.kind() == ShapeKind::ball ? s.center() : s.lower();
    step_ = Vec(n);
    for (int d = 0; d < n; ++d) {
      if (s.kind() == ShapeKind::ball) {
        step_(d) = g.spacing();
      } else {
        const double len = s.upper()(d) - s.lower()(d);
        step_(d) = len / std::max(1.0, std::round(len / g.spacing()));
      }
    }
    for (int i = 0; i < g.size(); ++i) {
      const Vec& x = g.point(i);
      const double a = (x(0) - origin_(0)) / step_(0), b = (x(1) - origin_(1)) / step_(1);
      const long ia = std::lround(a), ib = std::lround(b);
      if (std::abs(a - ia) < 1e-9 && std::abs(b - ib) < 1e-9) lattice_[{ia, ib}] = i;
    }
  }

  double at(const std::vector<double>& u, const Vec& x) const {
    if (g_.dim() == 1) {
      const double v = x(0);
      const auto it = std::lower_bound(order_.begin(), order_.end(), v,
                                       [&](int i, double val) { return g_.point(i)(0) < val; });
      if (it == order_.end()) {
        if (std::abs(g_.point(order_.back())(0) - v) < 1e-12) return u[order_.back()];
        throw DomainError("interpolation point lies outside the grid");
      }
      const int hi = *it;
      const double xh = g_.point(hi)(0);
      if (std::abs(xh - v) < 1e-14 * (1.0 + std::abs(v))) return u[hi];
      if (it == order_.begin()) throw DomainError("interpolation point lies outside the grid");
      const int lo = *(it - 1);
      const double xl = g_.point(lo)(0);
      const double w = (v - xl) / (xh - xl);
      return (1.0 - w) * u[lo] + w * u[hi];
    }
    const double a = (x(0) - origin_(0)) / step_(0), b = (x(1) - origin_(1)) / step_(1);
    long ia = static_cast<long>(std::floor(a + 1e-12)), ib = static_cast<long>(std::floor(b + 1e-12));
    double wa = a - ia, wb = b - ib;
    if (wa < 1e-12) wa = 0.0;
    if (wb < 1e-12) wb = 0.0;
    auto node = [&](long i, long j, double w) -> double {
      if (w == 0.0) return 0.0;
      const auto it = lattice_.find({i, j});
      if (it == lattice_.end()) throw DomainError("interpolation cell is not a full lattice cell");
      return w * u[it->second];
    };
    return node(ia, ib, (1 - wa) * (1 - wb)) + node(ia + 1, ib, wa * (1 - wb)) + node(ia, ib + 1, (1 - wa) * wb) +
           node(ia + 1, ib + 1, wa * wb);
  }

 private:
  const GridDomain& g_;
  std::vector<int> order_;
  Vec origin_, step_;
  std::map<std::pair<long, long>, int> lattice_;
};

// Trajectory with the fields of `like` mapped through f(value).
template <class F>
Trajectory map_values(Trajectory traj, F f) {
  for (auto& field : traj.fields)
    for (auto& v : field) v = f(v);
  return traj;
}

double field_max(const std::vector<double>& u) { return *std::max_element(u.begin(), u.end()); }
double field_min(const std::vector<double>& u) { return *std::min_element(u.begin(), u.end()); }

Vec bump_center(const BumpData& b, const Shape& shape) { return b.center.size() ? b.center : shape.center(); }
double bump_radius(const BumpData& b, const Shape& shape) {
  return b.radius > 0.0 ? b.radius : 0.25 * shape.diameter();
}

void construction_failure(ExperimentReport& r, const std::string& name, const std::exception& e) {
  r.add({"construction:" + name, false, 0.0, 0.0, {{"error", e.what()}}});
}

// Interior minimum per snapshot and the strict-margin check for t > 0.
Check margin_check(const std::string& name, const Trajectory& traj, double m, double threshold, bool vacuous,
                   double scheme_tol, std::vector<SnapshotMin>* minima) {
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < traj.n_snapshots(); ++s) {
    int node = -1;
    const double v = traj.interior_min(s, &node);
    if (minima) minima->push_back({traj.times[s], v, v - m, node, traj.grid->point(node)});
    if (traj.times[s] > 0.0) worst = std::min(worst, v - m);
  }
  const bool pass = vacuous ? std::abs(worst) <= 10.0 * scheme_tol : worst > threshold;
  return {name, pass, worst, threshold, {{"vacuous", vacuous}}};
}

}  // namespace

nlohmann::json Check::to_json() const {
  return {{"name", name}, {"pass", pass}, {"value", value}, {"threshold", threshold}, {"detail", detail}};
}

void ExperimentReport::add(Check c) {
  pass = pass && c.pass;
  checks.push_back(std::move(c));
}

void ExperimentReport::add_comparison(const std::string& name, const ComparisonReport& report) {
  add({"comparison:" + name, report.pass, report.excess, report.tol, report.to_json()});
}

bool ExperimentReport::add_certificate(const std::string& name, const SignCertificate& cert) {
  add({"certificate:" + name, cert.pass, cert.worst_margin, -kCertTolerance, cert.to_json()});
  return cert.pass;
}

const Check* ExperimentReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j{{"experiment", experiment}, {"pass", pass}, {"data", data}};
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) j["checks"].push_back(c.to_json());
  j["fits"] = nlohmann::json::array();
  for (const auto& f : fits) j["fits"].push_back(f.to_json());
  j["series"] = nlohmann::json::object();
  for (const auto& [name, traj] : series) j["series"][name] = traj.summary();
  return j;
}

double margin_threshold(double scheme_tol, double excess) { return std::max(10.0 * scheme_tol, 1e-6 * excess); }

// ---------------------------------------------------------------------------

MinPrincipleReport run_min_principle_k1(const MinPrincipleConfig& c) {
  if (c.op.k != 1.0) throw InputError("run_min_principle_k1 requires k = 1 (got k = " + fmt(c.op.k) + ")");
  if (!(c.m > 0.0)) throw InputError("run_min_principle_k1 requires m > 0");
  if (c.bump.amplitude < 0.0) throw InputError("bump amplitude must be non-negative");
  MinPrincipleReport r;
  r.experiment = "min-principle-k1";
  r.m = c.m;
  const auto grid = make_grid(c.shape, c.h);
  const int n = c.shape.dim();
  const Vec center = bump_center(c.bump, c.shape);
  const double radius = bump_radius(c.bump, c.shape);
  const double amp = c.bump.amplitude;
  ParabolicProblem prob{c.op, grid, c.T_end, InitialData::bump(center, radius, c.m, amp),
                        BoundaryData::constant(c.m)};
  std::vector<double> times = c.times;
  if (times.empty()) {
    times = {0.05};
    for (double t = 0.1; t <= c.T_end + 1e-12; t += 0.1) times.push_back(std::min(t, c.T_end));
  }
  times = merge_times({0.0}, times);
  const Trajectory traj = evolve(prob, times, c.evolve);
  const double excess = field_max(traj.fields[0]) - c.m;
  r.threshold = margin_threshold(c.scheme_tol, excess);
  r.add(margin_check("interior_margin", traj, c.m, r.threshold, excess <= 0.0, c.scheme_tol, &r.minima));
  r.data = {{"problem", prob.to_json()}, {"sup_u0_minus_m", excess}, {"threshold", r.threshold}};
  nlohmann::json mins = nlohmann::json::array();
  for (const auto& s : r.minima)
    mins.push_back({{"t", s.t}, {"min", s.value}, {"margin", s.margin}, {"location", to_std(s.location)}});
  r.data["minima"] = mins;

  if (c.barrier_check) {
    try {
      const double rho = 0.5 * radius;
      const double Delta = slanted_cylinder_height(c.op, n, rho);
      const double shift = 0.5 * slanted_cylinder_max_shift(c.op, n, rho, Delta);
      SlantedCylinderParams sp;
      sp.p = center;
      sp.tau = 0.0;
      sp.q = center;
      sp.q(0) += shift;
      sp.s = Delta;
      sp.rho = rho;
      sp.level = c.m;
      sp.amplitude = excess > 0.0 ? 0.4 * amp : 1e-3 * c.m;
      const auto barrier = make_slanted_cylinder(c.op, sp);
      r.data["barrier"] = barrier->to_json();
      if (r.add_certificate("slanted_cylinder", certify(*barrier))) {
        auto short_prob = prob;
        short_prob.T_end = Delta;
        const Trajectory u = evolve(short_prob, linear_times(0.0, Delta, 8), c.evolve);
        const Trajectory psi = sample_barrier(*barrier, u);
        const Vec gamma = sp.q - sp.p;
        const auto mask = region_mask(u, [&](const Vec& x, double t) {
          return t <= Delta * (1.0 + 1e-12) && (x - sp.p - (t / Delta) * gamma).norm() <= rho;
        });
        r.add_comparison("slanted_cylinder", compare_quotient(psi, u, mask));
      }
    } catch (const ConstructionError& e) {
      construction_failure(r, "slanted_cylinder", e);
    }
  }
  r.series.emplace_back("solution", traj);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> theta_ladder(double rho) {
  std::vector<double> th;
  for (int j = 3; j <= 8; ++j) th.push_back(rho * std::ldexp(1.0, -j));
  return th;
}

// Minimum over the two smallest theta.
double liminf_proxy(const std::vector<double>& q) { return std::min(q[q.size() - 1], q[q.size() - 2]); }

void add_counterexample_hopf(ExperimentReport& r, const Barrier& xi, double m, double R, double tau,
                             double fail_threshold) {
  const int n = xi.dim();
  const double rho = 0.5 * R;
  Vec gamma = Vec::Zero(n);
  gamma(0) = 1.0;  // (z - o)/|z| with z = rho e1
  std::vector<double> q;
  nlohmann::json rows = nlohmann::json::array();
  for (double th : theta_ladder(rho)) {
    const double v = (xi.value(th * gamma, tau) - m) / th;
    q.push_back(v);
    rows.push_back({{"theta", th}, {"quotient", v}});
  }
  const double proxy = liminf_proxy(q);
  r.data["xi_quotients"] = rows;
  r.add({"hopf_quotient_fails", proxy < fail_threshold, proxy, fail_threshold,
         {{"z", rho}, {"tau", tau}, {"direction", to_std(gamma)}}});
}

}  // namespace

ExperimentReport run_hopf_check(const HopfConfig& c) {
  ExperimentReport r;
  if (c.source == HopfConfig::Source::counterexample) {
    r.experiment = "hopf-counterexample";
    if (!(c.op.k > 1.0)) throw InputError("the counterexample source requires k > 1");
    const int n = c.dim;
    CounterexampleParams cp;
    cp.m = c.m;
    cp.T = c.T;
    cp.R = c.R;
    const auto xi = make_counterexample(c.op, n, c.op.k, cp);
    r.data["barrier"] = xi->to_json();
    const double tau = (c.tau > 0.0 && c.tau < c.T) ? c.tau : 0.5 * c.T;
    const bool ok = r.add_certificate("counterexample", certify(*xi));
    add_counterexample_hopf(r, *xi, c.m, c.R, tau, c.fail_threshold);
    if (!ok) return r;
    // The solution on U = B_rho(z) with the parabolic data of xi stays below xi.
    const double rho = 0.5 * c.R;
    Vec z = Vec::Zero(n);
    z(0) = rho;
    const Shape U = Shape::ball(z, rho);
    const auto grid = make_grid(U, rho / 64.0);
    auto xi_value = [xi, m = c.m](const Vec& x, double t) {
      try {
        return xi->value(x, t);
      } catch (const DomainError&) {
        return m;
      }
    };
    double sup0 = c.m;
    for (const auto& x : grid->points()) sup0 = std::max(sup0, xi_value(x, c.T));
    ParabolicProblem prob{c.op, grid, c.T, InitialData::function([=](const Vec& x) { return xi_value(x, 0.0); },
                                                                 {{"kind", "counterexample"}}),
                          BoundaryData::function(xi_value, c.m, sup0, std::nullopt, {{"kind", "counterexample"}})};
    const Trajectory u = evolve(prob, merge_times(linear_times(0.0, c.T, 10), {tau}));
    const Trajectory v = sample_barrier(*xi, u);
    const Trajectory vv = map_values(v, [m = c.m](double x) { return std::isfinite(x) ? x : m; });
    r.add_comparison("counterexample", compare_quotient(u, vv));
    const FieldInterpolator interp(*grid);
    const int s = snapshot_index(u, tau);
    Vec o = Vec::Zero(n);
    std::vector<double> q;
    nlohmann::json rows = nlohmann::json::array();
    for (double th : theta_ladder(rho)) {
      Vec x = o;
      x(0) += th;
      const double val = (interp.at(u.fields[s], x) - interp.at(u.fields[s], o)) / th;
      q.push_back(val);
      rows.push_back({{"theta", th}, {"quotient", val}});
    }
    r.data["solution_quotients"] = rows;
    r.data["solution_liminf_proxy"] = liminf_proxy(q);
    r.series.emplace_back("solution", u);
    return r;
  }

  r.experiment = "hopf-check";
  if (c.op.k != 1.0) throw InputError("run_hopf_check requires k = 1 (got k = " + fmt(c.op.k) + ")");
  if (c.shape.kind() == ShapeKind::ball && c.shape.dim() > 1)
    throw InputError("run_hopf_check supports intervals and boxes");
  if (!(c.tau > 0.0 && c.rho > 0.0)) throw InputError("run_hopf_check requires tau > 0 and rho > 0");
  const int n = c.shape.dim();
  const double tol = 1e-9 * (1.0 + c.shape.diameter());
  const Vec p = c.p.size() ? c.p : c.shape.lower();
  if (p.size() != n) throw InputError("boundary point has the wrong dimension");
  if (std::abs(c.shape.depth(p)) > tol) throw InputError("p must lie on the boundary");
  const Vec nrm = c.shape.outward_normal(p);
  Vec gx = c.gamma.size() ? c.gamma : Vec(-nrm);
  if (gx.size() != n) throw InputError("gamma has the wrong dimension");
  const double gnorm = std::sqrt(gx.squaredNorm() + c.gamma_t * c.gamma_t);
  if (!(gnorm > 0.0)) throw InputError("gamma must be nonzero");
  gx /= gnorm;
  const double gt = c.gamma_t / gnorm;
  if (-gx.dot(nrm) < 1e-3) throw InputError("gamma is tangential or outward at p; an inward non-tangential direction is required");

  const auto grid = make_grid(c.shape, c.h);
  const auto thetas = theta_ladder(c.rho);
  std::vector<double> qtimes;
  for (double th : thetas) {
    const Vec x = p + th * gx;
    if (!c.shape.contains(x, tol)) throw InputError("p + theta gamma leaves the domain; reduce rho");
    qtimes.push_back(c.tau + th * gt);
  }
  for (double t : qtimes)
    if (t < 0.0) throw InputError("tau + theta gamma_t must be non-negative");

  double rho_s = std::min({0.5, 4.0 * c.tau, 0.45 * c.shape.diameter()});
  const auto coef = coercivity_constants(c.op, n);
  rho_s = std::min(rho_s, 2.0 * coef.L);  // L - rho/4 > 0
  const Vec q = p - rho_s * nrm;
  const double t_lo = c.tau - rho_s / 4.0;
  const auto shell_times = linear_times(t_lo, c.tau, 16);
  std::vector<double> times = merge_times(merge_times({0.0}, shell_times), qtimes);
  ParabolicProblem prob{c.op, grid, times.back(), InitialData::sine(c.shape, c.m, c.amplitude),
                        BoundaryData::constant(c.m)};
  const Trajectory u = evolve(prob, times);
  const FieldInterpolator interp(*grid);
  const int s0 = snapshot_index(u, c.tau);
  const double u_p = interp.at(u.fields[s0], p);
  double bmin = std::numeric_limits<double>::infinity();
  for (int i = grid->n_interior(); i < grid->size(); ++i) bmin = std::min(bmin, u.fields[s0][i]);
  r.add({"p_attains_boundary_min", u_p <= bmin + 1e-12 * (1.0 + std::abs(bmin)), u_p, bmin, {}});
  std::vector<double> quot;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    const int s = snapshot_index(u, qtimes[j]);
    const double v = (interp.at(u.fields[s], p + thetas[j] * gx) - u_p) / thetas[j];
    quot.push_back(v);
    rows.push_back({{"theta", thetas[j]}, {"quotient", v}});
  }
  const double proxy = liminf_proxy(quot);
  r.add({"hopf_quotient", proxy >= c.threshold, proxy, c.threshold,
         {{"p", to_std(p)}, {"gamma", to_std(gx)}, {"gamma_t", gt}, {"tau", c.tau}}});
  r.data = {{"problem", prob.to_json()}, {"quotients", rows}};

  try {
    HopfShellParams hp;
    hp.center = q;
    hp.tau = c.tau;
    hp.rho = rho_s;
    const auto shell = make_hopf_shell(c.op, hp);
    r.data["barrier"] = shell->to_json();
    if (r.add_certificate("hopf_shell", certify(*shell))) {
      auto inside = [&](const Vec& x, double t) {
        const double d2 = (x - q).squaredNorm() + (c.tau - t) * (c.tau - t);
        return t >= t_lo - 1e-12 && t <= c.tau + 1e-12 && d2 >= rho_s * rho_s / 4.0 && d2 <= rho_s * rho_s;
      };
      const auto mask = region_mask(u, inside);
      const Trajectory psi = sample_barrier(*shell, u);
      double eps = std::numeric_limits<double>::infinity();
      for (int s = 0; s < u.n_snapshots(); ++s)
        for (int i = 0; i < grid->size(); ++i)
          if (mask.roles[s][i] == NodeRole::boundary && psi.fields[s][i] > 0.0)
            eps = std::min(eps, (u.fields[s][i] - c.m) / psi.fields[s][i]);
      eps *= 0.5;
      r.data["shell_eps"] = eps;
      if (!(eps > 0.0 && std::isfinite(eps))) {
        r.add({"shell_eps_positive", false, eps, 0.0, {}});
      } else {
        const Trajectory sub = map_values(psi, [&](double v) { return c.m + eps * v; });
        r.add_comparison("hopf_shell", compare_quotient(sub, u, mask));
      }
    }
  } catch (const ConstructionError& e) {
    construction_failure(r, "hopf_shell", e);
  }
  r.series.emplace_back("solution", u);
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport run_k_gt_1_example(const KGreaterOneConfig& c) {
  if (!(c.op.k > 1.0)) throw InputError("run_k_gt_1_example requires k > 1 (got k = " + fmt(c.op.k) + ")");
  ExperimentReport r;
  r.experiment = "k-gt-1-example";
  const int n = c.dim;

  // (i) the counterexample and its minimum set
  CounterexampleParams cp;
  cp.m = c.m;
  cp.T = c.T;
  cp.R = c.R;
  const auto xi = make_counterexample(c.op, n, c.op.k, cp);
  r.data["counterexample"] = xi->to_json();
  r.add_certificate("counterexample", certify(*xi));
  const double alpha = xi->params()["alpha"].get<double>();
  {
    const auto g = make_grid(Shape::ball(Vec::Zero(n), c.R), c.h_axis);
    double worst_min = 0.0, worst_other = std::numeric_limits<double>::infinity(), worst_r = 0.0;
    for (int s = 0; s < c.n_slices; ++s) {
      const double t = c.T * s / std::max(1, c.n_slices - 1);
      double vmin = std::numeric_limits<double>::infinity(), rmin = 0.0;
      for (int i = 0; i < g->size(); ++i) {
        const Vec& x = g->point(i);
        const double rr = x.norm();
        const double v = rr == 0.0 ? c.m : xi->value(x, t);
        if (v < vmin) {
          vmin = v;
          rmin = rr;
        }
        if (rr >= c.h_axis * (1.0 - 1e-9)) worst_other = std::min(worst_other, v - c.m);
      }
      worst_min = std::max(worst_min, std::abs(vmin - c.m));
      worst_r = std::max(worst_r, rmin);
    }
    r.add({"slice_min_equals_m", worst_min <= 1e-12 * c.m, worst_min, 1e-12 * c.m, {}});
    r.add({"min_attained_only_at_axis", worst_r < c.h_axis && worst_other > 0.0, worst_other, 0.0,
           {{"argmin_radius", worst_r}, {"h", c.h_axis}}});
    double gmax = 0.0;
    for (int s = 0; s < c.n_slices; ++s) {
      const double t = c.T * s / std::max(1, c.n_slices - 1);
      if (alpha >= 2.0) {
        const Jet j = xi->jet(Vec::Zero(n), t);
        gmax = std::max(gmax, std::sqrt(j.grad.squaredNorm() + j.dt * j.dt));
      }
    }
    r.add({"axis_spacetime_gradient", gmax < 1e-6, gmax, 1e-6,
           {{"evaluation", alpha >= 2.0 ? "analytic jet" : "analytic limit r^(alpha-1) -> 0"}}});
  }
  add_counterexample_hopf(r, *xi, c.m, c.R, 0.5 * c.T, 1e-3);

  // (ii), (iii) persistence and domination of the cylinder barrier
  const auto grid = make_grid(c.shape, c.h);
  const Vec p = bump_center(c.bump, c.shape);
  const double radius = bump_radius(c.bump, c.shape);
  ParabolicProblem prob{c.op, grid, c.T_cyl, InitialData::bump(p, radius, c.m, c.bump.amplitude),
                        BoundaryData::constant(c.m)};
  const auto times = merge_times({0.0}, linear_times(c.tau, c.T_cyl, c.n_snapshots));
  const Trajectory u = evolve(prob, times, c.evolve);
  r.data["problem"] = prob.to_json();
  const int s_tau = snapshot_index(u, c.tau);
  int ip = grid->nearest(p, true);
  const double rp = (grid->point(ip) - p).norm();
  r.add({"u(p,tau)_exceeds_m", u.fields[s_tau][ip] > c.m, u.fields[s_tau][ip] - c.m, 0.0, {}});
  double eps_data = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid->size(); ++i) {
    const double rr = (grid->point(i) - p).norm();
    if (rr >= c.rho) continue;
    const double phi = c.rho * c.rho - rr * rr;
    eps_data = std::min(eps_data, (u.fields[s_tau][i] - c.m) / (phi * phi));
  }
  const double bound = cylinder_min_eps_bound(c.op, c.shape.dim(), c.tau, c.T_cyl,
                                              c.rho, c.m);
  const double eps = std::min(0.5 * bound, 0.9 * eps_data);
  r.data["cylinder_eps"] = {{"data", eps_data}, {"bound", bound}, {"used", eps}};
  try {
    CylinderMinParams mp;
    mp.p = p;
    mp.tau = c.tau;
    mp.T = c.T_cyl;
    mp.rho = c.rho;
    mp.m = c.m;
    mp.eps = eps;
    const auto psi_b = make_cylinder_min(c.op, mp);
    r.data["cylinder_barrier"] = psi_b->to_json();
    if (r.add_certificate("cylinder_min", certify(*psi_b))) {
      const Trajectory psi = sample_barrier(*psi_b, u);
      const auto mask = region_mask(u, [&](const Vec& x, double t) {
        return t >= c.tau * (1.0 - 1e-12) && (x - p).norm() <= c.rho;
      });
      const auto cmp = compare_quotient(psi, u, mask);
      r.add({"boundary_ordering", cmp.boundary_max <= 1.0 + kCompareTolerance, cmp.boundary_max,
             1.0 + kCompareTolerance, {}});
      r.add_comparison("cylinder_min", cmp);
      const double delta = c.T_cyl - c.tau;
      double worst = std::numeric_limits<double>::infinity(), cyl_min = std::numeric_limits<double>::infinity();
      for (int s = s_tau; s < u.n_snapshots(); ++s) {
        const double t = u.times[s];
        const double eta = (c.tau + 2.0 * delta - t) / (2.0 * delta);
        const double phi = c.rho * c.rho - rp * rp;
        worst = std::min(worst, (u.fields[s][ip] - c.m) - eps * phi * phi * eta);
        for (int i = 0; i < grid->size(); ++i)
          if ((grid->point(i) - p).norm() < c.rho) cyl_min = std::min(cyl_min, u.fields[s][i] - c.m);
      }
      r.add({"persistence_margin_at_p", worst >= -c.scheme_tol, worst, -c.scheme_tol, {}});
      r.add({"persistence_cylinder", cyl_min > 0.0, cyl_min, 0.0, {{"rho", c.rho}}});
    }
  } catch (const ConstructionError& e) {
    construction_failure(r, "cylinder_min", e);
  }
  {
    int node = -1;
    r.data["k_gt_1_first_snapshot_margin"] = u.interior_min(std::min(1, u.n_snapshots() - 1), &node) - c.m;
  }
  r.series.emplace_back("solution", u);

  if (c.control) {
    auto control = prob;
    control.op = OperatorSpec::laplacian();
    const Trajectory v = evolve(control, times, c.evolve);
    const double excess = field_max(v.fields[0]) - c.m;
    auto chk = margin_check("k1_control_min_propagates", v, c.m, margin_threshold(c.scheme_tol, excess),
                            excess <= 0.0, c.scheme_tol, nullptr);
    r.add(chk);
    r.series.emplace_back("control", v);
  }
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport run_asymptotics(const AsymptoticsConfig& c) {
  ExperimentReport r;
  r.experiment = "asymptotics";
  const auto limit = c.boundary.limit();
  if (!limit) throw InputError("run_asymptotics requires boundary data with a limit");
  const double nu = *limit;
  const auto grid = make_grid(c.shape, c.h);
  ParabolicProblem prob{c.op, grid, c.T_end, c.u0, c.boundary, c.boundary.inf() <= 0.0};
  const Trajectory u = evolve(prob, linear_times(0.0, c.T_end, c.n_snapshots), c.evolve);
  const auto sup_gap = tail_sup(u, nu);      // mu_sup - nu
  const auto inf_gap = tail_inf_gap(u, nu);  // nu - mu_inf
  const int ns = u.n_snapshots();
  const int w = ns - static_cast<int>(std::ceil(0.5 * ns));
  nlohmann::json rows = nlohmann::json::array();
  for (int s = 0; s < ns; ++s)
    rows.push_back({{"t", u.times[s]}, {"mu_sup", sup_gap[s] + nu}, {"mu_inf", nu - inf_gap[s]}});
  r.data = {{"problem", prob.to_json()}, {"nu", nu}, {"window_start", u.times[w]}, {"tails", rows}};
  r.add({"mu_sup_limit", std::abs(sup_gap[w]) < c.tol, std::abs(sup_gap[w]), c.tol, {{"t", u.times[w]}}});
  r.add({"mu_inf_limit", std::abs(inf_gap[w]) < c.tol, std::abs(inf_gap[w]), c.tol, {{"t", u.times[w]}}});

  if (c.envelopes) {
    const double u_min = std::min(field_min(u.fields[0]), c.boundary.inf());
    const double u_max = std::max(field_max(u.fields[0]), c.boundary.sup());
    if (!(u_min > 0.0)) {
      r.data["envelopes"] = "skipped: data is not positive";
    } else {
      const int n = c.shape.dim();
      Vec z = c.shape.center();
      z(0) += c.shape.radius() + 0.5 * c.shape.diameter();
      try {
        const auto gp = exp_growth_params_for(c.op, c.shape, z, 0.99 * u_min, c.boundary.inf() * (1.0 - 1e-3), 0.5,
                                              0.0, c.T_end);
        const auto sub = make_exp_growth_sub(c.op, c.shape, z, gp);
        r.data["sub_envelope"] = sub->to_json();
        if (r.add_certificate("exp_growth_sub", certify(*sub)))
          r.add_comparison("exp_growth_sub", compare_quotient(sample_barrier(*sub, u), u));
      } catch (const ConstructionError& e) {
        construction_failure(r, "exp_growth_sub", e);
      }
      try {
        const double target = c.boundary.sup() * (1.0 + 1e-3);
        const auto dp =
            exp_decay_params_for(c.op, c.shape, z, 0.5, target, std::max(1.01 * u_max, target), 0.5, 0.0, c.T_end);
        const auto super = make_exp_decay_super(c.op, c.shape, z, dp);
        r.data["super_envelope"] = super->to_json();
        if (r.add_certificate("exp_decay_super", certify(*super)))
          r.add_comparison("exp_decay_super", compare_quotient(u, sample_barrier(*super, u)));
      } catch (const ConstructionError& e) {
        construction_failure(r, "exp_decay_super", e);
      }
      (void)n;
    }
  }
  r.series.emplace_back("solution", u);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Smallest eps with the super-side anchor bound <= T_a, by bisection in log eps.
double super_anchor_eps(double Mp, double nu, double k, double T_a) {
  auto anchor = [&](double e) { return Mp * std::pow(nu + e * Mp, k - 1.0) / ((k - 1.0) * std::pow(e, k - 1.0)); };
  const double floor_anchor = std::pow(Mp, k) / (k - 1.0);
  if (!(T_a > floor_anchor * (1.0 + 1e-9)))
    throw ConstructionError("power_decay: anchor " + fmt(T_a) + " is below the smallest attainable anchor " +
                            fmt(floor_anchor));
  double lo = 1e-12, hi = 1.0;
  while (anchor(hi) > T_a) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (anchor(mid) > T_a ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

ExperimentReport run_decay(const DecayConfig& c) {
  ExperimentReport r;
  const auto grid = make_grid(c.shape, c.h);
  const double k = c.op.k;
  if (c.model == RateModel::power) {
    r.experiment = "decay-power";
    if (!(k > 1.0)) throw InputError("power decay requires k > 1");
    if (!(c.nu > 0.0)) throw InputError("power decay requires nu > 0");
    if (!(c.t_first > 0.0 && c.t_last > c.t_first)) throw InputError("power decay needs 0 < t_first < t_last");
    ParabolicProblem prob{c.op, grid, c.t_last, c.u0, BoundaryData::constant(c.nu)};
    const auto times = merge_times({0.0}, geometric_times(c.t_first, c.t_last, c.n_snapshots - 1));
    const Trajectory u = evolve(prob, times, c.evolve);
    r.data["problem"] = prob.to_json();
    try {
      const auto fit = fit_decay(u, c.nu, RateModel::power, c.tail_fraction);
      r.fits.push_back(fit);
      r.add({"power_exponent", fit.exponent >= c.min_exponent, fit.exponent, c.min_exponent, fit.to_json()});
      r.add({"power_r2", fit.r2 >= c.min_r2, fit.r2, c.min_r2, {}});
      const double T_a = fit.t0;
      const int s_a = snapshot_index(u, T_a);
      const auto prof = power_profile(c.op, c.shape, DecaySide::super);
      const double r_ex = 0.02 * prof.R * (1.0 + 1e-9);
      auto inside = [&](const Vec& x, double t) {
        return t >= T_a * (1.0 - 1e-12) && (x - prof.center).norm() >= r_ex;
      };
      const auto mask = region_mask(u, inside);
      double eps_data = 0.0;
      for (int i = 0; i < grid->size(); ++i)
        if ((grid->point(i) - prof.center).norm() >= r_ex)
          eps_data = std::max(eps_data, (u.fields[s_a][i] - c.nu) / prof.value(grid->point(i)));
      try {
        PowerDecayParams pp;
        pp.nu = c.nu;
        pp.eps = std::max(eps_data, super_anchor_eps(prof.M_psi, c.nu, k, T_a)) * (1.0 + 1e-9);
        pp.T_anchor = T_a;
        pp.t_end = c.t_last;
        const auto super = make_power_decay(c.op, c.shape, DecaySide::super, pp);
        r.data["super_barrier"] = super->to_json();
        if (r.add_certificate("power_decay_super", certify(*super)))
          r.add_comparison("power_decay_super", compare_quotient(u, sample_barrier(*super, u), mask));
      } catch (const ConstructionError& e) {
        construction_failure(r, "power_decay_super", e);
      }
      // One-sided lower envelope, only meaningful when u dips below nu.
      const auto gap = tail_inf_gap(u, c.nu);
      if (gap[s_a] > 0.0) {
        const auto sp = power_profile(c.op, c.shape, DecaySide::sub);
        double eps_sub = 0.0;
        for (int i = 0; i < grid->size(); ++i)
          if ((grid->point(i) - sp.center).norm() >= r_ex)
            eps_sub = std::max(eps_sub, (c.nu - u.fields[s_a][i]) / -sp.value(grid->point(i)));
        eps_sub = std::max(eps_sub, std::pow(std::pow(c.nu, k - 1.0) * sp.M_psi / ((k - 1.0) * T_a), 1.0 / (k - 1.0)));
        eps_sub *= 1.0 + 1e-9;
        try {
          PowerDecayParams pp;
          pp.nu = c.nu;
          pp.eps = eps_sub;
          pp.T_anchor = T_a;
          pp.t_end = c.t_last;
          const auto sub = make_power_decay(c.op, c.shape, DecaySide::sub, pp);
          r.data["sub_barrier"] = sub->to_json();
          if (r.add_certificate("power_decay_sub", certify(*sub))) {
            r.add_comparison("power_decay_sub", compare_quotient(sample_barrier(*sub, u), u, mask));
            const double C = eps_sub * sp.M_psi * std::pow(T_a, 1.0 / (k - 1.0));
            double worst = std::numeric_limits<double>::infinity();
            for (int s = s_a; s < u.n_snapshots(); ++s)
              worst = std::min(worst, u.inf(s) - (c.nu - C * std::pow(u.times[s], -1.0 / (k - 1.0))));
            r.add({"lower_envelope", worst >= -kCompareTolerance, worst, -kCompareTolerance, {{"C", C}}});
          }
        } catch (const ConstructionError& e) {
          construction_failure(r, "power_decay_sub", e);
        }
      } else {
        r.data["sub_barrier"] = "skipped: inf u does not fall below nu";
      }
    } catch (const FitError& e) {
      r.add({"power_fit", false, 0.0, 0.0, {{"error", e.what()}}});
    }
    r.series.emplace_back("solution", u);
    return r;
  }

  r.experiment = "decay-exponential";
  if (c.nu != 0.0) throw InputError("exponential decay requires nu = 0");
  ParabolicProblem prob{c.op, grid, c.t_last, c.u0, BoundaryData::constant(0.0), true};
  const Trajectory u = evolve(prob, linear_times(0.0, c.t_last, c.n_snapshots), c.evolve);
  r.data["problem"] = prob.to_json();
  try {
    const auto fit = fit_decay(u, 0.0, RateModel::exponential, c.tail_fraction);
    r.fits.push_back(fit);
    r.add({"exponential_r2", fit.r2 >= c.min_r2, fit.r2, c.min_r2, fit.to_json()});
    if (c.expected_rate)
      r.add({"exponential_rate", std::abs(fit.exponent - *c.expected_rate) <= c.rate_tol, fit.exponent,
             *c.expected_rate, {{"tol", c.rate_tol}}});
    if (c.estimate) {
      auto est = estimate_lambda(c.op, grid, 1.0, 4.0 * std::max(fit.exponent, 1.0));
      auto ej = est.to_json();
      ej.erase("psi");
      r.data["lambda_estimate"] = ej;
      r.add({"rate_vs_lambda_estimate", fit.exponent >= est.lambda_lo - c.estimate_slack, fit.exponent,
             est.lambda_lo - c.estimate_slack, {{"bracket", {est.lambda_lo, est.lambda_hi}}}});
    }
  } catch (const FitError& e) {
    r.add({"exponential_fit", false, 0.0, 0.0, {{"error", e.what()}}});
  }
  try {
    EigenExponentialParams ep;
    ep.M = 1.0;
    ep.T0 = 0.0;
    ep.t_end = c.t_last;
    const auto unit = make_eigen_exponential(c.op, c.shape, ep);
    double M = 0.0;
    for (int i = 0; i < grid->size(); ++i) {
      double psi = std::numeric_limits<double>::quiet_NaN();
      try {
        psi = unit->value(grid->point(i), 0.0);
      } catch (const DomainError&) {
        continue;
      }
      M = std::max(M, u.fields[0][i] / psi);
    }
    ep.M = std::max(M, 1e-300) * (1.0 + 1e-9);
    const auto super = make_eigen_exponential(c.op, c.shape, ep);
    r.data["super_barrier"] = super->to_json();
    if (r.add_certificate("eigen_exponential", certify(*super))) {
      const Trajectory v = sample_barrier(*super, u);
      const auto mask = region_mask(u, [&](const Vec&, double) { return true; });
      ComparisonMask m2 = mask;
      for (int s = 0; s < u.n_snapshots(); ++s)
        for (int i = 0; i < grid->size(); ++i)
          if (!std::isfinite(v.fields[s][i])) m2.roles[s][i] = NodeRole::outside;
      r.add_comparison("eigen_exponential", compare_quotient(u, v, m2));
    }
  } catch (const ConstructionError& e) {
    construction_failure(r, "eigen_exponential", e);
  }
  r.series.emplace_back("solution", u);
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport run_comparison_suite(const ComparisonSuiteConfig& c) {
  ExperimentReport r;
  r.experiment = "comparison-suite";
  std::mt19937_64 rng(c.seed);
  auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  const std::vector<OperatorSpec> ops{OperatorSpec::laplacian(), OperatorSpec::pucci_max(1.0, 2.0),
                                      OperatorSpec::p_laplacian(3.0), OperatorSpec::infinity_laplacian()};
  nlohmann::json pairs = nlohmann::json::array();
  for (int i = 0; i < c.n_pairs; ++i) {
    const OperatorSpec op = ops[static_cast<std::size_t>(i) % ops.size()];
    const int n = (i % 5 == 4) ? 2 : 1;
    const double a = U(-1.0, 1.0);
    const double L = std::round(U(0.5, 2.0) / c.h) * c.h;
    const Shape shape = n == 1 ? Shape::interval(a, a + L)
                               : Shape::box((Vec(2) << a, a).finished(), (Vec(2) << a + L, a + L).finished());
    const bool power = op.k > 1.0 && (i / ops.size()) % 2 == 1;
    nlohmann::json pj{{"index", i}, {"operator", op.describe()}, {"shape", shape.to_json()},
                      {"type", power ? "power_decay" : "exp_envelope"}};
    bool ok = true;
    double excess = std::numeric_limits<double>::quiet_NaN();
    try {
      BarrierPtr sub, super;
      double T0 = 0.0, T1 = 0.0;
      if (!power) {
        Vec dir = Vec::Zero(n);
        for (int d = 0; d < n; ++d) dir(d) = U(-1.0, 1.0);
        if (dir.norm() < 1e-3) dir(0) = 1.0;
        dir.normalize();
        const Vec z = shape.center() + (shape.radius() + U(0.2, 1.0) * shape.diameter()) * dir;
        const double m0 = U(0.5, 2.0);
        const double t_sub = m0 * U(1.05, 2.0);
        const double t_super = t_sub * U(1.0, 1.5);
        const double M0 = t_super * U(1.0, 2.0);
        T1 = U(0.5, 5.0);
        sub = make_exp_growth_sub(op, shape, z, exp_growth_params_for(op, shape, z, m0, t_sub, U(0.1, 0.9), 0.0, T1));
        super = make_exp_decay_super(op, shape, z,
                                     exp_decay_params_for(op, shape, z, U(0.2, 0.9), t_super, M0, U(0.1, 0.9), 0.0, T1));
      } else {
        const double nu = U(0.5, 2.0);
        const auto ps = power_profile(op, shape, DecaySide::sub);
        PowerDecayParams sp, up;
        sp.nu = up.nu = nu;
        sp.eps = U(0.1, 0.9) * nu / ps.M_psi;
        up.eps = U(0.05, 1.0);
        const auto s0 = make_power_decay(op, shape, DecaySide::sub, sp);
        const auto u0 = make_power_decay(op, shape, DecaySide::super, up);
        T0 = std::max(s0->params()["anchor_min"].get<double>(), u0->params()["anchor_min"].get<double>());
        T1 = T0 * U(4.0, 16.0);
        sp.T_anchor = up.T_anchor = T0;
        sp.t_end = up.t_end = T1;
        sub = make_power_decay(op, shape, DecaySide::sub, sp);
        super = make_power_decay(op, shape, DecaySide::super, up);
      }
      pj["sub"] = sub->to_json();
      pj["super"] = super->to_json();
      const auto cs = certify(*sub), cu = certify(*super);
      pj["certificates"] = {cs.to_json(), cu.to_json()};
      ok = cs.pass && cu.pass;
      if (ok) {
        Trajectory like;
        like.grid = make_grid(shape, c.h);
        like.times = linear_times(T0, T1, c.n_snapshots - 1);
        const Trajectory vs = sample_barrier(*sub, like), vu = sample_barrier(*super, like);
        ComparisonMask mask;
        if (power) {
          const Vec ctr = shape.center();
          const double r_ex = 0.02 * shape.sup_distance(ctr) * (1.0 + 1e-9);
          mask = region_mask(like, [&](const Vec& x, double) { return (x - ctr).norm() >= r_ex; });
        } else {
          mask = parabolic_mask(like);
        }
        // boundary ordering sub <= super
        double order = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < like.n_snapshots(); ++s)
          for (int j = 0; j < like.grid->size(); ++j)
            if (mask.roles[s][j] == NodeRole::boundary) order = std::max(order, vs.fields[s][j] - vu.fields[s][j]);
        pj["boundary_ordering"] = order;
        ok = ok && order <= 0.0;
        const auto q = compare_quotient(vs, vu, mask, c.tol);
        pj["quotient"] = q.to_json();
        ok = ok && q.pass;
        excess = q.excess;
        if (op.k == 1.0) {
          const auto d = compare_difference(vs, vu, mask, c.tol);
          pj["difference"] = d.to_json();
          ok = ok && d.pass;
          excess = std::max(excess, d.excess);
        }
      }
    } catch (const ConstructionError& e) {
      pj["error"] = e.what();
      ok = false;
    }
    pj["pass"] = ok;
    r.add({"pair_" + std::to_string(i), ok, excess, c.tol, {{"operator", op.describe()}}});
    pairs.push_back(pj);
  }
  r.data["pairs"] = pairs;
  return r;
}

}  // namespace dnp
