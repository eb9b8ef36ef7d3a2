#include "dnp/parabolic.hpp"

#include <algorithm>
#include <cmath>

#include "dnp/error.hpp"
#include "dnp/parallel.hpp"

namespace dnp {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

BoundaryData BoundaryData::constant(double nu) {
  if (!std::isfinite(nu)) throw InputError("boundary value must be finite");
  BoundaryData b;
  b.fn_ = [nu](const Vec&, double) { return nu; };
  b.inf_ = b.sup_ = nu;
  b.limit_ = nu;
  b.descriptor_ = {{"kind", "constant"}, {"nu", nu}};
  return b;
}

BoundaryData BoundaryData::decaying(double nu, double amplitude, double rate) {
  if (!(rate > 0.0)) throw InputError("decaying boundary data needs rate > 0");
  BoundaryData b;
  b.fn_ = [=](const Vec&, double t) { return nu + amplitude * std::exp(-rate * t); };
  b.inf_ = std::min(nu, nu + amplitude);
  b.sup_ = std::max(nu, nu + amplitude);
  b.limit_ = nu;
  b.time_dependent_ = true;
  b.descriptor_ = {{"kind", "decaying"}, {"nu", nu}, {"amplitude", amplitude}, {"rate", rate}};
  return b;
}

BoundaryData BoundaryData::tabulated(std::vector<double> times, std::vector<double> values) {
  if (times.empty() || times.size() != values.size()) throw InputError("tabulated boundary data needs matching times and values");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InputError("tabulated boundary times must be increasing");
  BoundaryData b;
  b.inf_ = *std::min_element(values.begin(), values.end());
  b.sup_ = *std::max_element(values.begin(), values.end());
  b.limit_ = values.back();
  b.time_dependent_ = times.size() > 1;
  b.descriptor_ = {{"kind", "tabulated"}, {"times", times}, {"values", values}};
  b.fn_ = [times = std::move(times), values = std::move(values)](const Vec&, double t) {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[j - 1]) / (times[j] - times[j - 1]);
    return (1.0 - w) * values[j - 1] + w * values[j];
  };
  return b;
}

BoundaryData BoundaryData::function(Fn fn, double inf, double sup, std::optional<double> limit,
                                    nlohmann::json descriptor) {
  if (!(inf <= sup)) throw InputError("boundary bounds must satisfy inf <= sup");
  BoundaryData b;
  b.fn_ = std::move(fn);
  b.inf_ = inf;
  b.sup_ = sup;
  b.limit_ = limit;
  b.time_dependent_ = true;
  b.descriptor_ = std::move(descriptor);
  return b;
}

InitialData InitialData::constant(double c) {
  InitialData d;
  d.fn_ = [c](const Vec&) { return c; };
  d.descriptor_ = {{"kind", "constant"}, {"value", c}};
  return d;
}

InitialData InitialData::sine(const Shape& shape, double base, double amplitude) {
  InitialData d;
  const Vec lo = shape.lower(), hi = shape.upper();
  d.fn_ = [=](const Vec& x) {
    double p = 1.0;
    for (int a = 0; a < x.size(); ++a) p *= std::sin(kPi * (x(a) - lo(a)) / (hi(a) - lo(a)));
    return base + amplitude * p;
  };
  d.descriptor_ = {{"kind", "sine"}, {"base", base}, {"amplitude", amplitude}};
  return d;
}

InitialData InitialData::bump(const Vec& center, double radius, double base, double amplitude) {
  if (!(radius > 0.0)) throw InputError("bump radius must be positive");
  InitialData d;
  d.fn_ = [=](const Vec& x) {
    const double s = (x - center).squaredNorm() / (radius * radius);
    if (s >= 1.0) return base;
    const double w = 1.0 - s;
    return base + amplitude * w * w * w;
  };
  d.descriptor_ = {{"kind", "bump"},
                   {"center", std::vector<double>(center.data(), center.data() + center.size())},
                   {"radius", radius},
                   {"base", base},
                   {"amplitude", amplitude}};
  return d;
}

InitialData InitialData::function(Fn fn, nlohmann::json descriptor) {
  InitialData d;
  d.fn_ = std::move(fn);
  d.descriptor_ = std::move(descriptor);
  return d;
}

void ParabolicProblem::validate() const {
  if (!grid) throw InputError("parabolic problem has no grid");
  if (!(T_end >= 0.0) || !std::isfinite(T_end)) throw InputError("T_end must be finite and >= 0");
  if (!(h.sup() < std::numeric_limits<double>::infinity())) throw InputError("boundary data must be bounded");
  if (eigen_decay) {
    if (h.inf() < 0.0) throw InputError("boundary data must be nonnegative (inf h >= 0)");
  } else if (!(h.inf() > 0.0)) {
    throw InputError("boundary data must satisfy inf h > 0 (set eigen_decay for nu = 0)");
  }
}

double ParabolicProblem::floor() const { return h.inf() > 0.0 ? 1e-8 * h.inf() : 1e-12; }

nlohmann::json ParabolicProblem::to_json() const {
  return {{"operator", op.to_json()},
          {"grid", grid ? grid->to_json() : nlohmann::json()},
          {"T_end", T_end},
          {"initial", u0.to_json()},
          {"boundary", h.to_json()},
          {"eigen_decay", eigen_decay},
          {"floor", floor()}};
}

double Trajectory::sup(int s) const { return *std::max_element(fields[s].begin(), fields[s].end()); }

double Trajectory::inf(int s) const { return *std::min_element(fields[s].begin(), fields[s].end()); }

double Trajectory::interior_min(int s, int* where) const {
  const auto& f = fields[s];
  const auto it = std::min_element(f.begin(), f.begin() + grid->n_interior());
  if (where) *where = static_cast<int>(it - f.begin());
  return *it;
}

nlohmann::json Trajectory::summary() const {
  return {{"mode", to_string(mode)},
          {"floor", floor},
          {"n_snapshots", n_snapshots()},
          {"n_steps", n_steps},
          {"n_floor_clamps", n_floor_clamps},
          {"t_first", times.empty() ? 0.0 : times.front()},
          {"t_last", times.empty() ? 0.0 : times.back()}};
}

std::vector<double> initial_field(const ParabolicProblem& problem, double compat_tol) {
  problem.validate();
  const GridDomain& g = *problem.grid;
  std::vector<double> u(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) {
    const Vec& x = g.point(i);
    if (g.is_interior(i)) {
      u[i] = problem.u0(x);
    } else {
      const double hb = problem.h(x, 0.0);
      const double ub = problem.u0(x);
      if (std::abs(ub - hb) > compat_tol * (1.0 + std::abs(hb)))
        throw InputError("initial and boundary data disagree on the boundary at t = 0 (u0 = " + std::to_string(ub) +
                         ", h = " + std::to_string(hb) + ")");
      u[i] = hb;
    }
    if (!std::isfinite(u[i])) throw InputError("initial data is not finite");
  }
  return u;
}

namespace {

double rate(const ParabolicProblem& p, SchemeMode mode, double ui, double lip) {
  if (mode == SchemeMode::log_variable || p.op.k == 1.0) return lip;
  return lip / std::pow(std::max(ui, p.floor()), p.op.k - 1.0);
}

double cfl_from(const ParabolicProblem& p, SchemeMode mode, const std::vector<double>& u,
                const std::vector<double>& lip) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lip.size(); ++i) worst = std::max(worst, rate(p, mode, u[i], lip[i]));
  return worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
}

struct Stepper {
  const ParabolicProblem& p;
  SchemeMode mode;
  std::vector<double> H, lip;
  long long clamps = 0;

  double prepare(const std::vector<double>& u) {
    discrete_operator_all(p.op, *p.grid, u, mode, H, lip);
    return cfl_from(p, mode, u, lip);
  }

  void apply(const std::vector<double>& u, double t, double dt, std::vector<double>& out) {
    const GridDomain& g = *p.grid;
    out.resize(u.size());
    const double fl = p.floor();
    const double km1 = p.op.k - 1.0;
    for (int i = 0; i < g.n_interior(); ++i) {
      double inc = H[i];
      if (mode == SchemeMode::direct && km1 != 0.0) inc /= std::pow(std::max(u[i], fl), km1);
      double v = u[i] + dt * inc;
      if (mode == SchemeMode::direct && v < fl) {
        v = fl;
        ++clamps;
      }
      out[i] = v;
    }
    for (int i = g.n_interior(); i < g.size(); ++i) {
      const double hb = p.h(g.point(i), t + dt);
      out[i] = mode == SchemeMode::log_variable ? std::log(hb) : hb;
    }
    for (double v : out)
      if (!std::isfinite(v)) throw NumericError("non-finite value after step at t = " + std::to_string(t + dt));
  }
};

}  // namespace

double cfl_bound(const ParabolicProblem& problem, const std::vector<double>& u, SchemeMode mode) {
  for (double v : u)
    if (!std::isfinite(v)) throw NumericError("cfl_bound: field is not finite");
  std::vector<double> H, lip;
  discrete_operator_all(problem.op, *problem.grid, u, mode, H, lip);
  return cfl_from(problem, mode, u, lip);
}

std::vector<double> step(const ParabolicProblem& problem, const std::vector<double>& u, double t, double dt,
                         SchemeMode mode) {
  if (static_cast<int>(u.size()) != problem.grid->size()) throw InputError("field size does not match the grid");
  for (double v : u)
    if (!std::isfinite(v)) throw NumericError("step: field is not finite");
  if (!(dt >= 0.0)) throw StepSizeError("dt must be nonnegative");
  Stepper s{problem, mode, {}, {}, 0};
  const double bound = s.prepare(u);
  if (dt > bound * (1.0 + 1e-12))
    throw StepSizeError("dt = " + std::to_string(dt) + " exceeds the CFL bound " + std::to_string(bound));
  std::vector<double> out;
  s.apply(u, t, dt, out);
  return out;
}

Trajectory evolve(const ParabolicProblem& problem, const std::vector<double>& snapshot_times,
                  const EvolveOptions& options) {
  problem.validate();
  if (!(options.safety > 0.0 && options.safety <= 1.0)) throw InputError("safety must be in (0, 1]");
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    if (snapshot_times[i] < 0.0 || snapshot_times[i] > problem.T_end * (1.0 + 1e-12))
      throw InputError("snapshot times must lie in [0, T_end]");
    if (i > 0 && !(snapshot_times[i] > snapshot_times[i - 1]))
      throw InputError("snapshot times must be strictly increasing");
  }
  Trajectory traj;
  traj.grid = problem.grid;
  traj.mode = options.mode;
  traj.floor = problem.floor();
  std::vector<double> u = initial_field(problem, options.compat_tol);
  if (options.mode == SchemeMode::log_variable) {
    for (double& v : u) {
      if (!(v > 0.0)) throw InputError("log_variable mode needs positive data");
      v = std::log(v);
    }
  }
  auto to_u = [&](std::vector<double> f) {
    if (options.mode == SchemeMode::log_variable)
      for (double& v : f) v = std::exp(v);
    return f;
  };

  std::size_t next = 0;
  double t = 0.0;
  while (next < snapshot_times.size() && snapshot_times[next] <= 0.0) {
    traj.times.push_back(snapshot_times[next]);
    traj.fields.push_back(to_u(u));
    ++next;
  }
  if (next == snapshot_times.size()) return traj;
  const double t_last = snapshot_times.back();
  Stepper s{problem, options.mode, {}, {}, 0};
  std::vector<double> un;
  while (next < snapshot_times.size()) {
    if (traj.n_steps >= options.max_steps)
      throw ConvergenceError("evolve: step limit reached at t = " + std::to_string(t));
    const double bound = s.prepare(u);
    double dt = options.safety * bound;
    if (!std::isfinite(dt)) dt = t_last / 1000.0;
    dt = std::min({dt, options.max_dt, t_last - t});
    if (t + dt >= t_last * (1.0 - 1e-14)) dt = t_last - t;
    s.apply(u, t, dt, un);
    const double tn = (next + 1 == snapshot_times.size() && dt == t_last - t) ? t_last : t + dt;
    while (next < snapshot_times.size() && snapshot_times[next] <= tn) {
      const double w = dt > 0.0 ? (snapshot_times[next] - t) / dt : 1.0;
      std::vector<double> f(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) f[i] = (1.0 - w) * u[i] + w * un[i];
      traj.times.push_back(snapshot_times[next]);
      traj.fields.push_back(to_u(std::move(f)));
      ++next;
    }
    if (options.record_dt) traj.dt_log.push_back(dt);
    ++traj.n_steps;
    u.swap(un);
    t = tn;
  }
  traj.n_floor_clamps = s.clamps;
  return traj;
}

std::vector<double> geometric_times(double t0, double t1, int n) {
  if (!(t0 > 0.0 && t1 > t0 && n >= 1)) throw InputError("geometric_times needs 0 < t0 < t1 and n >= 1");
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) t[i] = t0 * std::pow(t1 / t0, static_cast<double>(i) / n);
  t.back() = t1;
  return t;
}

std::vector<double> linear_times(double t0, double t1, int n) {
  if (!(t1 > t0 && n >= 1)) throw InputError("linear_times needs t0 < t1 and n >= 1");
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) t[i] = t0 + (t1 - t0) * i / n;
  t.back() = t1;
  return t;
}

}  // namespace dnp
