#include "dnplab/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>

#include "dnp/barriers.hpp"
#include "dnp/certify.hpp"
#include "dnp/elliptic.hpp"
#include "dnp/error.hpp"
#include "dnp/field_io.hpp"
#include "dnp/grid.hpp"
#include "dnp/harness.hpp"
#include "dnp/parabolic.hpp"
#include "dnp/rate_fit.hpp"

namespace dnplab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Context {
  const Scenario& scenario;
  const json& cfg;
  fs::path out;
  std::ostream& log;
  dnp::ExperimentReport report;
  json result = json::object();
  std::vector<std::string> artifacts;

  void artifact(const fs::path& p) { artifacts.push_back(fs::relative(p, out).generic_string()); }
};

dnp::Vec to_vec(const json& j) {
  dnp::Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j[i].get<double>();
  return v;
}

dnp::Vec opt_vec(const json& j) { return j.is_array() ? to_vec(j) : dnp::Vec(); }

double opt_num(const json& j, double fallback) { return j.is_number() ? j.get<double>() : fallback; }

dnp::OperatorSpec make_operator(const json& op) {
  std::map<std::string, double> params;
  for (auto it = op.begin(); it != op.end(); ++it)
    if (it.key() != "family" && it.value().is_number()) params[it.key()] = it.value().get<double>();
  return dnp::OperatorSpec::from_name(op["family"].get<std::string>(), params);
}

dnp::Shape make_shape(const json& d) {
  const std::string shape = d["shape"].get<std::string>();
  if (shape == "interval") return dnp::Shape::interval(d["lower"].get<double>(), d["upper"].get<double>());
  if (shape == "box") return dnp::Shape::box(to_vec(d["lower"]), to_vec(d["upper"]));
  return dnp::Shape::ball(to_vec(d["center"]), d["radius"].get<double>());
}

std::shared_ptr<const dnp::GridDomain> make_grid(const json& d) {
  return std::make_shared<const dnp::GridDomain>(dnp::GridDomain::build(make_shape(d), d["h"].get<double>()));
}

dnp::InitialData make_initial(const json& j, const dnp::Shape& shape) {
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "sine") return dnp::InitialData::sine(shape, j["base"].get<double>(), j["amplitude"].get<double>());
  if (kind == "bump") {
    const dnp::Vec c = j["center"].is_array() ? to_vec(j["center"]) : shape.center();
    const double r = opt_num(j["radius"], 0.25 * shape.diameter());
    return dnp::InitialData::bump(c, r, j["base"].get<double>(), j["amplitude"].get<double>());
  }
  return dnp::InitialData::constant(j["value"].get<double>());
}

dnp::BoundaryData make_boundary(const json& j) {
  if (j["kind"].get<std::string>() == "decaying")
    return dnp::BoundaryData::decaying(j["nu"].get<double>(), j["amplitude"].get<double>(), j["rate"].get<double>());
  return dnp::BoundaryData::constant(j["nu"].get<double>());
}

dnp::BumpData make_bump(const json& e) {
  dnp::BumpData b;
  b.center = opt_vec(e["bump_center"]);
  b.radius = opt_num(e["bump_radius"], 0.0);
  b.amplitude = e["amplitude"].get<double>();
  return b;
}

dnp::EvolveOptions evolve_options(const json& s) {
  dnp::EvolveOptions o;
  o.mode = s["mode"].get<std::string>() == "log_variable" ? dnp::SchemeMode::log_variable : dnp::SchemeMode::direct;
  o.safety = s["safety"].get<double>();
  o.max_steps = s["max_steps"].get<long long>();
  return o;
}

void write_text(Context& ctx, const std::string& name, const std::string& text) {
  const fs::path p = ctx.out / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw dnp::InputError("cannot write " + p.string());
  f << text;
  ctx.artifact(p);
}

void write_fields(Context& ctx, const std::string& stem, const dnp::Trajectory& traj) {
  fs::create_directories(ctx.out / "fields");
  const fs::path csv = ctx.out / "fields" / (stem + ".csv");
  const fs::path bin = ctx.out / "fields" / (stem + ".bin");
  dnp::write_field_csv(traj, csv.string());
  dnp::write_field_binary(traj, bin.string());
  ctx.artifact(csv);
  ctx.artifact(bin);
}

void write_series(Context& ctx, const std::string& name, const dnp::Trajectory& traj) {
  const fs::path p = ctx.out / name;
  dnp::write_series_csv(traj, p.string());
  ctx.artifact(p);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// A single-snapshot trajectory holding a stationary field.
dnp::Trajectory stationary(std::shared_ptr<const dnp::GridDomain> grid, std::vector<double> values) {
  dnp::Trajectory t;
  t.grid = std::move(grid);
  t.times = {0.0};
  t.fields = {std::move(values)};
  return t;
}

// --- kinds ----------------------------------------------------------------

void run_check_operator(Context& ctx) {
  const auto op = make_operator(ctx.cfg["operator"]);
  const json& c = ctx.cfg["check"];
  const int n = static_cast<int>(c["n"].get<long long>());
  const int n_dirs = static_cast<int>(c["n_directions"].get<long long>());
  const int n_samples = static_cast<int>(c["n_samples"].get<long long>());
  const auto coer = dnp::coercivity_report(op, n, c["lambda_min"].get<double>(), c["lambda_max"].get<double>(),
                                           static_cast<int>(c["n_grid"].get<long long>()), n_dirs);
  const auto mono = dnp::check_monotonicity(op, n, n_samples, ctx.scenario.seed);
  const auto homo = dnp::check_homogeneity(op, n, n_samples, ctx.scenario.seed);

  ctx.report.add({"monotonicity", mono.pass, mono.worst_violation, 0.0, {{"n_samples", mono.n_samples}}});
  ctx.report.add({"homogeneity", homo.pass, homo.k1, op.k1,
                  {{"k1", homo.k1},
                   {"k", homo.k},
                   {"max_rel_error_gradient", homo.max_rel_error_gradient},
                   {"max_rel_error_hessian", homo.max_rel_error_hessian},
                   {"max_rel_error_joint", homo.max_rel_error_joint},
                   {"n_used", homo.n_used}}});
  ctx.report.add({"coercivity_i", coer.c_i_pass, 0.0, 0.0, {}});
  ctx.report.add({"coercivity_ii", coer.c_ii_pass, coer.lambda1_found.value_or(std::nan("")), 0.0, {}});

  ctx.result["operator"] = op.to_json();
  ctx.result["n"] = n;
  ctx.result["k1"] = op.k1;
  ctx.result["k"] = op.k;
  ctx.result["lambda1"] = coer.lambda1_found ? json(*coer.lambda1_found) : json(nullptr);
  ctx.result["coercivity"] = coer.to_json();

  std::string csv = "Lambda,m,M,L\n";
  for (std::size_t i = 0; i < coer.lambda_grid.size(); ++i)
    csv += fmt(coer.lambda_grid[i]) + "," + fmt(coer.m_values[i]) + "," + fmt(coer.M_values[i]) + "," +
           fmt(coer.L_values[i]) + "\n";
  write_text(ctx, "coercivity.csv", csv);
}

dnp::Vec default_exterior_point(const dnp::Shape& shape) {
  dnp::Vec z = shape.center();
  z(0) += shape.radius() + 0.5 * shape.diameter();
  return z;
}

void run_certify_barrier(Context& ctx) {
  const auto op = make_operator(ctx.cfg["operator"]);
  const json& b = ctx.cfg["barrier"];
  const json& c = ctx.cfg["certify"];
  const std::string kind = b["kind"].get<std::string>();
  std::vector<dnp::BarrierPtr> barriers;

  if (kind == "hopf_shell") {
    dnp::HopfShellParams p{to_vec(b["center"]), b["tau"].get<double>(), b["rho"].get<double>(), b["a"].get<double>()};
    barriers.push_back(dnp::make_hopf_shell(op, p));
  } else if (kind == "slanted_cylinder") {
    dnp::SlantedCylinderParams p;
    p.p = to_vec(b["p"]);
    p.tau = b["tau"].get<double>();
    p.q = b["q"].is_array() ? to_vec(b["q"]) : p.p;
    p.s = b["s"].get<double>();
    p.rho = b["rho"].get<double>();
    p.level = b["level"].get<double>();
    p.amplitude = b["amplitude"].get<double>();
    barriers.push_back(dnp::make_slanted_cylinder(op, p));
  } else if (kind == "counterexample_k_gt_1") {
    dnp::CounterexampleParams p{b["m"].get<double>(), b["T"].get<double>(), b["R"].get<double>(), {}};
    barriers.push_back(dnp::make_counterexample(op, static_cast<int>(b["dim"].get<long long>()), op.k, p));
  } else if (kind == "cylinder_min") {
    dnp::CylinderMinParams p{to_vec(b["p"]),         b["tau"].get<double>(), b["T"].get<double>(),
                             b["rho"].get<double>(), b["m"].get<double>(),   b["eps"].get<double>()};
    barriers.push_back(dnp::make_cylinder_min(op, p));
  } else {
    const auto shape = make_shape(ctx.cfg["domain"]);
    if (kind == "exp_growth_sub" || kind == "exp_decay_super") {
      const dnp::Vec z = b["z"].is_array() ? to_vec(b["z"]) : default_exterior_point(shape);
      if (kind == "exp_growth_sub") {
        const auto p = dnp::exp_growth_params_for(op, shape, z, b["m0"].get<double>(), b["target"].get<double>(),
                                                  b["a_fraction"].get<double>(), b["T0"].get<double>(),
                                                  b["t_end"].get<double>());
        barriers.push_back(dnp::make_exp_growth_sub(op, shape, z, p));
      } else {
        const auto p = dnp::exp_decay_params_for(op, shape, z, b["kappa"].get<double>(), b["target"].get<double>(),
                                                 b["M0"].get<double>(), b["a_fraction"].get<double>(),
                                                 b["T0"].get<double>(), b["t_end"].get<double>());
        barriers.push_back(dnp::make_exp_decay_super(op, shape, z, p));
      }
    } else if (kind == "power_decay_super" || kind == "power_decay_sub") {
      dnp::PowerDecayParams p{b["nu"].get<double>(), b["eps"].get<double>(), b["T_anchor"].get<double>(),
                              b["T0"].get<double>(), b["t_end"].get<double>()};
      const auto side = kind == "power_decay_super" ? dnp::DecaySide::super : dnp::DecaySide::sub;
      barriers.push_back(dnp::make_power_decay(op, shape, side, p));
    } else if (kind == "eigen_exponential") {
      dnp::EigenExponentialParams p{b["M"].get<double>(), b["T0"].get<double>(), b["t_end"].get<double>(),
                                    b["lambda"].get<double>()};
      barriers.push_back(dnp::make_eigen_exponential(op, shape, p));
    } else {
      dnp::PerronParams p;
      p.y = b["y"].is_array() ? to_vec(b["y"]) : shape.boundary_samples(8).front();
      p.rho = b["rho"].get<double>();
      p.theta = b["theta"].get<double>();
      p.delta = b["delta"].get<double>();
      auto [sub, super] = dnp::make_perron_pair(op, shape, p);
      barriers.push_back(kind == "perron_sub" ? sub : super);
    }
  }

  dnp::SampleOptions so;
  so.per_axis = static_cast<int>(c["per_axis"].get<long long>());
  so.n_quasi = static_cast<int>(c["n_quasi"].get<long long>());
  so.seed = ctx.scenario.seed;
  const int n_deriv = static_cast<int>(c["derivative_points"].get<long long>());
  ctx.result["barriers"] = json::array();
  for (const auto& bar : barriers) {
    ctx.report.add_certificate(bar->name(), dnp::certify(*bar, so));
    json entry = bar->to_json();
    if (n_deriv > 0) {
      const auto d = dnp::check_derivatives(*bar, n_deriv, ctx.scenario.seed);
      ctx.report.add({"derivatives:" + bar->name(), d.pass, d.max_rel_error(), 1e-6, d.to_json()});
    }
    ctx.result["barriers"].push_back(entry);
  }
}

void run_simulate(Context& ctx) {
  const json& s = ctx.cfg["simulate"];
  const auto grid = make_grid(ctx.cfg["domain"]);
  dnp::ParabolicProblem prob{make_operator(ctx.cfg["operator"]), grid, s["T_end"].get<double>(),
                             make_initial(s["initial"], grid->shape()), make_boundary(s["boundary"]),
                             s["eigen_decay"].get<bool>()};
  std::vector<double> times;
  if (s["times"].is_array()) {
    times = s["times"].get<std::vector<double>>();
  } else if (s["times"].is_number()) {
    times = {s["times"].get<double>()};
  } else if (prob.T_end == 0.0) {
    times = {0.0};
  } else {
    times = dnp::linear_times(0.0, prob.T_end, static_cast<int>(s["n_snapshots"].get<long long>()));
  }
  const auto traj = dnp::evolve(prob, times, evolve_options(s));

  // Weak maximum principle: the solution stays between the extremes of its
  // parabolic boundary data.
  const auto u0 = dnp::initial_field(prob);
  double lo = prob.h.inf(), hi = prob.h.sup();
  for (double v : u0) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double inf_u = std::numeric_limits<double>::infinity(), sup_u = -inf_u;
  for (int i = 0; i < traj.n_snapshots(); ++i) {
    inf_u = std::min(inf_u, traj.inf(i));
    sup_u = std::max(sup_u, traj.sup(i));
  }
  const double tol = 1e-9 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
  ctx.report.add({"max_principle_upper", sup_u <= hi + tol, sup_u, hi, {}});
  ctx.report.add({"max_principle_lower", inf_u >= lo - tol, inf_u, lo, {}});

  ctx.result["problem"] = prob.to_json();
  ctx.result["trajectory"] = traj.summary();
  write_series(ctx, "series.csv", traj);
  if (s["write_fields"].get<bool>()) write_fields(ctx, "u", traj);
}

void run_elliptic(Context& ctx) {
  const json& e = ctx.cfg["elliptic"];
  const auto grid = make_grid(ctx.cfg["domain"]);
  dnp::EllipticProblem prob{make_operator(ctx.cfg["operator"]), grid, e["delta"].get<double>(),
                            e["theta"].get<double>()};
  dnp::EllipticOptions o;
  o.tol = e["tol"].get<double>();
  o.max_iterations = e["max_iterations"].get<long long>();
  o.safety = e["safety"].get<double>();
  o.perron_points = static_cast<int>(e["perron_points"].get<long long>());
  o.perron_tol = e["perron_tol"].get<double>();
  const auto sol = dnp::solve_elliptic(prob, o);

  ctx.report.add({"residual", sol.residual <= o.tol, sol.residual, o.tol, {{"iterations", sol.iterations}}});
  ctx.report.add({"boundary_side", sol.theta_violation <= o.tol, sol.theta_violation, o.tol, {}});
  if (sol.perron_checked)
    ctx.report.add({"perron_envelope", sol.perron_pass, sol.perron_violation, o.perron_tol, {}});
  json j = sol.to_json();
  j.erase("psi");
  j.erase("residual_history");
  ctx.result["solution"] = j;

  std::string csv = "iteration,residual\n";
  for (std::size_t i = 0; i < sol.residual_history.size(); ++i)
    csv += std::to_string(i * static_cast<std::size_t>(o.history_stride)) + "," + fmt(sol.residual_history[i]) + "\n";
  write_text(ctx, "series.csv", csv);
  if (e["write_fields"].get<bool>()) write_fields(ctx, "psi", stationary(grid, sol.psi));
}

void run_eigenvalue(Context& ctx) {
  const json& e = ctx.cfg["eigenvalue"];
  const auto grid = make_grid(ctx.cfg["domain"]);
  dnp::EigenOptions o;
  o.bracket_fraction = e["bracket_fraction"].get<double>();
  o.max_steps = e["max_steps"].get<long long>();
  o.safety = e["safety"].get<double>();
  const auto est = dnp::estimate_lambda(make_operator(ctx.cfg["operator"]), grid, e["delta"].get<double>(),
                                        e["lambda_max"].get<double>(), o);
  const double width = est.lambda_hi - est.lambda_lo;
  ctx.report.add({"bracket", width <= o.bracket_fraction * est.lambda_hi * (1.0 + 1e-12), width,
                  o.bracket_fraction * est.lambda_hi, {}});
  ctx.report.add({"positive_profile", est.psi_min_interior > 0.0, est.psi_min_interior, 0.0, {}});
  json j = est.to_json();
  j.erase("psi");
  ctx.result["estimate"] = j;

  std::string csv = "lambda,admissible,steps,windows,sup_u,last_rate,reason\n";
  for (const auto& t : est.trials)
    csv += fmt(t.lambda) + "," + (t.admissible ? "1" : "0") + "," + std::to_string(t.steps) + "," +
           std::to_string(t.windows) + "," + fmt(t.sup_u) + "," + fmt(t.last_rate) + "," + t.reason + "\n";
  write_text(ctx, "series.csv", csv);
  write_fields(ctx, "psi", stationary(grid, est.psi));
}

void write_fits(Context& ctx, const std::vector<dnp::RateFit>& fits) {
  if (fits.empty()) return;
  std::string csv = "model,t0,t1,exponent,C,r2,n\n";
  for (const auto& f : fits)
    csv += std::string(dnp::to_string(f.model)) + "," + fmt(f.t0) + "," + fmt(f.t1) + "," + fmt(f.exponent) + "," +
           fmt(f.C) + "," + fmt(f.r2) + "," + std::to_string(f.n) + "\n";
  write_text(ctx, "rates.csv", csv);
}

/// t, tail statistic and the first fit's prediction, for plotting.
void write_tail(Context& ctx, const dnp::Trajectory& traj, double nu, const std::vector<dnp::RateFit>& fits) {
  const auto tail = dnp::tail_sup(traj, nu);
  std::string csv = "t,tail_sup,fit\n";
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double t = traj.times[i];
    double pred = std::nan("");
    if (!fits.empty()) {
      const auto& f = fits.front();
      if (f.model == dnp::RateModel::power && t > 0.0) pred = f.C * std::pow(t, -f.exponent);
      if (f.model == dnp::RateModel::exponential) pred = f.C * std::exp(-f.exponent * t);
    }
    csv += fmt(t) + "," + fmt(tail[i]) + "," + fmt(pred) + "\n";
  }
  write_text(ctx, "tail.csv", csv);
}

void run_experiment(Context& ctx) {
  const json& e = ctx.cfg["experiment"];
  const std::string name = e["name"].get<std::string>();
  dnp::ExperimentReport rep;
  double tail_nu = std::nan("");

  if (name == "comparison-suite") {
    dnp::ComparisonSuiteConfig c;
    c.n_pairs = static_cast<int>(e["n_pairs"].get<long long>());
    c.seed = ctx.scenario.seed;
    c.tol = e["tol"].get<double>();
    c.h = e["h"].get<double>();
    c.n_snapshots = static_cast<int>(e["n_snapshots"].get<long long>());
    rep = dnp::run_comparison_suite(c);
  } else if (name == "hopf-counterexample") {
    dnp::HopfConfig c;
    c.source = dnp::HopfConfig::Source::counterexample;
    c.op = make_operator(ctx.cfg["operator"]);
    c.dim = static_cast<int>(e["dim"].get<long long>());
    c.m = e["m"].get<double>();
    c.T = e["T"].get<double>();
    c.R = e["R"].get<double>();
    c.tau = e["tau"].get<double>();
    c.fail_threshold = e["fail_threshold"].get<double>();
    rep = dnp::run_hopf_check(c);
  } else {
    const auto op = make_operator(ctx.cfg["operator"]);
    const json& d = ctx.cfg["domain"];
    const auto shape = make_shape(d);
    const double h = d["h"].get<double>();
    if (name == "min-principle-k1") {
      dnp::MinPrincipleConfig c;
      c.op = op;
      c.shape = shape;
      c.h = h;
      c.m = e["m"].get<double>();
      c.bump = make_bump(e);
      c.T_end = e["T_end"].get<double>();
      if (e["times"].is_array()) c.times = e["times"].get<std::vector<double>>();
      if (e["times"].is_number()) c.times = {e["times"].get<double>()};
      c.scheme_tol = e["scheme_tol"].get<double>();
      c.barrier_check = e["barrier_check"].get<bool>();
      rep = dnp::run_min_principle_k1(c);
    } else if (name == "hopf-check") {
      dnp::HopfConfig c;
      c.op = op;
      c.shape = shape;
      c.h = h;
      c.m = e["m"].get<double>();
      c.amplitude = e["amplitude"].get<double>();
      c.p = opt_vec(e["p"]);
      c.tau = e["tau"].get<double>();
      c.gamma = opt_vec(e["gamma"]);
      c.gamma_t = e["gamma_t"].get<double>();
      c.rho = e["rho"].get<double>();
      c.threshold = e["threshold"].get<double>();
      rep = dnp::run_hopf_check(c);
    } else if (name == "k-gt-1-example") {
      dnp::KGreaterOneConfig c;
      c.op = op;
      c.dim = static_cast<int>(e["dim"].get<long long>());
      c.m = e["m"].get<double>();
      c.T = e["T"].get<double>();
      c.R = e["R"].get<double>();
      c.h_axis = e["h_axis"].get<double>();
      c.n_slices = static_cast<int>(e["n_slices"].get<long long>());
      c.shape = shape;
      c.h = h;
      c.bump = make_bump(e);
      c.tau = e["tau"].get<double>();
      c.T_cyl = e["T_cyl"].get<double>();
      c.rho = e["rho"].get<double>();
      c.n_snapshots = static_cast<int>(e["n_snapshots"].get<long long>());
      c.scheme_tol = e["scheme_tol"].get<double>();
      c.control = e["control"].get<bool>();
      rep = dnp::run_k_gt_1_example(c);
    } else if (name == "asymptotics") {
      dnp::AsymptoticsConfig c;
      c.op = op;
      c.shape = shape;
      c.h = h;
      c.u0 = make_initial(e["initial"], shape);
      c.boundary = make_boundary(e["boundary"]);
      c.T_end = e["T_end"].get<double>();
      c.n_snapshots = static_cast<int>(e["n_snapshots"].get<long long>());
      c.tol = e["tol"].get<double>();
      c.envelopes = e["envelopes"].get<bool>();
      rep = dnp::run_asymptotics(c);
    } else {
      dnp::DecayConfig c;
      c.op = op;
      c.shape = shape;
      c.h = h;
      c.u0 = make_initial(e["initial"], shape);
      c.t_last = e["t_last"].get<double>();
      c.n_snapshots = static_cast<int>(e["n_snapshots"].get<long long>());
      c.tail_fraction = e["tail_fraction"].get<double>();
      c.min_r2 = e["min_r2"].get<double>();
      if (name == "decay-power") {
        c.model = dnp::RateModel::power;
        c.nu = e["nu"].get<double>();
        c.t_first = e["t_first"].get<double>();
        c.min_exponent = e["min_exponent"].get<double>();
      } else {
        c.model = dnp::RateModel::exponential;
        c.nu = 0.0;
        if (e["expected_rate"].is_number()) c.expected_rate = e["expected_rate"].get<double>();
        c.rate_tol = e["rate_tol"].get<double>();
        c.estimate = e["estimate"].get<bool>();
        c.estimate_slack = e["estimate_slack"].get<double>();
      }
      tail_nu = c.nu;
      rep = dnp::run_decay(c);
    }
  }

  ctx.result = rep.to_json();
  ctx.result.erase("checks");
  ctx.result.erase("pass");
  for (auto& c : rep.checks) ctx.report.add(std::move(c));
  if (!rep.series.empty()) {
    write_series(ctx, "series.csv", rep.series.front().second);
    for (std::size_t i = 1; i < rep.series.size(); ++i)
      write_series(ctx, "series_" + rep.series[i].first + ".csv", rep.series[i].second);
    if (e["write_fields"].get<bool>())
      for (const auto& [stem, traj] : rep.series) write_fields(ctx, stem, traj);
    if (!std::isnan(tail_nu)) write_tail(ctx, rep.series.front().second, tail_nu, rep.fits);
  }
  write_fits(ctx, rep.fits);
}

}  // namespace

int exit_code_for_current_exception(std::string* message) {
  try {
    throw;
  } catch (const ConfigError& e) {
    if (message) *message = e.what();
    return kConfigFailure;
  } catch (const dnp::InputError& e) {
    if (message) *message = e.what();
    return kConfigFailure;
  } catch (const dnp::ConstructionError& e) {
    if (message) *message = e.what();
    return kConfigFailure;
  } catch (const dnp::DomainError& e) {
    if (message) *message = e.what();
    return kConfigFailure;
  } catch (const std::exception& e) {
    if (message) *message = e.what();
    return kNumericFailure;
  }
}

RunOutcome run_scenario(const Scenario& scenario, const std::string& out_dir, std::ostream& log) {
  Context ctx{scenario, scenario.config, fs::path(out_dir), log, {}, {}, {}};
  ctx.report.experiment = to_string(scenario.kind);
  RunOutcome outcome;
  std::string error;
  std::string error_type;
  fs::create_directories(ctx.out);
  {
    std::ofstream f(ctx.out / "scenario.yaml", std::ios::binary);
    f << scenario.to_yaml();
  }
  ctx.artifact(ctx.out / "scenario.yaml");
  try {
    switch (scenario.kind) {
      case Kind::check_operator: run_check_operator(ctx); break;
      case Kind::certify_barrier: run_certify_barrier(ctx); break;
      case Kind::simulate: run_simulate(ctx); break;
      case Kind::elliptic: run_elliptic(ctx); break;
      case Kind::eigenvalue: run_eigenvalue(ctx); break;
      case Kind::experiment: run_experiment(ctx); break;
    }
    outcome.exit_code = ctx.report.pass ? kPass : kCheckFailed;
  } catch (...) {
    outcome.exit_code = exit_code_for_current_exception(&error);
  }

  json& v = outcome.verdict;
  v["kind"] = to_string(scenario.kind);
  v["pass"] = outcome.exit_code == kPass;
  v["exit_code"] = outcome.exit_code;
  if (!error.empty()) v["error"] = error;
  v["checks"] = json::array();
  for (const auto& c : ctx.report.checks) v["checks"].push_back(c.to_json());
  v["result"] = ctx.result;
  v["scenario"] = scenario.config;
  ctx.artifacts.push_back("verdict.json");
  v["artifacts"] = ctx.artifacts;
  {
    std::ofstream f(ctx.out / "verdict.json", std::ios::binary);
    f << v.dump(2) << "\n";
  }

  for (const auto& c : ctx.report.checks)
    log << (c.pass ? "  ok    " : "  FAIL  ") << c.name << "  value=" << c.value << "\n";
  if (!error.empty()) log << "error: " << error << "\n";
  log << to_string(scenario.kind) << ": " << (outcome.exit_code == kPass ? "pass" : "fail") << " (exit "
      << outcome.exit_code << ")\n";
  return outcome;
}

}  // namespace dnplab
