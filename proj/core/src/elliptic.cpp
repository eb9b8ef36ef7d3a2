#include "dnp/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dnp/barriers.hpp"
#include "dnp/error.hpp"
#include "dnp/scheme.hpp"

namespace dnp {

namespace {

void check_envelopes(const EllipticProblem& p, const EllipticOptions& o, EllipticSolution& sol) {
  const GridDomain& g = *p.grid;
  const double s = p.delta > 0.0 ? 1.0 : -1.0;
  sol.theta_violation = -std::numeric_limits<double>::infinity();
  for (double v : sol.psi) sol.theta_violation = std::max(sol.theta_violation, s * (v - p.theta));
  if (o.perron_points <= 0) return;
  std::vector<std::pair<BarrierPtr, BarrierPtr>> pairs;
  try {
    const double rho = 0.25 * g.shape().diameter();
    for (const Vec& y : g.shape().boundary_samples(o.perron_points)) {
      PerronParams pp;
      pp.y = y;
      pp.rho = rho;
      pp.theta = p.theta;
      pp.delta = std::abs(p.delta);
      pairs.push_back(make_perron_pair(p.op, g.shape(), pp));
    }
  } catch (const ConstructionError&) {
    return;  // no coercivity threshold: the envelopes do not exist
  }
  sol.perron_checked = true;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [sub, super] : pairs)
    for (int i = 0; i < g.size(); ++i) {
      const Vec& x = g.point(i);
      // delta > 0: v_y <= psi; delta < 0: psi <= w_y
      const double gap = p.delta > 0.0 ? sub->value(x, 0.0) - sol.psi[i] : sol.psi[i] - super->value(x, 0.0);
      worst = std::max(worst, gap);
    }
  sol.perron_violation = std::max(worst, sol.theta_violation);
  sol.perron_pass = sol.perron_violation <= o.perron_tol;
}

}  // namespace

nlohmann::json EllipticSolution::to_json() const {
  return {{"residual", residual},
          {"iterations", iterations},
          {"residual_history", residual_history},
          {"theta_violation", theta_violation},
          {"perron_checked", perron_checked},
          {"perron_violation", perron_violation},
          {"perron_pass", perron_pass},
          {"grid", grid ? grid->to_json() : nlohmann::json()}};
}

EllipticSolution solve_elliptic(const EllipticProblem& p, const EllipticOptions& o) {
  if (!p.grid) throw InputError("elliptic problem has no grid");
  if (p.delta == 0.0 || !std::isfinite(p.delta)) throw InputError("elliptic problem needs a finite delta != 0");
  if (!std::isfinite(p.theta)) throw InputError("boundary value theta must be finite");
  const GridDomain& g = *p.grid;
  EllipticSolution sol;
  sol.grid = p.grid;
  sol.psi.assign(static_cast<std::size_t>(g.size()), p.theta);
  std::vector<double> H, lip;
  const double fallback = o.safety * g.min_arm() * g.min_arm() / (2.0 * g.dim());
  for (long long it = 0;; ++it) {
    discrete_operator_all(p.op, g, sol.psi, SchemeMode::direct, H, lip);
    double res = 0.0, tau_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.n_interior(); ++i) {
      res = std::max(res, std::abs(H[i] - p.delta));
      if (lip[i] > 0.0) tau_min = std::min(tau_min, o.safety / lip[i]);
    }
    if (!std::isfinite(res)) throw NumericError("elliptic marching produced non-finite values");
    if (it % o.history_stride == 0) sol.residual_history.push_back(res);
    sol.residual = res;
    sol.iterations = it;
    if (res < o.tol) break;
    if (it >= o.max_iterations) {
      std::ostringstream msg;
      msg << "solve_elliptic: residual " << res << " after " << it << " iterations; history (every "
          << o.history_stride << "):";
      const std::size_t n = sol.residual_history.size();
      for (std::size_t j = n > 10 ? n - 10 : 0; j < n; ++j) msg << ' ' << sol.residual_history[j];
      throw ConvergenceError(msg.str());
    }
    if (!std::isfinite(tau_min)) tau_min = fallback;
    for (int i = 0; i < g.n_interior(); ++i) {
      const double tau = lip[i] > 0.0 ? o.safety / lip[i] : tau_min;
      sol.psi[i] += tau * (H[i] - p.delta);
    }
  }
  check_envelopes(p, o, sol);
  return sol;
}

nlohmann::json EigenEstimate::to_json() const {
  nlohmann::json t = nlohmann::json::array();
  for (const auto& tr : trials)
    t.push_back({{"lambda", tr.lambda},
                 {"admissible", tr.admissible},
                 {"steps", tr.steps},
                 {"windows", tr.windows},
                 {"sup_u", tr.sup_u},
                 {"last_rate", tr.last_rate},
                 {"reason", tr.reason}});
  return {{"lambda_lo", lambda_lo},
          {"lambda_hi", lambda_hi},
          {"grid", grid},
          {"k", k},
          {"operator", op},
          {"residuals", {{"lo_state", residual}}},
          {"psi_min_interior", psi_min_interior},
          {"iterations", iterations},
          {"trials", t}};
}

EigenTrial eigen_trial(const OperatorSpec& op, const GridDomain& g, double delta, double lambda,
                       const EigenOptions& o, std::vector<double>* state) {
  EigenTrial tr;
  tr.lambda = lambda;
  std::vector<double> u(static_cast<std::size_t>(g.size()), delta);
  std::vector<double> H, lip, rate(static_cast<std::size_t>(g.n_interior()));
  const double k = op.k;
  long long window = o.window_steps;
  if (window <= 0) {
    const double n = g.shape().diameter() / g.spacing();
    window = std::max<long long>(1000, static_cast<long long>(0.5 * n * n));
  }
  std::vector<double> window_rates;
  const double blowup = o.blowup_factor * delta;
  auto finish = [&](bool admissible, const char* reason) {
    tr.admissible = admissible;
    tr.reason = reason;
    tr.sup_u = *std::max_element(u.begin(), u.end());
    if (state) *state = u;
    return tr;
  };
  for (long long s = 0;; ++s) {
    discrete_operator_all(op, g, u, SchemeMode::direct, H, lip);
    double worst = 0.0, sup_rate = 0.0;
    for (int i = 0; i < g.n_interior(); ++i) {
      const double react = lambda * std::pow(u[i], k);
      rate[i] = H[i] + react;
      sup_rate = std::max(sup_rate, std::abs(rate[i]));
      worst = std::max(worst, lip[i] + lambda * k * std::pow(u[i], k - 1.0));
    }
    tr.last_rate = sup_rate;
    tr.steps = s;
    if (sup_rate < o.converged_tol * std::max(1.0, delta)) return finish(true, "steady state");
    if ((s + 1) % window == 0) {
      window_rates.push_back(sup_rate);
      tr.windows = static_cast<int>(window_rates.size());
      const std::size_t w = window_rates.size();
      if (w >= 4) {
        int up = 0, down = 0;
        for (std::size_t j = w - 3; j < w; ++j) {
          if (window_rates[j] > window_rates[j - 1]) ++up;
          if (window_rates[j] < window_rates[j - 1]) ++down;
        }
        if (up == 3) return finish(false, "rate increasing");
        if (down == 3) return finish(true, "rate decreasing");
      }
    }
    if (s >= o.max_steps) {
      const std::size_t w = window_rates.size();
      const bool growing = w >= 2 && window_rates[w - 1] > window_rates[w - 2];
      return finish(!growing, "step limit");
    }
    const double dt = worst > 0.0 ? o.safety / worst : o.safety * g.min_arm() * g.min_arm();
    double sup_u = 0.0;
    for (int i = 0; i < g.n_interior(); ++i) {
      u[i] += dt * rate[i];
      sup_u = std::max(sup_u, u[i]);
    }
    if (!std::isfinite(sup_u) || sup_u > blowup) return finish(false, "blow-up");
  }
}

EigenEstimate estimate_lambda(const OperatorSpec& op, std::shared_ptr<const GridDomain> grid, double delta,
                              double lambda_max, const EigenOptions& o) {
  if (!grid) throw InputError("estimate_lambda needs a grid");
  if (!(lambda_max > 0.0)) throw InputError("lambda_max must be positive");
  if (!(delta > 0.0)) throw InputError("boundary value delta must be positive");
  EigenEstimate est;
  est.grid = grid->to_json();
  est.k = op.k;
  est.op = op.to_json();
  std::vector<double> state;
  const EigenTrial top = eigen_trial(op, *grid, delta, lambda_max, o);
  est.trials.push_back(top);
  if (top.admissible)
    throw BracketNotFoundError("lambda_max = " + std::to_string(lambda_max) +
                               " is still admissible; raise lambda_max");
  double lo = 0.0, hi = lambda_max;
  est.psi.assign(static_cast<std::size_t>(grid->size()), delta);
  est.residual = 0.0;
  while (hi - lo > o.bracket_fraction * hi) {
    const double mid = 0.5 * (lo + hi);
    const EigenTrial tr = eigen_trial(op, *grid, delta, mid, o, &state);
    est.trials.push_back(tr);
    if (tr.admissible) {
      lo = mid;
      est.psi = state;
      est.residual = tr.last_rate;
    } else {
      hi = mid;
    }
  }
  est.lambda_lo = lo;
  est.lambda_hi = hi;
  est.iterations = static_cast<int>(est.trials.size());
  est.psi_min_interior = *std::min_element(est.psi.begin(), est.psi.begin() + grid->n_interior());
  return est;
}

}  // namespace dnp
