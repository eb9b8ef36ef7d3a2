#include "dnp/rate_fit.hpp"

#include <algorithm>
#include <cmath>

#include "dnp/error.hpp"

namespace dnp {

const char* to_string(RateModel model) { return model == RateModel::power ? "power" : "exponential"; }

nlohmann::json RateFit::to_json() const {
  return {{"window", {t0, t1}}, {"model", to_string(model)}, {"exponent", exponent},
          {"C", C},             {"r2", r2},                  {"n", n}};
}

RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& y, RateModel model, double tail_fraction,
                 double min_decades) {
  if (t.size() != y.size()) throw FitError("fit_rate: t and y differ in length");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw FitError("fit_rate: tail_fraction must be in (0, 1]");
  const std::size_t n = t.size();
  const std::size_t start = n - std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(tail_fraction * n)));
  if (n < 2 || start >= n) throw FitError("fit_rate: need at least two samples");
  RateFit f;
  f.model = model;
  f.t0 = t[start];
  f.t1 = t.back();
  if (!(f.t1 > f.t0)) throw FitError("fit_rate: window has zero length");
  if (model == RateModel::power) {
    if (!(f.t0 > 0.0)) throw FitError("fit_rate: power fits need t > 0");
    if (std::log10(f.t1 / f.t0) < min_decades - 1e-12)
      throw FitError("fit_rate: power fit window [" + std::to_string(f.t0) + ", " + std::to_string(f.t1) +
                     "] spans less than one decade");
  }
  std::vector<double> X, Y;
  for (std::size_t i = start; i < n; ++i) {
    if (!(y[i] > 0.0)) throw FitError("fit_rate: non-positive tail value " + std::to_string(y[i]) + " at t = " +
                                      std::to_string(t[i]));
    X.push_back(model == RateModel::power ? std::log(t[i]) : t[i]);
    Y.push_back(std::log(y[i]));
  }
  const double m = static_cast<double>(X.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
    syy += (Y[i] - my) * (Y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("fit_rate: degenerate abscissae");
  const double slope = sxy / sxx;
  f.exponent = -slope;
  f.C = std::exp(my - slope * mx);
  f.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  f.n = static_cast<int>(X.size());
  return f;
}

std::vector<double> tail_sup(const Trajectory& traj, double nu) {
  std::vector<double> out(traj.times.size());
  double run = -INFINITY;
  for (std::size_t s = traj.times.size(); s-- > 0;) {
    run = std::max(run, traj.sup(static_cast<int>(s)));
    out[s] = run - nu;
  }
  return out;
}

std::vector<double> tail_inf_gap(const Trajectory& traj, double nu) {
  std::vector<double> out(traj.times.size());
  double run = INFINITY;
  for (std::size_t s = traj.times.size(); s-- > 0;) {
    run = std::min(run, traj.inf(static_cast<int>(s)));
    out[s] = nu - run;
  }
  return out;
}

RateFit fit_decay(const Trajectory& traj, double nu, RateModel model, double tail_fraction) {
  return fit_rate(traj.times, tail_sup(traj, nu), model, tail_fraction);
}

}  // namespace dnp
