#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnp/parabolic.hpp"

namespace dnp {

/// power: y = C t^(-exponent); exponential: y = C exp(-exponent t).
enum class RateModel { power, exponential };

const char* to_string(RateModel model);

struct RateFit {
  double t0 = 0.0, t1 = 0.0;
  RateModel model = RateModel::power;
  double exponent = 0.0;
  double C = 0.0;
  double r2 = 0.0;
  int n = 0;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Least squares on log y against log t (power) or t (exponential) over the
/// last `tail_fraction` of the samples. Power fits need t1/t0 >= `min_decades`
/// decades. Throws FitError on non-positive data or a short window.
RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& y, RateModel model,
                 double tail_fraction = 0.5, double min_decades = 1.0);

/// Tail statistic sup_{closure x [t_s, end]} u - nu per snapshot.
std::vector<double> tail_sup(const Trajectory& traj, double nu);
/// Tail statistic nu - inf_{closure x [t_s, end]} u per snapshot.
std::vector<double> tail_inf_gap(const Trajectory& traj, double nu);

/// Fits the tail sup of u - nu against the model.
RateFit fit_decay(const Trajectory& traj, double nu, RateModel model, double tail_fraction = 0.5);

}  // namespace dnp
