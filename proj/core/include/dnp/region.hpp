#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnp/geometry.hpp"
#include "dnp/linalg.hpp"

namespace dnp {

/// A sampled space-time set, given as a map from the unit parameter cube
/// [0,1]^d onto the set. The map may reject parameters (returns nullopt), which
/// is how non-box shapes and excluded singular sets are expressed.
class Region {
 public:
  using Map = std::function<std::optional<SpaceTimePoint>(const double*)>;

  Region(int space_dim, int param_dim, nlohmann::json descriptor, Map map);

  [[nodiscard]] int space_dim() const { return space_dim_; }
  [[nodiscard]] int param_dim() const { return param_dim_; }
  [[nodiscard]] std::optional<SpaceTimePoint> at(const double* u) const;
  [[nodiscard]] const nlohmann::json& descriptor() const { return descriptor_; }

  /// The image of the parameter sub-box [lo, hi] (a subset of this region).
  [[nodiscard]] Region restricted(const std::vector<double>& lo, const std::vector<double>& hi) const;

  /// {(x,t): rho^2/4 <= |x-q|^2 + (tau-t)^2 <= rho^2, tau - rho/4 <= t <= tau}
  static Region hopf_shell(const Vec& q, double tau, double rho);
  /// {(x,t): |x - (p + (t-tau)/delta gamma)| <= rho, tau <= t <= tau + Delta}
  static Region slanted_cylinder(const Vec& p, double tau, const Vec& gamma, double delta, double rho,
                                 double Delta);
  /// {(x,t): r_min <= |x-center| <= r_max, t0 <= t <= t1}
  static Region ball_time(const Vec& center, double r_min, double r_max, double t0, double t1);
  /// closure(shape) x [t0, t1], optionally minus the ball of radius `exclude_radius`
  /// about `exclude_center`. With t0 == t1 the time parameter is dropped.
  static Region shape_time(const Shape& shape, double t0, double t1, const Vec& exclude_center = Vec(),
                           double exclude_radius = 0.0);

 private:
  int space_dim_;
  int param_dim_;
  nlohmann::json descriptor_;
  Map map_;
};

}  // namespace dnp
