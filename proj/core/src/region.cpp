#include "dnp/region.hpp"

#include <cmath>
#include <numbers>

#include "dnp/directions.hpp"

namespace dnp {

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

double lerp(double a, double b, double u) { return a + (b - a) * u; }

// Unit direction from the trailing parameters: a sign in 1D, angles otherwise.
Vec direction_param(int n, const double* u) {
  if (n == 1) return Vec::Constant(1, u[0] < 0.5 ? -1.0 : 1.0);
  double angles[2];
  if (n == 2) {
    angles[0] = 2.0 * std::numbers::pi * u[0];
  } else {
    angles[0] = std::acos(1.0 - 2.0 * u[0]);
    angles[1] = 2.0 * std::numbers::pi * u[1];
  }
  return direction_from_angles(n, angles);
}

int direction_params(int n) { return n == 1 ? 1 : n - 1; }

}  // namespace

Region::Region(int space_dim, int param_dim, nlohmann::json descriptor, Map map)
    : space_dim_(space_dim), param_dim_(param_dim), descriptor_(std::move(descriptor)), map_(std::move(map)) {
  if (param_dim_ < 1) throw InputError("Region: parameter dimension must be >= 1");
}

std::optional<SpaceTimePoint> Region::at(const double* u) const { return map_(u); }

Region Region::restricted(const std::vector<double>& lo, const std::vector<double>& hi) const {
  if (static_cast<int>(lo.size()) != param_dim_ || static_cast<int>(hi.size()) != param_dim_)
    throw InputError("Region::restricted: bounds must match the parameter dimension");
  for (int i = 0; i < param_dim_; ++i)
    if (!(0.0 <= lo[i] && lo[i] <= hi[i] && hi[i] <= 1.0))
      throw InputError("Region::restricted: bounds must satisfy 0 <= lo <= hi <= 1");
  auto desc = descriptor_;
  desc["restricted"] = {{"lo", lo}, {"hi", hi}};
  const Map parent = map_;
  const int d = param_dim_;
  return Region(space_dim_, param_dim_, desc, [parent, lo, hi, d](const double* u) {
    double v[8];
    for (int i = 0; i < d; ++i) v[i] = lerp(lo[i], hi[i], u[i]);
    return parent(v);
  });
}

Region Region::hopf_shell(const Vec& q, double tau, double rho) {
  if (!(rho > 0.0)) throw InputError("hopf_shell region: rho must be positive");
  const int n = static_cast<int>(q.size());
  nlohmann::json desc{{"type", "hopf_shell"}, {"center", to_std(q)}, {"tau", tau}, {"rho", rho}};
  return Region(n, 2 + direction_params(n), desc, [q, tau, rho, n](const double* u) {
    const double t = lerp(tau - rho / 4.0, tau, u[0]);
    const double s2 = (tau - t) * (tau - t);
    const double r2_lo = std::max(0.0, rho * rho / 4.0 - s2);
    const double r2_hi = rho * rho - s2;
    const double r = std::sqrt(lerp(r2_lo, r2_hi, u[1]));
    return std::optional<SpaceTimePoint>(SpaceTimePoint{q + r * direction_param(n, u + 2), t});
  });
}

Region Region::slanted_cylinder(const Vec& p, double tau, const Vec& gamma, double delta, double rho,
                                double Delta) {
  if (!(rho > 0.0 && delta > 0.0 && Delta > 0.0)) throw InputError("slanted_cylinder region: bad parameters");
  if (gamma.size() != p.size()) throw InputError("slanted_cylinder region: dimension mismatch");
  const int n = static_cast<int>(p.size());
  nlohmann::json desc{{"type", "slanted_cylinder"}, {"p", to_std(p)},         {"tau", tau},
                      {"gamma", to_std(gamma)},    {"delta", delta},         {"rho", rho},
                      {"Delta", Delta}};
  return Region(n, 2 + direction_params(n), desc, [=](const double* u) {
    const double t = lerp(tau, tau + Delta, u[0]);
    const double d = rho * u[1];
    const Vec axis = p + ((t - tau) / delta) * gamma;
    return std::optional<SpaceTimePoint>(SpaceTimePoint{axis + d * direction_param(n, u + 2), t});
  });
}

Region Region::ball_time(const Vec& center, double r_min, double r_max, double t0, double t1) {
  if (!(0.0 <= r_min && r_min <= r_max && t0 <= t1)) throw InputError("ball_time region: bad parameters");
  const int n = static_cast<int>(center.size());
  nlohmann::json desc{{"type", "ball_time"}, {"center", to_std(center)}, {"r_min", r_min},
                      {"r_max", r_max},      {"t0", t0},                 {"t1", t1}};
  return Region(n, 2 + direction_params(n), desc, [=](const double* u) {
    const double t = lerp(t0, t1, u[0]);
    const double r = lerp(r_min, r_max, u[1]);
    return std::optional<SpaceTimePoint>(SpaceTimePoint{center + r * direction_param(n, u + 2), t});
  });
}

Region Region::shape_time(const Shape& shape, double t0, double t1, const Vec& exclude_center,
                          double exclude_radius) {
  if (!(t0 <= t1)) throw InputError("shape_time region: t0 must not exceed t1");
  const int n = shape.dim();
  const bool timed = t1 > t0;
  nlohmann::json desc{{"type", "shape_time"}, {"shape", shape.to_json()}, {"t0", t0}, {"t1", t1}};
  if (exclude_radius > 0.0) desc["exclude"] = {{"center", to_std(exclude_center)}, {"radius", exclude_radius}};
  return Region(n, n + (timed ? 1 : 0), desc, [=](const double* u) -> std::optional<SpaceTimePoint> {
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = lerp(shape.lower()(i), shape.upper()(i), u[i]);
    if (!shape.contains(x, 1e-12)) return std::nullopt;
    if (exclude_radius > 0.0 && (x - exclude_center).norm() < exclude_radius) return std::nullopt;
    return SpaceTimePoint{x, timed ? lerp(t0, t1, u[n]) : t0};
  });
}

}  // namespace dnp
