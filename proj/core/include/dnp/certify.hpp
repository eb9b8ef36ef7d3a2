#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnp/barriers.hpp"
#include "dnp/region.hpp"

namespace dnp {

inline constexpr double kCertTolerance = 1e-8;

struct SampleOptions {
  int per_axis = 64;          // regular grid resolution, inclusive of both ends
  int max_grid_points = 64 * 64 * 64;
  int n_quasi = 4096;         // Halton points in addition to the grid
  std::uint64_t seed = 0;     // offsets the Halton sequence
};

/// Regular grid plus Halton points of the parameter cube, mapped through the
/// region. Rejected parameters are skipped.
std::vector<SpaceTimePoint> sample_region(const Region& region, const SampleOptions& options = {});

struct SignCertificate {
  std::string barrier;
  nlohmann::json region;
  Sign sign = Sign::subsolution;
  int n_samples = 0;
  double worst_margin = 0.0;
  std::optional<SpaceTimePoint> argmin;
  bool pass = false;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Margin is the residual for subsolutions and its negative for
/// supersolutions; pass iff the smallest margin is >= -kCertTolerance.
/// Throws InputError when the region yields no sample points.
SignCertificate certify_sign(const Barrier& barrier, const Region& region, Sign sign,
                             const SampleOptions& options = {});
/// Certifies the barrier's own sign on its defining region.
SignCertificate certify(const Barrier& barrier, const SampleOptions& options = {});

/// Same reduction for an arbitrary residual function.
SignCertificate certify_residual(const std::string& name, const std::function<double(const SpaceTimePoint&)>& residual,
                                 const Region& region, Sign sign, const SampleOptions& options = {});

struct DerivativeCheck {
  int n_points = 0;
  double max_rel_error_grad = 0.0;
  double max_rel_error_hess = 0.0;
  double max_rel_error_dt = 0.0;
  bool pass = false;

  [[nodiscard]] double max_rel_error() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Central differences of the value (gradient, time derivative) and of the
/// analytic gradient (Hessian) at quasi-random points of the defining region.
DerivativeCheck check_derivatives(const Barrier& barrier, int n_points = 1000, std::uint64_t seed = 0,
                                  double step = 1e-5, double tol = 1e-6);

/// Halton point `index` in [0,1)^dim.
void halton_point(std::uint64_t index, int dim, double* out);

}  // namespace dnp
