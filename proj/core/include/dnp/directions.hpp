#pragma once

#include <functional>
#include <vector>

#include "dnp/linalg.hpp"

namespace dnp {

/// Quasi-uniform unit directions: +-1 in 1D, equally spaced angles in 2D and a
/// Fibonacci lattice in 3D.
std::vector<Vec> sphere_directions(int n, int count);

/// Unit vector from angle coordinates (theta in 2D, (polar, azimuth) in 3D).
Vec direction_from_angles(int n, const double* angles);

enum class Extremum { min, max };

struct DirectionOptimum {
  double value = 0.0;
  Vec direction;
};

/// Global extremum of f over the unit sphere: a scan over `count` sampled
/// directions followed by Nelder-Mead refinement in angle coordinates from the
/// best few samples.
DirectionOptimum extremize_over_sphere(int n, const std::function<double(const Vec&)>& f, int count,
                                       Extremum which);

}  // namespace dnp
