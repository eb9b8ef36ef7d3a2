#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnp/barriers.hpp"
#include "dnp/parabolic.hpp"

namespace dnp {

/// Scheme-error allowance used by the comparison checks.
inline constexpr double kCompareTolerance = 1e-6 + 5e-3;

enum class NodeRole : std::uint8_t { outside, interior, boundary };

/// Role of every node at every snapshot in a space-time comparison set.
struct ComparisonMask {
  std::vector<std::vector<NodeRole>> roles;  // [snapshot][node]
};

/// The grid's parabolic boundary: every node in the first snapshot and the
/// boundary nodes afterwards; interior nodes after the first snapshot.
ComparisonMask parabolic_mask(const Trajectory& traj);

/// The node-time set where `inside(x, t)` holds. A member is on the
/// discrete parabolic boundary when it is a grid boundary node, when the same
/// node is not a member at the previous snapshot (or there is none), or when
/// one of its stencil neighbors is not a member.
ComparisonMask region_mask(const Trajectory& traj, const std::function<bool(const Vec&, double)>& inside);

struct ComparisonReport {
  bool quotient = true;  // u/v, or u - v when false
  double interior_max = 0.0;
  double boundary_max = 0.0;
  double excess = 0.0;  // interior_max - boundary_max
  double tol = kCompareTolerance;
  bool pass = false;
  int interior_node = -1, interior_snapshot = -1;
  int boundary_node = -1, boundary_snapshot = -1;
  int n_interior = 0, n_boundary = 0;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// max over the interior of u/v minus its max over the parabolic boundary;
/// passes iff the excess is <= tol. Both trajectories must share grid and
/// snapshot times; v must be positive on the compared set.
ComparisonReport compare_quotient(const Trajectory& sub, const Trajectory& super, double tol = kCompareTolerance);
ComparisonReport compare_quotient(const Trajectory& sub, const Trajectory& super, const ComparisonMask& mask,
                                  double tol = kCompareTolerance);
/// Difference form u - v (meaningful for k = 1).
ComparisonReport compare_difference(const Trajectory& sub, const Trajectory& super, double tol = kCompareTolerance);
ComparisonReport compare_difference(const Trajectory& sub, const Trajectory& super, const ComparisonMask& mask,
                                    double tol = kCompareTolerance);

/// The barrier's values on the nodes and snapshot times of `like`. Nodes
/// where the barrier cannot be evaluated hold NaN.
Trajectory sample_barrier(const Barrier& barrier, const Trajectory& like);

}  // namespace dnp
