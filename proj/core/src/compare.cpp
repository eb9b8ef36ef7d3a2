#include "dnp/compare.hpp"

#include <cmath>
#include <limits>

#include "dnp/error.hpp"

namespace dnp {

namespace {

void check_compatible(const Trajectory& a, const Trajectory& b) {
  if (!a.grid || !b.grid) throw InputError("comparison needs trajectories with grids");
  if (a.grid != b.grid && !a.grid->same_nodes(*b.grid)) throw InputError("trajectories do not share a grid");
  if (a.times.size() != b.times.size()) throw InputError("trajectories have different snapshot counts");
  for (std::size_t s = 0; s < a.times.size(); ++s)
    if (std::abs(a.times[s] - b.times[s]) > 1e-12 * (1.0 + std::abs(a.times[s])))
      throw InputError("trajectories have different snapshot times");
  if (a.times.empty()) throw InputError("trajectories have no snapshots");
}

ComparisonReport compare(const Trajectory& u, const Trajectory& v, const ComparisonMask& mask, double tol,
                         bool quotient) {
  check_compatible(u, v);
  if (mask.roles.size() != u.times.size()) throw InputError("mask does not match the snapshots");
  ComparisonReport r;
  r.quotient = quotient;
  r.tol = tol;
  r.interior_max = -std::numeric_limits<double>::infinity();
  r.boundary_max = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < u.times.size(); ++s) {
    const auto& roles = mask.roles[s];
    for (std::size_t i = 0; i < roles.size(); ++i) {
      if (roles[i] == NodeRole::outside) continue;
      const double a = u.fields[s][i], b = v.fields[s][i];
      if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("comparison set contains non-finite values");
      if (quotient && !(b > 0.0)) throw InputError("quotient comparison needs a positive supersolution");
      const double q = quotient ? a / b : a - b;
      if (roles[i] == NodeRole::interior) {
        ++r.n_interior;
        if (q > r.interior_max) {
          r.interior_max = q;
          r.interior_node = static_cast<int>(i);
          r.interior_snapshot = static_cast<int>(s);
        }
      } else {
        ++r.n_boundary;
        if (q > r.boundary_max) {
          r.boundary_max = q;
          r.boundary_node = static_cast<int>(i);
          r.boundary_snapshot = static_cast<int>(s);
        }
      }
    }
  }
  if (r.n_boundary == 0) throw InputError("comparison set has no boundary points");
  if (r.n_interior == 0) {
    r.interior_max = r.boundary_max;
    r.excess = 0.0;
  } else {
    r.excess = r.interior_max - r.boundary_max;
  }
  r.pass = r.excess <= tol;
  return r;
}

}  // namespace

ComparisonMask parabolic_mask(const Trajectory& traj) {
  ComparisonMask m;
  const int n = traj.grid->size();
  m.roles.assign(traj.times.size(), std::vector<NodeRole>(static_cast<std::size_t>(n), NodeRole::boundary));
  for (std::size_t s = 1; s < traj.times.size(); ++s)
    for (int i = 0; i < traj.grid->n_interior(); ++i) m.roles[s][i] = NodeRole::interior;
  return m;
}

ComparisonMask region_mask(const Trajectory& traj, const std::function<bool(const Vec&, double)>& inside) {
  const GridDomain& g = *traj.grid;
  const int n = g.size();
  std::vector<std::vector<char>> member(traj.times.size(), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (std::size_t s = 0; s < traj.times.size(); ++s)
    for (int i = 0; i < n; ++i) member[s][i] = inside(g.point(i), traj.times[s]) ? 1 : 0;
  ComparisonMask m;
  m.roles.assign(traj.times.size(), std::vector<NodeRole>(static_cast<std::size_t>(n), NodeRole::outside));
  for (std::size_t s = 0; s < traj.times.size(); ++s)
    for (int i = 0; i < n; ++i) {
      if (!member[s][i]) continue;
      bool boundary = !g.is_interior(i) || s == 0 || !member[s - 1][i];
      if (!boundary)
        for (int d = 0; d < g.n_directions() && !boundary; ++d)
          for (int side = 0; side < 2; ++side)
            if (!member[s][g.arm(i, d, side).node]) boundary = true;
      m.roles[s][i] = boundary ? NodeRole::boundary : NodeRole::interior;
    }
  return m;
}

ComparisonReport compare_quotient(const Trajectory& sub, const Trajectory& super, double tol) {
  check_compatible(sub, super);
  return compare(sub, super, parabolic_mask(sub), tol, true);
}

ComparisonReport compare_quotient(const Trajectory& sub, const Trajectory& super, const ComparisonMask& mask,
                                  double tol) {
  return compare(sub, super, mask, tol, true);
}

ComparisonReport compare_difference(const Trajectory& sub, const Trajectory& super, double tol) {
  check_compatible(sub, super);
  return compare(sub, super, parabolic_mask(sub), tol, false);
}

ComparisonReport compare_difference(const Trajectory& sub, const Trajectory& super, const ComparisonMask& mask,
                                    double tol) {
  return compare(sub, super, mask, tol, false);
}

nlohmann::json ComparisonReport::to_json() const {
  return {{"form", quotient ? "quotient" : "difference"},
          {"interior_max", interior_max},
          {"boundary_max", boundary_max},
          {"excess", excess},
          {"tol", tol},
          {"pass", pass},
          {"interior_argmax", {{"node", interior_node}, {"snapshot", interior_snapshot}}},
          {"boundary_argmax", {{"node", boundary_node}, {"snapshot", boundary_snapshot}}},
          {"n_interior", n_interior},
          {"n_boundary", n_boundary}};
}

Trajectory sample_barrier(const Barrier& barrier, const Trajectory& like) {
  if (barrier.dim() != like.grid->dim()) throw InputError("barrier dimension does not match the grid");
  Trajectory t;
  t.grid = like.grid;
  t.mode = like.mode;
  t.times = like.times;
  t.fields.resize(like.times.size());
  const GridDomain& g = *like.grid;
  for (std::size_t s = 0; s < like.times.size(); ++s) {
    auto& f = t.fields[s];
    f.resize(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) {
      try {
        f[i] = barrier.value(g.point(i), like.times[s]);
      } catch (const DomainError&) {
        f[i] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return t;
}

}  // namespace dnp
