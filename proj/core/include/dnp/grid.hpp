#pragma once

#include <array>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnp/geometry.hpp"
#include "dnp/linalg.hpp"

namespace dnp {

/// One side of a stencil direction: the node it ends at and its length.
struct Arm {
  int node = -1;
  double length = 0.0;
};

/// Finite difference grid on a 1D or 2D shape. Interior nodes come first
/// (indices [0, n_interior)), boundary nodes after them. Each interior node has
/// a plus and a minus arm along every stencil direction; arms either end at a
/// lattice node or, on balls, at a boundary node placed on the exact sphere.
class GridDomain {
 public:
  /// Lattice spacing h. Intervals and boxes use the spacing L/round(L/h) per
  /// axis; 2D boxes must have cells that are square to 1e-9.
  static GridDomain build(const Shape& shape, double h);

  [[nodiscard]] const Shape& shape() const { return shape_; }
  [[nodiscard]] int dim() const { return shape_.dim(); }
  /// Nominal lattice spacing.
  [[nodiscard]] double spacing() const { return h_; }
  /// Shortest arm over the grid.
  [[nodiscard]] double min_arm() const { return min_arm_; }

  [[nodiscard]] int size() const { return static_cast<int>(points_.size()); }
  [[nodiscard]] int n_interior() const { return n_interior_; }
  [[nodiscard]] bool is_interior(int i) const { return i < n_interior_; }
  [[nodiscard]] const Vec& point(int i) const { return points_[i]; }
  [[nodiscard]] const std::vector<Vec>& points() const { return points_; }

  /// Stencil directions: the axis in 1D; e1, e2, (1,1)/sqrt2, (1,-1)/sqrt2 in 2D.
  [[nodiscard]] int n_directions() const { return static_cast<int>(directions_.size()); }
  [[nodiscard]] const Vec& direction(int d) const { return directions_[d]; }
  /// side 0 is the plus arm, side 1 the minus arm.
  [[nodiscard]] const Arm& arm(int i, int d, int side) const { return arms_[(i * n_directions() + d) * 2 + side]; }

  /// Closest node; with `interior_only` the closest interior node.
  [[nodiscard]] int nearest(const Vec& x, bool interior_only = false) const;
  /// Whether the two grids have identical node coordinates.
  [[nodiscard]] bool same_nodes(const GridDomain& other) const;

  [[nodiscard]] nlohmann::json to_json() const;

 private:
  Shape shape_ = Shape::interval(0.0, 1.0);
  double h_ = 0.0;
  double min_arm_ = 0.0;
  int n_interior_ = 0;
  std::vector<Vec> points_;
  std::vector<Vec> directions_;
  std::vector<Arm> arms_;
};

}  // namespace dnp
