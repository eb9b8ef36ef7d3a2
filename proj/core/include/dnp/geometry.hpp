#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "dnp/linalg.hpp"

namespace dnp {

enum class ShapeKind { interval, box, ball };

/// Bounded convex spatial domain: an interval, an axis-aligned box or a ball.
class Shape {
 public:
  static Shape interval(double a, double b);
  static Shape box(const Vec& lower, const Vec& upper);
  static Shape ball(const Vec& center, double radius);

  [[nodiscard]] ShapeKind kind() const { return kind_; }
  [[nodiscard]] int dim() const { return static_cast<int>(lower_.size()); }
  /// Bounding box.
  [[nodiscard]] const Vec& lower() const { return lower_; }
  [[nodiscard]] const Vec& upper() const { return upper_; }
  [[nodiscard]] Vec center() const;
  /// Ball radius; half the diagonal for boxes.
  [[nodiscard]] double radius() const;

  /// Closure membership.
  [[nodiscard]] bool contains(const Vec& x, double tol = 0.0) const;
  /// Distance from x to the boundary, signed positive inside.
  [[nodiscard]] double depth(const Vec& x) const;
  /// inf and sup of |x - z| over the closure.
  [[nodiscard]] double inf_distance(const Vec& z) const;
  [[nodiscard]] double sup_distance(const Vec& z) const;
  [[nodiscard]] double diameter() const;
  /// A unit outer normal at the boundary point y (normalized sum of active face
  /// normals at box corners).
  [[nodiscard]] Vec outward_normal(const Vec& y) const;
  /// Roughly uniform boundary points (about `count` of them; both endpoints in 1D).
  [[nodiscard]] std::vector<Vec> boundary_samples(int count) const;
  /// Distance along the ray x + s*v (x inside, v unit) to the boundary.
  [[nodiscard]] double ray_exit(const Vec& x, const Vec& v) const;

  [[nodiscard]] nlohmann::json to_json() const;

 private:
  ShapeKind kind_ = ShapeKind::interval;
  Vec lower_;
  Vec upper_;
  Vec center_;
  double radius_ = 0.0;
};

}  // namespace dnp
