#include "dnp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dnp {

Shape Shape::interval(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) throw InputError("interval requires a < b");
  Shape s;
  s.kind_ = ShapeKind::interval;
  s.lower_ = Vec::Constant(1, a);
  s.upper_ = Vec::Constant(1, b);
  return s;
}

Shape Shape::box(const Vec& lower, const Vec& upper) {
  if (lower.size() != upper.size() || lower.size() < 1 || lower.size() > kMaxDim)
    throw InputError("box corners must share a dimension in 1..3");
  for (int i = 0; i < lower.size(); ++i)
    if (!(lower(i) < upper(i))) throw InputError("box requires lower < upper in every coordinate");
  if (lower.size() == 1) return interval(lower(0), upper(0));
  Shape s;
  s.kind_ = ShapeKind::box;
  s.lower_ = lower;
  s.upper_ = upper;
  return s;
}

Shape Shape::ball(const Vec& center, double radius) {
  if (center.size() < 1 || center.size() > kMaxDim) throw InputError("ball dimension must be in 1..3");
  if (!(radius > 0.0)) throw InputError("ball radius must be positive");
  if (center.size() == 1) return interval(center(0) - radius, center(0) + radius);
  Shape s;
  s.kind_ = ShapeKind::ball;
  s.center_ = center;
  s.radius_ = radius;
  s.lower_ = center.array() - radius;
  s.upper_ = center.array() + radius;
  return s;
}

Vec Shape::center() const { return kind_ == ShapeKind::ball ? center_ : Vec(0.5 * (lower_ + upper_)); }

double Shape::radius() const { return kind_ == ShapeKind::ball ? radius_ : 0.5 * (upper_ - lower_).norm(); }

bool Shape::contains(const Vec& x, double tol) const {
  if (x.size() != lower_.size()) throw InputError("Shape::contains: dimension mismatch");
  if (kind_ == ShapeKind::ball) return (x - center_).norm() <= radius_ + tol;
  for (int i = 0; i < x.size(); ++i)
    if (x(i) < lower_(i) - tol || x(i) > upper_(i) + tol) return false;
  return true;
}

double Shape::depth(const Vec& x) const {
  if (kind_ == ShapeKind::ball) return radius_ - (x - center_).norm();
  double inside = std::numeric_limits<double>::infinity();
  double outside2 = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    inside = std::min({inside, x(i) - lower_(i), upper_(i) - x(i)});
    const double excess = std::max({0.0, lower_(i) - x(i), x(i) - upper_(i)});
    outside2 += excess * excess;
  }
  return outside2 > 0.0 ? -std::sqrt(outside2) : inside;
}

double Shape::inf_distance(const Vec& z) const {
  if (kind_ == ShapeKind::ball) return std::max(0.0, (z - center_).norm() - radius_);
  double s = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    const double c = std::clamp(z(i), lower_(i), upper_(i));
    s += (z(i) - c) * (z(i) - c);
  }
  return std::sqrt(s);
}

double Shape::sup_distance(const Vec& z) const {
  if (kind_ == ShapeKind::ball) return (z - center_).norm() + radius_;
  double s = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    const double d = std::max(std::abs(z(i) - lower_(i)), std::abs(z(i) - upper_(i)));
    s += d * d;
  }
  return std::sqrt(s);
}

double Shape::diameter() const { return kind_ == ShapeKind::ball ? 2.0 * radius_ : (upper_ - lower_).norm(); }

Vec Shape::outward_normal(const Vec& y) const {
  if (kind_ == ShapeKind::ball) {
    const Vec d = y - center_;
    if (d.norm() == 0.0) throw DomainError("outward_normal: point is the ball center");
    return d / d.norm();
  }
  const double tol = 1e-9 * (1.0 + diameter());
  Vec n = Vec::Zero(y.size());
  for (int i = 0; i < y.size(); ++i) {
    if (std::abs(y(i) - lower_(i)) <= tol) n(i) -= 1.0;
    if (std::abs(y(i) - upper_(i)) <= tol) n(i) += 1.0;
  }
  if (n.norm() == 0.0) throw DomainError("outward_normal: point is not on the boundary");
  return n / n.norm();
}

std::vector<Vec> Shape::boundary_samples(int count) const {
  count = std::max(count, 2);
  std::vector<Vec> out;
  const int n = dim();
  if (n == 1) return {lower_, upper_};
  if (kind_ == ShapeKind::ball) {
    if (n == 2) {
      for (int i = 0; i < count; ++i) {
        const double a = 2.0 * std::numbers::pi * i / count;
        Vec x(2);
        x << std::cos(a), std::sin(a);
        out.push_back(center_ + radius_ * x);
      }
    } else {
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double r = std::sqrt(1.0 - z * z);
        Vec x(3);
        x << r * std::cos(golden * i), r * std::sin(golden * i), z;
        out.push_back(center_ + radius_ * x);
      }
    }
    return out;
  }
  // box: points on each face on a regular grid
  const int per = std::max(2, static_cast<int>(std::ceil(std::pow(count / (2.0 * n), 1.0 / (n - 1)))));
  for (int axis = 0; axis < n; ++axis) {
    for (int side = 0; side < 2; ++side) {
      const int total = n == 2 ? per : per * per;
      for (int k = 0; k < total; ++k) {
        Vec x(n);
        int rem = k;
        for (int j = 0; j < n; ++j) {
          if (j == axis) {
            x(j) = side == 0 ? lower_(j) : upper_(j);
            continue;
          }
          const int idx = rem % per;
          rem /= per;
          x(j) = lower_(j) + (upper_(j) - lower_(j)) * idx / (per - 1);
        }
        out.push_back(x);
      }
    }
  }
  return out;
}

double Shape::ray_exit(const Vec& x, const Vec& v) const {
  if (kind_ == ShapeKind::ball) {
    const Vec d = x - center_;
    const double b = d.dot(v);
    const double c = d.squaredNorm() - radius_ * radius_;
    const double disc = b * b - c;
    if (disc < 0.0) return 0.0;
    return std::max(0.0, -b + std::sqrt(disc));
  }
  double s = std::numeric_limits<double>::infinity();
  for (int i = 0; i < x.size(); ++i) {
    if (v(i) > 0.0) s = std::min(s, (upper_(i) - x(i)) / v(i));
    if (v(i) < 0.0) s = std::min(s, (lower_(i) - x(i)) / v(i));
  }
  return std::max(0.0, s);
}

nlohmann::json Shape::to_json() const {
  auto vec = [](const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  switch (kind_) {
    case ShapeKind::interval:
      return {{"shape", "interval"}, {"lower", lower_(0)}, {"upper", upper_(0)}};
    case ShapeKind::box:
      return {{"shape", "box"}, {"lower", vec(lower_)}, {"upper", vec(upper_)}};
    case ShapeKind::ball:
      return {{"shape", "ball"}, {"center", vec(center_)}, {"radius", radius_}};
  }
  return {};
}

}  // namespace dnp
