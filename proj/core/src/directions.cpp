#include "dnp/directions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace dnp {

std::vector<Vec> sphere_directions(int n, int count) {
  std::vector<Vec> dirs;
  if (n == 1) {
    Vec e(1);
    e << 1.0;
    dirs.push_back(e);
    e << -1.0;
    dirs.push_back(e);
    return dirs;
  }
  count = std::max(count, 8);
  dirs.reserve(static_cast<std::size_t>(count));
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * i / count;
      Vec e(2);
      e << std::cos(a), std::sin(a);
      dirs.push_back(e);
    }
    return dirs;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden * i;
    Vec e(3);
    e << rho * std::cos(a), rho * std::sin(a), z;
    dirs.push_back(e);
  }
  return dirs;
}

Vec direction_from_angles(int n, const double* angles) {
  Vec e(n);
  if (n == 2) {
    e << std::cos(angles[0]), std::sin(angles[0]);
  } else {
    const double s = std::sin(angles[0]);
    e << s * std::cos(angles[1]), s * std::sin(angles[1]), std::cos(angles[0]);
  }
  return e;
}

namespace {

std::array<double, 2> angles_of(const Vec& e) {
  if (e.size() == 2) return {std::atan2(e(1), e(0)), 0.0};
  return {std::acos(std::clamp(e(2), -1.0, 1.0)), std::atan2(e(1), e(0))};
}

// Nelder-Mead in d <= 2 angle coordinates, minimizing g.
DirectionOptimum nelder_mead(int n, const std::function<double(const Vec&)>& g, const Vec& start,
                             double step) {
  const int d = n - 1;
  struct Vertex {
    std::array<double, 2> a;
    double f;
  };
  auto eval = [&](const std::array<double, 2>& a) { return g(direction_from_angles(n, a.data())); };
  std::vector<Vertex> simplex;
  const auto a0 = angles_of(start);
  simplex.push_back({a0, eval(a0)});
  for (int i = 0; i < d; ++i) {
    auto a = a0;
    a[static_cast<std::size_t>(i)] += step;
    simplex.push_back({a, eval(a)});
  }
  for (int iter = 0; iter < 400; ++iter) {
    std::sort(simplex.begin(), simplex.end(), [](const Vertex& x, const Vertex& y) { return x.f < y.f; });
    const double spread = std::abs(simplex.back().f - simplex.front().f);
    double size = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i)
      for (int j = 0; j < d; ++j)
        size = std::max(size, std::abs(simplex[i].a[static_cast<std::size_t>(j)] -
                                       simplex[0].a[static_cast<std::size_t>(j)]));
    if (spread <= 1e-14 * (1.0 + std::abs(simplex.front().f)) && size < 1e-10) break;
    if (size < 1e-12) break;

    std::array<double, 2> centroid{0.0, 0.0};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) centroid[static_cast<std::size_t>(j)] += simplex[static_cast<std::size_t>(i)].a[static_cast<std::size_t>(j)] / d;
    auto along = [&](double t) {
      std::array<double, 2> a{0.0, 0.0};
      for (int j = 0; j < d; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        a[jj] = centroid[jj] + t * (simplex.back().a[jj] - centroid[jj]);
      }
      return a;
    };
    const auto ar = along(-1.0);
    const double fr = eval(ar);
    if (fr < simplex.front().f) {
      const auto ae = along(-2.0);
      const double fe = eval(ae);
      simplex.back() = fe < fr ? Vertex{ae, fe} : Vertex{ar, fr};
    } else if (fr < simplex[simplex.size() - 2].f) {
      simplex.back() = {ar, fr};
    } else {
      const auto ac = along(0.5);
      const double fc = eval(ac);
      if (fc < simplex.back().f) {
        simplex.back() = {ac, fc};
      } else {
        for (std::size_t i = 1; i < simplex.size(); ++i) {
          for (int j = 0; j < d; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            simplex[i].a[jj] = simplex[0].a[jj] + 0.5 * (simplex[i].a[jj] - simplex[0].a[jj]);
          }
          simplex[i].f = eval(simplex[i].a);
        }
      }
    }
  }
  const auto best = std::min_element(simplex.begin(), simplex.end(),
                                     [](const Vertex& x, const Vertex& y) { return x.f < y.f; });
  return {best->f, direction_from_angles(n, best->a.data())};
}

}  // namespace

DirectionOptimum extremize_over_sphere(int n, const std::function<double(const Vec&)>& f, int count,
                                       Extremum which) {
  const double sign = which == Extremum::min ? 1.0 : -1.0;
  auto g = [&](const Vec& e) { return sign * f(e); };
  const auto dirs = sphere_directions(n, count);
  std::vector<double> vals(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) vals[i] = g(dirs[i]);
  std::vector<std::size_t> order(dirs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return vals[a] < vals[b] || (vals[a] == vals[b] && a < b);
  });
  DirectionOptimum best{vals[order[0]], dirs[order[0]]};
  if (n >= 2) {
    const double step = n == 2 ? 2.0 * std::numbers::pi / static_cast<double>(dirs.size())
                               : std::sqrt(4.0 * std::numbers::pi / static_cast<double>(dirs.size()));
    const std::size_t starts = std::min<std::size_t>(3, order.size());
    for (std::size_t s = 0; s < starts; ++s) {
      const auto refined = nelder_mead(n, g, dirs[order[s]], step);
      if (refined.value < best.value) best = refined;
    }
  }
  best.value *= sign;
  return best;
}

}  // namespace dnp
