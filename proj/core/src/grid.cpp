#include "dnp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "dnp/error.hpp"

namespace dnp {

namespace {

// Lattice nodes of a ball closer than this fraction of h to the sphere are
// dropped; their neighbors reach the sphere through cut arms instead.
constexpr double kBallDropFraction = 0.5;

std::vector<Vec> stencil_directions(int n) {
  std::vector<Vec> d;
  if (n == 1) {
    d.push_back(Vec::Constant(1, 1.0));
    return d;
  }
  const double s = 1.0 / std::sqrt(2.0);
  d.push_back((Vec(2) << 1.0, 0.0).finished());
  d.push_back((Vec(2) << 0.0, 1.0).finished());
  d.push_back((Vec(2) << s, s).finished());
  d.push_back((Vec(2) << s, -s).finished());
  return d;
}

// Integer lattice offsets matching stencil_directions.
std::vector<std::array<int, 2>> stencil_offsets(int n) {
  if (n == 1) return {{1, 0}};
  return {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
}

int cells(double length, double h) {
  const int c = static_cast<int>(std::lround(length / h));
  if (c < 2) throw InputError("grid spacing " + std::to_string(h) + " leaves fewer than two cells");
  return c;
}

}  // namespace

GridDomain GridDomain::build(const Shape& shape, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("grid spacing must be positive");
  const int n = shape.dim();
  if (n > 2) throw InputError("grids are limited to one and two space dimensions");
  GridDomain g;
  g.shape_ = shape;
  g.h_ = h;
  g.directions_ = stencil_directions(n);
  const auto offsets = stencil_offsets(n);
  const int nd = static_cast<int>(offsets.size());

  // Lattice indexed by (i, j); lattice_id holds the node index or -1.
  int nx = 0, ny = 0;
  double hx = h, hy = h;
  Vec origin = shape.lower();
  std::vector<int> state;  // 0 outside/dropped, 1 interior, 2 boundary
  if (shape.kind() == ShapeKind::ball) {
    const int K = static_cast<int>(std::ceil(shape.radius() / h)) + 1;
    nx = ny = 2 * K + 1;
    origin = shape.center() - Vec::Constant(n, K * h);
    state.assign(static_cast<std::size_t>(nx) * ny, 0);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const Vec x = origin + (Vec(2) << i * h, j * h).finished();
        if (shape.depth(x) >= kBallDropFraction * h) state[j * nx + i] = 1;
      }
  } else {
    nx = cells(shape.upper()(0) - shape.lower()(0), h) + 1;
    hx = (shape.upper()(0) - shape.lower()(0)) / (nx - 1);
    ny = 1;
    if (n == 2) {
      ny = cells(shape.upper()(1) - shape.lower()(1), h) + 1;
      hy = (shape.upper()(1) - shape.lower()(1)) / (ny - 1);
      if (std::abs(hx - hy) > 1e-9 * h)
        throw InputError("box sides must be integer multiples of the grid spacing");
    }
    g.h_ = hx;
    state.assign(static_cast<std::size_t>(nx) * ny, 2);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const bool inner_x = i > 0 && i < nx - 1;
        const bool inner_y = n == 1 || (j > 0 && j < ny - 1);
        if (inner_x && inner_y) state[j * nx + i] = 1;
      }
  }
  auto lattice_point = [&](int i, int j) {
    Vec x(n);
    x(0) = origin(0) + i * hx;
    if (n == 2) x(1) = origin(1) + j * hy;
    return x;
  };
  std::vector<int> id(state.size(), -1);
  for (std::size_t c = 0; c < state.size(); ++c)
    if (state[c] == 1) {
      id[c] = static_cast<int>(g.points_.size());
      g.points_.push_back(lattice_point(static_cast<int>(c % nx), static_cast<int>(c / nx)));
    }
  g.n_interior_ = static_cast<int>(g.points_.size());
  if (g.n_interior_ == 0) throw InputError("grid spacing leaves no interior nodes");
  for (std::size_t c = 0; c < state.size(); ++c)
    if (state[c] == 2) {
      id[c] = static_cast<int>(g.points_.size());
      Vec x = lattice_point(static_cast<int>(c % nx), static_cast<int>(c / nx));
      for (int a = 0; a < n; ++a) {
        if (std::abs(x(a) - shape.upper()(a)) < 1e-9 * h) x(a) = shape.upper()(a);
        if (std::abs(x(a) - shape.lower()(a)) < 1e-9 * h) x(a) = shape.lower()(a);
      }
      g.points_.push_back(x);
    }

  std::map<std::pair<long long, long long>, int> cut_nodes;
  auto cut_node = [&](const Vec& x) {
    const double q = 1e-10 * h;
    const auto key = std::make_pair(std::llround(x(0) / q), n == 2 ? std::llround(x(1) / q) : 0LL);
    auto it = cut_nodes.find(key);
    if (it != cut_nodes.end()) return it->second;
    const int idx = static_cast<int>(g.points_.size());
    g.points_.push_back(x);
    cut_nodes.emplace(key, idx);
    return idx;
  };

  g.arms_.assign(static_cast<std::size_t>(g.n_interior_) * nd * 2, Arm{});
  g.min_arm_ = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < state.size(); ++c) {
    if (state[c] != 1) continue;
    const int i = static_cast<int>(c % nx), j = static_cast<int>(c / nx);
    const int node = id[c];
    for (int d = 0; d < nd; ++d)
      for (int side = 0; side < 2; ++side) {
        const int s = side == 0 ? 1 : -1;
        const int ii = i + s * offsets[d][0], jj = j + s * offsets[d][1];
        Arm arm;
        const bool in_lattice = ii >= 0 && ii < nx && jj >= 0 && jj < ny;
        if (in_lattice && state[jj * nx + ii] != 0) {
          arm.node = id[jj * nx + ii];
          arm.length = (g.points_[arm.node] - g.points_[node]).norm();
        } else {
          if (shape.kind() != ShapeKind::ball) throw ConstructionError("grid: stencil leaves the box");
          const Vec v = s * g.directions_[d];
          const double len = shape.ray_exit(g.points_[node], v);
          const Vec y = g.points_[node] + len * v;
          arm.node = cut_node(y);
          arm.length = len;
        }
        g.min_arm_ = std::min(g.min_arm_, arm.length);
        g.arms_[(node * nd + d) * 2 + side] = arm;
      }
  }
  return g;
}

int GridDomain::nearest(const Vec& x, bool interior_only) const {
  const int end = interior_only ? n_interior_ : size();
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (int i = 0; i < end; ++i) {
    const double d = (points_[i] - x).squaredNorm();
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

bool GridDomain::same_nodes(const GridDomain& other) const {
  if (other.size() != size() || other.n_interior_ != n_interior_ || other.dim() != dim()) return false;
  for (int i = 0; i < size(); ++i)
    if ((points_[i] - other.points_[i]).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + h_)) return false;
  return true;
}

nlohmann::json GridDomain::to_json() const {
  return {{"shape", shape_.to_json()},
          {"h", h_},
          {"n_nodes", size()},
          {"n_interior", n_interior_},
          {"min_arm", min_arm_}};
}

}  // namespace dnp
