#include "dnp/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "dnp/error.hpp"
#include "dnp/parallel.hpp"

namespace dnp {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct DirData {
  double D = 0.0;      // directional second difference (plus the log term)
  double c = 0.0;      // its Lipschitz bound
  double sp = 0.0;     // forward slope
  double sm = 0.0;     // backward slope
  double hp = 0.0, hm = 0.0;
};

DirData direction_data(const GridDomain& g, const std::vector<double>& u, int i, int d, SchemeMode mode) {
  const Arm& p = g.arm(i, d, 0);
  const Arm& m = g.arm(i, d, 1);
  DirData r;
  r.hp = p.length;
  r.hm = m.length;
  r.sp = (u[p.node] - u[i]) / r.hp;
  r.sm = (u[i] - u[m.node]) / r.hm;
  r.D = 2.0 * (r.sp - r.sm) / (r.hp + r.hm);
  r.c = 2.0 / (r.hp * r.hm);
  if (mode == SchemeMode::log_variable) {
    // upwind square of the directional derivative, nondecreasing in both neighbors
    const double a = std::max({r.sp, -r.sm, 0.0});
    r.D += a * a;
    r.c += 2.0 * a / std::min(r.hp, r.hm);
  }
  return r;
}

double pucci_scalar(double s, double pos, double neg) { return s > 0.0 ? pos * s : neg * s; }

double spow(double s, double e) { return std::pow(std::abs(s), e); }

// Flux Psi(s) and Psi'(s) for the 1D divergence forms.
double flux(const OperatorSpec& op, double s) {
  if (op.family == OperatorFamily::infinity_laplacian) return s * s * s / 3.0;
  return spow(s, op.p - 2.0) * s;
}

double flux_derivative(const OperatorSpec& op, double s) {
  if (op.family == OperatorFamily::infinity_laplacian) return s * s;
  return (op.p - 1.0) * spow(s, op.p - 2.0);
}

// Directional second difference along the angle theta, interpolated linearly
// between the two neighboring stencil directions (weights are nonnegative).
void interpolate(const DirData* dirs, double theta, double& D, double& c) {
  // stencil angles in increasing order: 0 (d0), pi/4 (d2), pi/2 (d1), 3pi/4 (d3)
  static constexpr int order[5] = {0, 2, 1, 3, 0};
  theta = std::fmod(theta, kPi);
  if (theta < 0.0) theta += kPi;
  const double seg = theta / (kPi / 4.0);
  int k = std::min(static_cast<int>(seg), 3);
  const double w = seg - k;
  const DirData& a = dirs[order[k]];
  const DirData& b = dirs[order[k + 1]];
  D = (1.0 - w) * a.D + w * b.D;
  c = (1.0 - w) * a.c + w * b.c;
}

}  // namespace

const char* to_string(SchemeMode mode) { return mode == SchemeMode::direct ? "direct" : "log_variable"; }

Vec discrete_gradient(const GridDomain& g, const std::vector<double>& u, int i) {
  const int n = g.dim();
  Vec grad(n);
  for (int a = 0; a < n; ++a) {
    const Arm& p = g.arm(i, a, 0);
    const Arm& m = g.arm(i, a, 1);
    const double sp = (u[p.node] - u[i]) / p.length;
    const double sm = (u[i] - u[m.node]) / m.length;
    grad(a) = (m.length * sp + p.length * sm) / (p.length + m.length);
  }
  return grad;
}

bool scheme_exactly_monotone(const OperatorSpec& op, int dim, SchemeMode mode) {
  switch (op.family) {
    case OperatorFamily::laplacian:
    case OperatorFamily::pucci_max:
    case OperatorFamily::pucci_min:
    case OperatorFamily::positive_trace: return true;
    case OperatorFamily::pseudo_p_laplacian: return mode == SchemeMode::direct;
    case OperatorFamily::p_laplacian:
    case OperatorFamily::infinity_laplacian: return dim == 1 && mode == SchemeMode::direct;
    case OperatorFamily::negated_laplacian: return false;
  }
  return false;
}

NodeEval discrete_operator(const OperatorSpec& op, const GridDomain& g, const std::vector<double>& u, int i,
                           SchemeMode mode) {
  const int n = g.dim();
  const int nd = n == 1 ? 1 : 4;
  DirData dirs[4];
  for (int d = 0; d < nd; ++d) dirs[d] = direction_data(g, u, i, d, mode);
  NodeEval out;

  // axis-sum pieces shared by trace-type families
  const double tr = n == 1 ? dirs[0].D : dirs[0].D + dirs[1].D;
  const double ctr = n == 1 ? dirs[0].c : dirs[0].c + dirs[1].c;
  // gradient magnitude from the larger one-sided slope per axis
  double gm2 = 0.0, hmin = dirs[0].hp;
  for (int a = 0; a < n; ++a) {
    const double s = std::max(std::abs(dirs[a].sp), std::abs(dirs[a].sm));
    gm2 += s * s;
    hmin = std::min({hmin, dirs[a].hp, dirs[a].hm});
  }
  const double gm = std::sqrt(gm2);

  switch (op.family) {
    case OperatorFamily::laplacian:
      out = {tr, ctr};
      break;
    case OperatorFamily::negated_laplacian:
      out = {-tr, ctr};
      break;
    case OperatorFamily::positive_trace:
      out = {std::max(0.0, tr), ctr};
      break;
    case OperatorFamily::pucci_max:
    case OperatorFamily::pucci_min: {
      const bool is_max = op.family == OperatorFamily::pucci_max;
      const double pos = is_max ? op.hi : op.lo;
      const double neg = is_max ? op.lo : op.hi;
      if (n == 1) {
        out = {pucci_scalar(dirs[0].D, pos, neg), op.hi * dirs[0].c};
      } else {
        const double a = pucci_scalar(dirs[0].D, pos, neg) + pucci_scalar(dirs[1].D, pos, neg);
        const double b = pucci_scalar(dirs[2].D, pos, neg) + pucci_scalar(dirs[3].D, pos, neg);
        out = {is_max ? std::max(a, b) : std::min(a, b),
               op.hi * std::max(dirs[0].c + dirs[1].c, dirs[2].c + dirs[3].c)};
      }
      break;
    }
    case OperatorFamily::pseudo_p_laplacian:
    case OperatorFamily::p_laplacian:
    case OperatorFamily::infinity_laplacian: {
      const bool flux_form = mode == SchemeMode::direct &&
                             (n == 1 || op.family == OperatorFamily::pseudo_p_laplacian);
      if (flux_form) {
        for (int a = 0; a < n; ++a) {
          const DirData& r = dirs[a];
          const double w = 2.0 / (r.hp + r.hm);
          out.H += w * (flux(op, r.sp) - flux(op, r.sm));
          out.lipschitz += w * (flux_derivative(op, r.sp) / r.hp + flux_derivative(op, r.sm) / r.hm);
        }
        break;
      }
      if (op.family == OperatorFamily::pseudo_p_laplacian) {
        for (int a = 0; a < n; ++a) {
          const double s = std::max(std::abs(dirs[a].sp), std::abs(dirs[a].sm));
          const double coef = (op.p - 1.0) * spow(s, op.p - 2.0);
          out.H += coef * dirs[a].D;
          out.lipschitz += coef * dirs[a].c;
          if (s > 0.0) out.lipschitz += (op.p - 1.0) * (op.p - 2.0) * spow(s, op.p - 3.0) * std::abs(dirs[a].D) / hmin;
        }
        break;
      }
      // frozen-coefficient form: coef(|g|) * (a * D_e + b * D_eperp)
      double De = dirs[0].D, ce = dirs[0].c, Dp = 0.0, cp = 0.0;
      if (n == 2) {
        const Vec gc = discrete_gradient(g, u, i);
        const double theta = gc.norm() > 0.0 ? std::atan2(gc(1), gc(0)) : 0.0;
        interpolate(dirs, theta, De, ce);
        interpolate(dirs, theta + kPi / 2.0, Dp, cp);
      }
      const double sg = n == 1 ? 1.0 : std::sqrt(2.0);
      if (op.family == OperatorFamily::p_laplacian) {
        const double coef = spow(gm, op.p - 2.0);
        const double inner = (op.p - 1.0) * De + Dp;
        out.H = coef * inner;
        out.lipschitz = coef * ((op.p - 1.0) * ce + cp);
        if (gm > 0.0 && op.p > 2.0)
          out.lipschitz += (op.p - 2.0) * spow(gm, op.p - 3.0) * std::abs(inner) * sg / hmin;
      } else {
        out.H = gm2 * De;
        out.lipschitz = gm2 * ce + 2.0 * gm * std::abs(De) * sg / hmin;
      }
      break;
    }
  }
  return out;
}

void discrete_operator_all(const OperatorSpec& op, const GridDomain& g, const std::vector<double>& u, SchemeMode mode,
                           std::vector<double>& H, std::vector<double>& lipschitz) {
  if (static_cast<int>(u.size()) != g.size()) throw InputError("field size does not match the grid");
  const auto ni = static_cast<std::size_t>(g.n_interior());
  H.resize(ni);
  lipschitz.resize(ni);
  parallel_for(ni, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const NodeEval r = discrete_operator(op, g, u, static_cast<int>(i), mode);
      H[i] = r.H;
      lipschitz[i] = r.lipschitz;
    }
  });
}

}  // namespace dnp
