#include "dnp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dnp/directions.hpp"

namespace dnp {

namespace {

OperatorSpec with_family(OperatorFamily f, double k1) {
  OperatorSpec op;
  op.family = f;
  op.k1 = k1;
  op.k = k1 + 1.0;
  return op;
}

Vec eigenvalues(const SymmetricMatrix& x) {
  const int n = x.dim();
  if (n == 1) {
    Vec v(1);
    v << x(0, 0);
    return v;
  }
  if (n == 2) {
    const double a = x(0, 0), b = x(0, 1), c = x(1, 1);
    const double mean = 0.5 * (a + c);
    const double rad = std::hypot(0.5 * (a - c), b);
    Vec v(2);
    v << mean - rad, mean + rad;
    return v;
  }
  // trigonometric closed form for symmetric 3x3
  const double p1 = x(0, 1) * x(0, 1) + x(0, 2) * x(0, 2) + x(1, 2) * x(1, 2);
  const double q = x.trace() / 3.0;
  Vec v(3);
  if (p1 == 0.0) {
    v << x(0, 0), x(1, 1), x(2, 2);
    return v;
  }
  const double p2 = (x(0, 0) - q) * (x(0, 0) - q) + (x(1, 1) - q) * (x(1, 1) - q) + (x(2, 2) - q) * (x(2, 2) - q) +
                    2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const double b00 = (x(0, 0) - q) / p, b11 = (x(1, 1) - q) / p, b22 = (x(2, 2) - q) / p;
  const double b01 = x(0, 1) / p, b02 = x(0, 2) / p, b12 = x(1, 2) / p;
  const double det = b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) + b02 * (b01 * b12 - b11 * b02);
  const double r = std::clamp(0.5 * det, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  v << e3, 3.0 * q - e1 - e3, e1;
  return v;
}

double pucci(const SymmetricMatrix& x, double pos_weight, double neg_weight) {
  const auto ev = eigenvalues(x);
  double s = 0.0;
  for (int i = 0; i < ev.size(); ++i) s += ev(i) > 0.0 ? pos_weight * ev(i) : neg_weight * ev(i);
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConstructionError(what);
}

}  // namespace

OperatorSpec OperatorSpec::laplacian() { return with_family(OperatorFamily::laplacian, 0.0); }

OperatorSpec OperatorSpec::p_laplacian(double p) {
  require(std::isfinite(p) && p >= 2.0, "p_laplacian requires p >= 2 (got p=" + std::to_string(p) + ")");
  auto op = with_family(OperatorFamily::p_laplacian, p - 2.0);
  op.p = p;
  return op;
}

OperatorSpec OperatorSpec::pseudo_p_laplacian(double p) {
  require(std::isfinite(p) && p >= 2.0,
          "pseudo_p_laplacian requires p >= 2 (got p=" + std::to_string(p) + ")");
  auto op = with_family(OperatorFamily::pseudo_p_laplacian, p - 2.0);
  op.p = p;
  return op;
}

OperatorSpec OperatorSpec::infinity_laplacian() { return with_family(OperatorFamily::infinity_laplacian, 2.0); }

OperatorSpec OperatorSpec::pucci_max(double lo, double hi) {
  require(lo > 0.0 && lo <= hi, "pucci requires 0 < lo <= hi");
  auto op = with_family(OperatorFamily::pucci_max, 0.0);
  op.lo = lo;
  op.hi = hi;
  return op;
}

OperatorSpec OperatorSpec::pucci_min(double lo, double hi) {
  require(lo > 0.0 && lo <= hi, "pucci requires 0 < lo <= hi");
  auto op = with_family(OperatorFamily::pucci_min, 0.0);
  op.lo = lo;
  op.hi = hi;
  return op;
}

OperatorSpec OperatorSpec::negated_laplacian() { return with_family(OperatorFamily::negated_laplacian, 0.0); }

OperatorSpec OperatorSpec::positive_trace() { return with_family(OperatorFamily::positive_trace, 0.0); }

OperatorSpec OperatorSpec::from_name(std::string_view family, const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  std::vector<std::string> allowed{"lambda1"};
  OperatorSpec op;
  if (family == "laplacian") {
    op = laplacian();
  } else if (family == "p_laplacian") {
    allowed.push_back("p");
    op = p_laplacian(get("p", 2.0));
  } else if (family == "pseudo_p_laplacian") {
    allowed.push_back("p");
    op = pseudo_p_laplacian(get("p", 2.0));
  } else if (family == "infinity_laplacian") {
    op = infinity_laplacian();
  } else if (family == "pucci_max" || family == "pucci_min") {
    allowed.insert(allowed.end(), {"lo", "hi"});
    const double lo = get("lo", 1.0), hi = get("hi", 1.0);
    op = family == "pucci_max" ? pucci_max(lo, hi) : pucci_min(lo, hi);
  } else if (family == "negated_laplacian") {
    op = negated_laplacian();
  } else if (family == "positive_trace") {
    op = positive_trace();
  } else {
    throw InputError("unknown operator family '" + std::string(family) + "'");
  }
  for (const auto& [key, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InputError("operator '" + std::string(family) + "' does not take parameter '" + key + "'");
  }
  if (const auto it = params.find("lambda1"); it != params.end()) {
    require(it->second >= 1.0, "lambda1 must be >= 1");
    op.lambda1 = it->second;
  }
  return op;
}

std::string OperatorSpec::family_name() const {
  switch (family) {
    case OperatorFamily::laplacian: return "laplacian";
    case OperatorFamily::p_laplacian: return "p_laplacian";
    case OperatorFamily::pseudo_p_laplacian: return "pseudo_p_laplacian";
    case OperatorFamily::infinity_laplacian: return "infinity_laplacian";
    case OperatorFamily::pucci_max: return "pucci_max";
    case OperatorFamily::pucci_min: return "pucci_min";
    case OperatorFamily::negated_laplacian: return "negated_laplacian";
    case OperatorFamily::positive_trace: return "positive_trace";
  }
  return "unknown";
}

std::string OperatorSpec::describe() const {
  std::ostringstream os;
  os << family_name();
  if (family == OperatorFamily::p_laplacian || family == OperatorFamily::pseudo_p_laplacian) os << "(p=" << p << ")";
  if (family == OperatorFamily::pucci_max || family == OperatorFamily::pucci_min)
    os << "(lo=" << lo << ",hi=" << hi << ")";
  return os.str();
}

bool OperatorSpec::rotation_invariant() const { return family != OperatorFamily::pseudo_p_laplacian; }

bool OperatorSpec::is_fixture() const {
  return family == OperatorFamily::negated_laplacian || family == OperatorFamily::positive_trace;
}

nlohmann::json OperatorSpec::to_json() const {
  nlohmann::json j{{"family", family_name()}, {"k1", k1}, {"k", k}, {"lambda1", lambda1}};
  if (family == OperatorFamily::p_laplacian || family == OperatorFamily::pseudo_p_laplacian) j["p"] = p;
  if (family == OperatorFamily::pucci_max || family == OperatorFamily::pucci_min) {
    j["lo"] = lo;
    j["hi"] = hi;
  }
  return j;
}

double evaluate_unchecked(const OperatorSpec& op, const Vec& grad, const SymmetricMatrix& hess) {
  switch (op.family) {
    case OperatorFamily::laplacian: return hess.trace();
    case OperatorFamily::negated_laplacian: return -hess.trace();
    case OperatorFamily::positive_trace: return std::max(0.0, hess.trace());
    case OperatorFamily::p_laplacian: {
      const double g2 = grad.squaredNorm();
      if (op.p == 2.0) return hess.trace();
      if (g2 == 0.0) return 0.0;
      return std::pow(g2, 0.5 * (op.p - 2.0)) * (hess.trace() + (op.p - 2.0) * hess.quadratic_form(grad) / g2);
    }
    case OperatorFamily::pseudo_p_laplacian: {
      double s = 0.0;
      for (int i = 0; i < hess.dim(); ++i) {
        const double a = std::abs(grad(i));
        const double w = op.p == 2.0 ? 1.0 : std::pow(a, op.p - 2.0);
        s += w * hess(i, i);
      }
      return (op.p - 1.0) * s;
    }
    case OperatorFamily::infinity_laplacian: return hess.quadratic_form(grad);
    case OperatorFamily::pucci_max: return pucci(hess, op.hi, op.lo);
    case OperatorFamily::pucci_min: return pucci(hess, op.lo, op.hi);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double evaluate(const OperatorSpec& op, const Vec& grad, const SymmetricMatrix& hess) {
  if (grad.size() != hess.dim()) throw InputError("evaluate: gradient and Hessian dimensions differ");
  if (!grad.allFinite() || !hess.all_finite()) throw InputError("evaluate: non-finite input");
  return evaluate_unchecked(op, grad, hess);
}

double radial_eval(const OperatorSpec& op, const RadialDerivatives& v, double r, const Vec& e) {
  if (!(r > 0.0)) throw DomainError("radial_eval: r must be positive (the center is singular)");
  const auto x = SymmetricMatrix::identity_plus_rank_one(e, v.dv / r, v.d2v - v.dv / r);
  return evaluate(op, v.dv * e, x);
}

int default_direction_count(int n) { return n <= 1 ? 2 : (n == 2 ? 256 : 1024); }

RadialExtremes radial_extremes(const OperatorSpec& op, const RadialDerivatives& v, double r, int n,
                               int n_directions) {
  if (!(r > 0.0)) throw DomainError("radial_extremes: r must be positive");
  if (n_directions <= 0) n_directions = default_direction_count(n);
  auto f = [&](const Vec& e) { return radial_eval(op, v, r, e); };
  return {extremize_over_sphere(n, f, n_directions, Extremum::min).value,
          extremize_over_sphere(n, f, n_directions, Extremum::max).value};
}

namespace {

SymmetricMatrix random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  SymmetricMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s.set(i, j, normal(rng));
  return s;
}

Vec random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

SymmetricMatrix random_psd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  return SymmetricMatrix::from_upper(a * a.transpose());
}

}  // namespace

MonotonicityReport check_monotonicity(const OperatorSpec& op, int n, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InputError("check_monotonicity: n_samples must be >= 1");
  std::mt19937_64 rng(seed);
  MonotonicityReport rep;
  rep.n_samples = n_samples;
  rep.worst_grad = Vec::Zero(n);
  for (int s = 0; s < n_samples; ++s) {
    const Vec g = random_vector(n, rng);
    const auto x = random_symmetric(n, rng);
    auto y = x;
    y += random_psd(n, rng);
    const double hx = evaluate(op, g, x);
    const double hy = evaluate(op, g, y);
    const double violation = hx - hy;
    const double tol = 1e-10 * (1.0 + std::max(std::abs(hx), std::abs(hy)));
    if (violation > rep.worst_violation) {
      rep.worst_violation = violation;
      rep.worst_grad = g;
    }
    if (violation > tol) rep.pass = false;
  }
  return rep;
}

HomogeneityReport check_homogeneity(const OperatorSpec& op, int n, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InputError("check_homogeneity: n_samples must be >= 1");
  constexpr double kRelTol = 1e-9;
  const double thetas[] = {0.5, 2.0, 10.0};
  std::mt19937_64 rng(seed);
  HomogeneityReport rep;
  double sxy = 0.0, sxx = 0.0;
  bool all_ok = true;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  for (int s = 0; s < n_samples; ++s) {
    const Vec g = random_vector(n, rng);
    const auto x = random_symmetric(n, rng);
    const double h = evaluate(op, g, x);
    if (std::abs(h) < 1e-12) continue;
    ++rep.n_used;
    for (const double th : thetas) {
      const double hg = evaluate(op, th * g, x);
      const double hx = evaluate(op, g, th * x);
      const double hj = evaluate(op, th * g, th * x);
      const double eg = rel(hg, std::pow(th, op.k1) * h);
      const double ex = rel(hx, th * h);
      const double ej = rel(hj, std::pow(th, op.k) * h);
      rep.max_rel_error_gradient = std::max(rep.max_rel_error_gradient, eg);
      rep.max_rel_error_hessian = std::max(rep.max_rel_error_hessian, ex);
      rep.max_rel_error_joint = std::max(rep.max_rel_error_joint, ej);
      all_ok = all_ok && eg <= kRelTol && ex <= kRelTol && ej <= kRelTol;
      if (hg / h > 0.0) {
        const double lx = std::log(th);
        sxy += lx * std::log(hg / h);
        sxx += lx * lx;
      }
    }
    // |theta|^k1 also for negative theta.
    const double hn = evaluate(op, -2.0 * g, x);
    const double en = rel(hn, std::pow(2.0, op.k1) * h);
    rep.max_rel_error_gradient = std::max(rep.max_rel_error_gradient, en);
    all_ok = all_ok && en <= kRelTol;
  }
  if (rep.n_used == 0 || sxx == 0.0)
    throw InconclusiveError("check_homogeneity: H vanished on every sample");
  rep.k1 = sxy / sxx;
  rep.k = rep.k1 + 1.0;
  rep.pass = all_ok && std::abs(rep.k1 - op.k1) <= kRelTol;
  return rep;
}

double min_over_directions_rank_one(const OperatorSpec& op, int n, double a, double b, int n_directions) {
  if (n_directions <= 0) n_directions = default_direction_count(n);
  auto f = [&](const Vec& e) { return evaluate_unchecked(op, e, SymmetricMatrix::identity_plus_rank_one(e, a, b)); };
  return extremize_over_sphere(n, f, n_directions, Extremum::min).value;
}

double max_over_directions_rank_one(const OperatorSpec& op, int n, double a, double b, int n_directions) {
  if (n_directions <= 0) n_directions = default_direction_count(n);
  auto f = [&](const Vec& e) { return evaluate_unchecked(op, e, SymmetricMatrix::identity_plus_rank_one(e, a, b)); };
  return extremize_over_sphere(n, f, n_directions, Extremum::max).value;
}

MMValues compute_mM(const OperatorSpec& op, int n, double lambda, int n_directions) {
  if (n_directions <= 0) n_directions = default_direction_count(n);
  if (n >= 2 && n_directions < 8) throw InputError("compute_mM: n_directions must be >= 8");
  // first family: H(e, I - L e(x)e); second: H(e, L e(x)e - I)
  const double min1 = min_over_directions_rank_one(op, n, 1.0, -lambda, n_directions);
  const double max1 = max_over_directions_rank_one(op, n, 1.0, -lambda, n_directions);
  const double min2 = min_over_directions_rank_one(op, n, -1.0, lambda, n_directions);
  const double max2 = max_over_directions_rank_one(op, n, -1.0, lambda, n_directions);
  MMValues v;
  v.m = std::min(min1, -max2);
  v.M = std::max(max1, -min2);
  v.L = min2;
  return v;
}

std::optional<double> find_lambda1(const OperatorSpec& op, int n, double lambda_max, int n_grid, int n_directions) {
  if (!(lambda_max > 1.0)) throw InputError("find_lambda1: lambda_max must exceed 1");
  n_grid = std::max(n_grid, 2);
  std::vector<double> grid(static_cast<std::size_t>(n_grid) + 1);
  std::vector<double> big_m(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = 1.0 + (lambda_max - 1.0) * static_cast<double>(i) / n_grid;
    big_m[i] = compute_mM(op, n, grid[i], n_directions).M;
  }
  if (!(big_m.back() < 0.0)) return std::nullopt;
  std::size_t j = grid.size() - 1;
  while (j > 0 && big_m[j - 1] < 0.0) --j;
  if (j == 0) return 1.0;
  double lo = grid[j - 1], hi = grid[j];
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (compute_mM(op, n, mid, n_directions).M < 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

OperatorSpec refine_lambda1(const OperatorSpec& op, int n, double lambda_max) {
  auto out = op;
  if (const auto l1 = find_lambda1(op, n, lambda_max)) out.lambda1 = *l1;
  return out;
}

CoercivityReport coercivity_report(const OperatorSpec& op, int n, double lambda_min, double lambda_max, int n_grid,
                                   int n_directions) {
  if (n_directions <= 0) n_directions = default_direction_count(n);
  CoercivityReport rep;
  rep.n_directions = n_directions;
  n_grid = std::max(n_grid, 2);
  bool c_i = true;
  for (int i = 0; i < n_grid; ++i) {
    const double lam = lambda_min + (lambda_max - lambda_min) * i / (n_grid - 1);
    const auto v = compute_mM(op, n, lam, n_directions);
    rep.lambda_grid.push_back(lam);
    rep.m_values.push_back(v.m);
    rep.M_values.push_back(v.M);
    rep.L_values.push_back(v.L);
    if (lam < 1.0 && !(v.m > 0.0)) c_i = false;
  }
  rep.c_i_pass = c_i;
  if (lambda_max > 1.0) rep.lambda1_found = find_lambda1(op, n, lambda_max, 200, n_directions);
  rep.c_ii_pass = rep.lambda1_found.has_value();
  return rep;
}

nlohmann::json CoercivityReport::to_json() const {
  nlohmann::json j{{"lambda_grid", lambda_grid}, {"m", m_values},          {"M", M_values},
                   {"L", L_values},              {"c_i_pass", c_i_pass}, {"c_ii_pass", c_ii_pass},
                   {"n_directions", n_directions}};
  j["lambda1_found"] = lambda1_found ? nlohmann::json(*lambda1_found) : nlohmann::json(nullptr);
  return j;
}

}  // namespace dnp
