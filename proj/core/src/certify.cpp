#include "dnp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dnp/error.hpp"
#include "dnp/parallel.hpp"

namespace dnp {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

nlohmann::json point_json(const SpaceTimePoint& p) {
  return {{"x", std::vector<double>(p.x.data(), p.x.data() + p.x.size())}, {"t", p.t}};
}

}  // namespace

void halton_point(std::uint64_t index, int dim, double* out) {
  if (dim > static_cast<int>(std::size(kPrimes))) throw InputError("halton_point: dimension too large");
  for (int d = 0; d < dim; ++d) out[d] = radical_inverse(index + 1, kPrimes[d]);
}

std::vector<SpaceTimePoint> sample_region(const Region& region, const SampleOptions& options) {
  const int d = region.param_dim();
  std::vector<SpaceTimePoint> out;
  int per_axis = std::max(options.per_axis, 2);
  while (per_axis > 2 && std::pow(static_cast<double>(per_axis), d) > options.max_grid_points) --per_axis;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(per_axis);
  std::vector<double> u(static_cast<std::size_t>(d));
  out.reserve(total + static_cast<std::size_t>(options.n_quasi));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (int i = 0; i < d; ++i) {
      u[i] = static_cast<double>(rem % per_axis) / (per_axis - 1);
      rem /= per_axis;
    }
    if (auto p = region.at(u.data())) out.push_back(*p);
  }
  for (int q = 0; q < options.n_quasi; ++q) {
    halton_point(options.seed * 7919u + static_cast<std::uint64_t>(q), d, u.data());
    if (auto p = region.at(u.data())) out.push_back(*p);
  }
  return out;
}

nlohmann::json SignCertificate::to_json() const {
  nlohmann::json j{{"barrier", barrier},
                   {"region", region},
                   {"sign", to_string(sign)},
                   {"n_samples", n_samples},
                   {"worst_margin", worst_margin},
                   {"pass", pass}};
  j["argmin_point"] = argmin ? point_json(*argmin) : nlohmann::json();
  return j;
}

SignCertificate certify_residual(const std::string& name, const std::function<double(const SpaceTimePoint&)>& residual,
                                 const Region& region, Sign sign, const SampleOptions& options) {
  const auto pts = sample_region(region, options);
  if (pts.empty()) throw InputError("certify_sign: region " + region.descriptor().dump() + " has no sample points");
  const double s = sign == Sign::subsolution ? 1.0 : -1.0;
  const std::size_t chunks = chunk_count(pts.size());
  std::vector<double> best(chunks, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> where(chunks, 0);
  parallel_for(pts.size(), [&](std::size_t b, std::size_t e) {
    double lo = std::numeric_limits<double>::infinity();
    std::size_t at = b;
    for (std::size_t i = b; i < e; ++i) {
      double m = -std::numeric_limits<double>::infinity();
      try {
        m = s * residual(pts[i]);
      } catch (const DomainError&) {
      }
      if (!std::isfinite(m)) m = -std::numeric_limits<double>::infinity();
      if (i == b || m < lo) {
        lo = m;
        at = i;
      }
    }
    const std::size_t c = chunk_index(b);
    best[c] = lo;
    where[c] = at;
  });
  SignCertificate cert;
  cert.barrier = name;
  cert.region = region.descriptor();
  cert.sign = sign;
  cert.n_samples = static_cast<int>(pts.size());
  double lo = std::numeric_limits<double>::infinity();
  std::size_t at = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    if (c == 0 || best[c] < lo) {
      lo = best[c];
      at = where[c];
    }
  }
  cert.worst_margin = lo;
  cert.argmin = pts[at];
  cert.pass = lo >= -kCertTolerance;
  return cert;
}

SignCertificate certify_sign(const Barrier& barrier, const Region& region, Sign sign, const SampleOptions& options) {
  if (region.space_dim() != barrier.dim()) throw InputError("certify_sign: region dimension does not match barrier");
  return certify_residual(
      barrier.name(), [&](const SpaceTimePoint& p) { return barrier.residual(p.x, p.t); }, region, sign, options);
}

SignCertificate certify(const Barrier& barrier, const SampleOptions& options) {
  return certify_sign(barrier, barrier.defining_region(), barrier.sign(), options);
}

double DerivativeCheck::max_rel_error() const {
  return std::max({max_rel_error_grad, max_rel_error_hess, max_rel_error_dt});
}

nlohmann::json DerivativeCheck::to_json() const {
  return {{"n_points", n_points},
          {"max_rel_error_grad", max_rel_error_grad},
          {"max_rel_error_hess", max_rel_error_hess},
          {"max_rel_error_dt", max_rel_error_dt},
          {"pass", pass}};
}

DerivativeCheck check_derivatives(const Barrier& barrier, int n_points, std::uint64_t seed, double step, double tol) {
  const Region region = barrier.defining_region();
  const int n = barrier.dim();
  const int d = region.param_dim();
  std::vector<double> u(static_cast<std::size_t>(d));
  DerivativeCheck out;
  // Errors are normwise: the largest absolute error over the sample divided by
  // the largest analytic magnitude of the same derivative.
  double gerr = 0.0, herr = 0.0, terr = 0.0, gscale = 0.0, hscale = 0.0, tscale = 0.0;
  std::uint64_t idx = seed * 104729u;
  int attempts = 0;
  while (out.n_points < n_points && attempts < 100 * n_points) {
    ++attempts;
    halton_point(idx++, d, u.data());
    const auto p = region.at(u.data());
    if (!p) continue;
    const Jet j = barrier.jet(p->x, p->t);
    for (int a = 0; a < n; ++a) {
      Vec xp = p->x, xm = p->x;
      xp(a) += step;
      xm(a) -= step;
      const Jet jp = barrier.jet(xp, p->t), jm = barrier.jet(xm, p->t);
      gerr = std::max(gerr, std::abs((jp.value - jm.value) / (2.0 * step) - j.grad(a)));
      gscale = std::max(gscale, std::abs(j.grad(a)));
      for (int b = 0; b < n; ++b) {
        herr = std::max(herr, std::abs((jp.grad(b) - jm.grad(b)) / (2.0 * step) - j.hess(a, b)));
        hscale = std::max(hscale, std::abs(j.hess(a, b)));
      }
    }
    if (!barrier.stationary()) {
      const double fd = (barrier.value(p->x, p->t + step) - barrier.value(p->x, p->t - step)) / (2.0 * step);
      terr = std::max(terr, std::abs(fd - j.dt));
      tscale = std::max(tscale, std::abs(j.dt));
    }
    ++out.n_points;
  }
  if (out.n_points == 0) throw InputError("check_derivatives: defining region has no sample points");
  auto rel = [](double err, double scale) { return scale > 0.0 ? err / scale : err; };
  out.max_rel_error_grad = rel(gerr, gscale);
  out.max_rel_error_hess = rel(herr, hscale);
  out.max_rel_error_dt = rel(terr, tscale);
  out.pass = out.max_rel_error() <= tol;
  return out;
}

}  // namespace dnp
