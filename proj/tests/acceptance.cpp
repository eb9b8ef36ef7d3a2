// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dnp/barriers.hpp"
#include "dnp/certify.hpp"
#include "dnp/elliptic.hpp"
#include "dnp/error.hpp"
#include "dnp/harness.hpp"
#include "dnp/operators.hpp"
#include "dnp/parabolic.hpp"

using namespace dnp;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail] ";
    }
    detail << what << "; ";
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string failing(const ExperimentReport& r) {
  std::string out;
  for (const auto& c : r.checks)
    if (!c.pass) out += " " + c.name + "=" + fmt(c.value);
  return out;
}

void expect_report(Outcome& o, const std::string& label, const ExperimentReport& r) {
  o.expect(r.pass, label + (r.pass ? " ok" : " failed:" + failing(r)));
}

double check_value(const ExperimentReport& r, const std::string& name) {
  const Check* c = r.find(name);
  return c ? c->value : std::nan("");
}

std::shared_ptr<const GridDomain> grid(const Shape& s, double h) {
  return std::make_shared<const GridDomain>(GridDomain::build(s, h));
}

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<int>(v.size()));
  int i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

void criterion1(Outcome& o) {
  const auto op = OperatorSpec::p_laplacian(3.0);
  double worst = 0.0;
  for (double L : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const auto v = compute_mM(op, 2, L);
    const double expected = (2.0 + 3.0 - 2.0) - (3.0 - 1.0) * L;
    worst = std::max({worst, std::abs(v.m - expected), std::abs(v.M - expected)});
  }
  o.expect(worst <= 1e-6, "max |m,M - (n+p-2-(p-1)L)| = " + fmt(worst));
  const auto hr = check_homogeneity(op, 2, 2000, 1);
  o.expect(hr.pass && std::abs(hr.k - 2.0) <= 1e-9, "homogeneity k = " + std::to_string(hr.k));
}

void certify_kind(Outcome& o, const std::string& kind, const std::vector<OperatorSpec>& ops,
                  const std::function<std::vector<BarrierPtr>(const OperatorSpec&)>& build) {
  for (const auto& op : ops) {
    double worst = INFINITY, deriv = 0.0;
    bool ok = true;
    std::string err;
    try {
      for (const auto& b : build(op)) {
        const auto cert = certify(*b);
        worst = std::min(worst, cert.worst_margin);
        ok = ok && cert.pass;
        const auto d = check_derivatives(*b, 1000, 7);
        deriv = std::max(deriv, d.max_rel_error());
      }
    } catch (const std::exception& e) {
      ok = false;
      err = e.what();
    }
    ok = ok && worst >= -kCertTolerance && deriv <= 1e-6;
    o.expect(ok, kind + "/" + op.describe() + (err.empty() ? " margin " + fmt(worst) + " fd " + fmt(deriv) : " " + err));
  }
}

void criterion2(Outcome& o) {
  const std::vector<OperatorSpec> k_one{OperatorSpec::laplacian(), OperatorSpec::pucci_max(1.0, 2.0)};
  const std::vector<OperatorSpec> k_big{OperatorSpec::p_laplacian(3.0), OperatorSpec::infinity_laplacian()};
  const std::vector<OperatorSpec> any{OperatorSpec::laplacian(), OperatorSpec::p_laplacian(3.0)};
  const Shape box = Shape::box(vec({0.0, 0.0}), vec({1.0, 1.0}));
  const Shape ival = Shape::interval(0.0, 1.0);

  certify_kind(o, "hopf_shell", k_one, [](const OperatorSpec& op) {
    return std::vector<BarrierPtr>{make_hopf_shell(op, {vec({0.0, 0.0}), 1.0, 0.5, 0.0})};
  });
  certify_kind(o, "slanted_cylinder", k_one, [](const OperatorSpec& op) {
    SlantedCylinderParams p;
    p.p = vec({0.0, 0.0});
    p.q = vec({0.05, 0.0});
    p.tau = 0.0;
    p.s = 1.0;
    p.rho = 0.3;
    p.level = 1.0;
    return std::vector<BarrierPtr>{make_slanted_cylinder(op, p)};
  });
  certify_kind(o, "counterexample_k_gt_1", k_big, [](const OperatorSpec& op) {
    return std::vector<BarrierPtr>{make_counterexample(op, 2, op.k, {1.0, 1.0, 1.0, {}})};
  });
  certify_kind(o, "cylinder_min", k_big, [](const OperatorSpec& op) {
    return std::vector<BarrierPtr>{make_cylinder_min(op, {vec({0.0, 0.0}), 0.0, 1.0, 0.5, 1.0, 0.0})};
  });
  certify_kind(o, "exp_growth_sub", any, [&](const OperatorSpec& op) {
    const Vec z = vec({2.5, 0.5});
    return std::vector<BarrierPtr>{make_exp_growth_sub(op, box, z, exp_growth_params_for(op, box, z, 0.5, 1.0, 0.5, 0.0, 10.0))};
  });
  certify_kind(o, "exp_decay_super", any, [&](const OperatorSpec& op) {
    const Vec z = vec({2.5, 0.5});
    return std::vector<BarrierPtr>{
        make_exp_decay_super(op, box, z, exp_decay_params_for(op, box, z, 0.5, 1.0, 2.0, 0.5, 0.0, 10.0))};
  });
  certify_kind(o, "power_decay_super", k_big, [&](const OperatorSpec& op) {
    return std::vector<BarrierPtr>{make_power_decay(op, ival, DecaySide::super, {})};
  });
  certify_kind(o, "power_decay_sub", k_big, [&](const OperatorSpec& op) {
    return std::vector<BarrierPtr>{make_power_decay(op, ival, DecaySide::sub, {})};
  });
  certify_kind(o, "eigen_exponential", k_one, [&](const OperatorSpec& op) {
    return std::vector<BarrierPtr>{make_eigen_exponential(op, box, {})};
  });
  for (bool sub : {true, false}) {
    certify_kind(o, sub ? "perron_sub" : "perron_super", any, [&](const OperatorSpec& op) {
      PerronParams p;
      p.y = vec({0.0, 0.5});
      auto [lo, hi] = make_perron_pair(op, box, p);
      return std::vector<BarrierPtr>{sub ? lo : hi};
    });
  }
}

void criterion3(Outcome& o) {
  const auto k = run_k_gt_1_example(KGreaterOneConfig{});
  for (const char* name : {"slice_min_equals_m", "min_attained_only_at_axis", "axis_spacetime_gradient"}) {
    const Check* c = k.find(name);
    o.expect(c && c->pass, std::string(name) + " = " + fmt(c ? c->value : NAN));
  }
  HopfConfig ce;
  ce.source = HopfConfig::Source::counterexample;
  ce.op = OperatorSpec::p_laplacian(3.0);
  const auto fail = run_hopf_check(ce);
  o.expect(fail.pass && check_value(fail, "hopf_quotient_fails") < 1e-3,
           "counterexample quotient " + fmt(check_value(fail, "hopf_quotient_fails")));
  const auto heat = run_hopf_check(HopfConfig{});
  o.expect(heat.pass && check_value(heat, "hopf_quotient") > 0.1,
           "heat control quotient " + fmt(check_value(heat, "hopf_quotient")));
}

void criterion4(Outcome& o) {
  for (const auto& op : {OperatorSpec::laplacian(), OperatorSpec::pucci_max(1.0, 2.0)}) {
    MinPrincipleConfig c;
    c.op = op;
    expect_report(o, op.describe() + " (0,pi)", run_min_principle_k1(c));
    MinPrincipleConfig d;
    d.op = op;
    d.shape = Shape::box(vec({0.0, 0.0}), vec({1.0, 1.0}));
    d.h = 1.0 / 64;
    d.bump.radius = 0.2;
    d.T_end = 0.2;
    d.times = {0.025, 0.05, 0.1, 0.2};
    expect_report(o, op.describe() + " square h=1/64", run_min_principle_k1(d));
  }
  const auto g = grid(Shape::interval(0.0, M_PI), M_PI / 128);
  ParabolicProblem p{OperatorSpec::laplacian(), g, 1.0, InitialData::sine(g->shape(), 0.0, 1.0),
                     BoundaryData::constant(0.0)};
  p.eigen_decay = true;
  const auto tr = evolve(p, {0.0, 1.0});
  const double err = std::abs(tr.sup(1) - std::exp(-1.0));
  o.expect(err <= 2e-3, "heat sup at t=1 off by " + fmt(err));
}

void criterion5(Outcome& o) {
  const auto r = run_k_gt_1_example(KGreaterOneConfig{});
  for (const char* name : {"certificate:cylinder_min", "boundary_ordering", "comparison:cylinder_min",
                           "persistence_margin_at_p", "persistence_cylinder"}) {
    const Check* c = r.find(name);
    o.expect(c && c->pass, std::string(name) + " = " + fmt(c ? c->value : NAN));
  }
}

void criterion6(Outcome& o) {
  AsymptoticsConfig a;
  a.u0 = InitialData::sine(a.shape, 1.0, 1.0);
  expect_report(o, "unit interval", run_asymptotics(a));
  AsymptoticsConfig b;
  b.shape = Shape::box(vec({0.0, 0.0}), vec({1.0, 1.0}));
  b.h = 1.0 / 32;
  b.u0 = InitialData::sine(b.shape, 1.0, 1.0);
  expect_report(o, "unit square", run_asymptotics(b));
}

void criterion7(Outcome& o) {
  DecayConfig d;
  d.u0 = InitialData::bump(vec({0.5}), 0.3, 1.0, 1.0);
  const auto pw = run_decay(d);
  expect_report(o, "power exponent " + fmt(check_value(pw, "power_exponent")) + " r2 " +
                       fmt(check_value(pw, "power_r2")),
                pw);
  DecayConfig e;
  e.op = OperatorSpec::laplacian();
  e.shape = Shape::interval(0.0, M_PI);
  e.h = M_PI / 128;
  e.model = RateModel::exponential;
  e.nu = 0.0;
  e.u0 = InitialData::sine(e.shape, 0.0, 1.0);
  e.t_last = 8.0;
  e.n_snapshots = 40;
  e.expected_rate = 1.0;
  const auto ex = run_decay(e);
  const double rate = check_value(ex, "exponential_rate");
  o.expect(ex.pass && rate >= 0.95 && rate <= 1.05 && ex.find("rate_vs_lambda_estimate"),
           "exponential rate " + fmt(rate) + (ex.pass ? "" : failing(ex)));
}

void criterion8(Outcome& o) {
  const double h = 1.0 / 16;
  const auto disk = grid(Shape::ball(Vec::Zero(2), 1.0), h);
  const auto sol = solve_elliptic({OperatorSpec::laplacian(), disk, 1.0, 0.0});
  double err = 0.0;
  for (int i = 0; i < disk->size(); ++i)
    err = std::max(err, std::abs(sol.psi[i] - (disk->point(i).squaredNorm() - 1.0) / 4.0));
  o.expect(err <= 5 * h * h, "disk Poisson error " + fmt(err) + " vs " + fmt(5 * h * h));

  const auto line = grid(Shape::interval(0.0, 1.0), 1.0 / 64);
  const auto op = OperatorSpec::p_laplacian(3.0);
  const auto base = solve_elliptic({op, line, 1.0, 0.0});
  const auto scaled = solve_elliptic({op, line, 16.0, 2.0});
  double serr = 0.0;
  for (int i = 0; i < line->size(); ++i) serr = std::max(serr, std::abs(scaled.psi[i] - (2.0 + 4.0 * base.psi[i])));
  o.expect(serr <= 1e-6, "scaling identity error " + fmt(serr));

  const auto lap = OperatorSpec::laplacian();
  const auto pi128 = estimate_lambda(lap, grid(Shape::interval(0.0, M_PI), M_PI / 128), 1.0, 4.0);
  const auto pi256 = estimate_lambda(lap, grid(Shape::interval(0.0, M_PI), M_PI / 256), 1.0, 4.0);
  const auto unit = estimate_lambda(lap, grid(Shape::interval(0.0, 1.0), 1.0 / 128), 1.0, 20.0);
  o.expect(std::abs(pi128.midpoint() - 1.0) <= 0.05, "lambda (0,pi) " + fmt(pi128.midpoint()));
  o.expect(std::abs(unit.midpoint() - M_PI * M_PI) <= 0.05 * M_PI * M_PI, "lambda (0,1) " + fmt(unit.midpoint()));
  const double shift = std::abs(pi128.midpoint() - pi256.midpoint()) / pi256.midpoint();
  o.expect(shift < 0.02, "refinement shift " + fmt(shift));
}

void criterion9(Outcome& o) {
  const auto r = run_comparison_suite(ComparisonSuiteConfig{});
  int passed = 0;
  for (const auto& c : r.checks) passed += c.pass;
  o.expect(r.pass && r.checks.size() == 20, std::to_string(passed) + "/" + std::to_string(r.checks.size()) +
                                                " pairs ordered" + (r.pass ? "" : failing(r)));
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    void (*run)(Outcome&);
  };
  const std::vector<Criterion> criteria{
      {1, "operator algebra", 1.0, criterion1},          {2, "barrier certificates", 120.0, criterion2},
      {3, "counterexample for k > 1", 60.0, criterion3}, {4, "strong minimum principle", 120.0, criterion4},
      {5, "persistence cylinder", 120.0, criterion5},    {6, "asymptotic limits", 180.0, criterion6},
      {7, "decay rates", 300.0, criterion7},             {8, "elliptic and eigenvalue", 300.0, criterion8},
      {9, "comparison suite", 60.0, criterion9},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.expect(s < c.budget_s, "runtime " + fmt(s) + " s (budget " + fmt(c.budget_s) + " s)");
    failures += !o.pass;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
