#include "hslab/flow.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "hslab/quadrature.hpp"

namespace hslab {

namespace {

std::string at_t(double t, const char* what) {
  std::ostringstream s;
  s.precision(10);
  s << "t = " << t << ": " << what;
  return s.str();
}

Complex harmonic_power(Complex z, int k) {
  Complex p = 1.0;
  for (int i = 0; i < k; ++i) p *= z;
  return p;
}

}  // namespace

std::vector<FlowSnapshot> run_flow(const WeightSpec& w, const std::vector<double>& ts, int n) {
  if (ts.empty()) return {};
  return run_flow(FlowSolver(w, n), ts);
}

std::vector<FlowSnapshot> run_flow(const FlowSolver& solver, const std::vector<double>& ts) {
  for (size_t i = 0; i < ts.size(); ++i) {
    if (!std::isfinite(ts[i]) || ts[i] <= 0.0) throw DomainError("flow times must be positive and finite");
    if (i > 0 && !(ts[i] > ts[i - 1])) throw DomainError("flow times must be strictly increasing");
  }
  // Each time is solved from the nested coarse-grid start: the previous active set lies several
  // rings away and costs one active-set iteration per ring.
  std::vector<FlowSnapshot> out;
  for (double t : ts) {
    try {
      out.push_back(solver.snapshot(t));
    } catch (const SolverFailure& e) {
      throw SolverFailure(at_t(t, e.what()), e.residual());
    } catch (const EmptyDomain& e) {
      throw EmptyDomain(at_t(t, e.what()));
    } catch (const InvalidWeight& e) {
      throw InvalidWeight(at_t(t, e.what()));
    } catch (const Error& e) {
      throw Error(at_t(t, e.what()));
    }
  }
  return out;
}

long inclusion_violations(const FlowSnapshot& a, const FlowSnapshot& b) {
  if (a.n != b.n) throw DomainError("snapshots on different grids");
  long bad = 0;
  for (size_t i = 0; i < a.membership.size(); ++i)
    if (a.membership[i] && !b.membership[i]) ++bad;
  return bad;
}

std::vector<double> mean_value_residuals(const FlowSnapshot& s, const WeightSpec& w, int degree) {
  const DomainGeometry g = s.geometry();
  std::vector<double> out;
  out.push_back(std::abs(integrate_domain(g, [&](Complex z) { return w.value(z); }) - s.t));
  for (int k = 1; k <= degree; ++k) {
    out.push_back(std::abs(integrate_domain(g, [&](Complex z) { return harmonic_power(z, k).real() * w.value(z); })));
    out.push_back(std::abs(integrate_domain(g, [&](Complex z) { return harmonic_power(z, k).imag() * w.value(z); })));
  }
  return out;
}

double max_turning_angle(const Polyline& p, double merge_tol) {
  Polyline v;
  for (Complex z : p)
    if (v.empty() || std::abs(z - v.back()) > merge_tol) v.push_back(z);
  while (v.size() > 1 && std::abs(v.front() - v.back()) <= merge_tol) v.pop_back();
  const size_t m = v.size();
  if (m < 3) return 180.0;
  double worst = 0.0;
  for (size_t k = 0; k < m; ++k) {
    const Complex a = v[k] - v[(k + m - 1) % m], b = v[(k + 1) % m] - v[k];
    worst = std::max(worst, std::abs(std::arg(b / a)) * 180.0 / kPi);
  }
  return worst;
}

VerificationReport verify_snapshot(const FlowSnapshot& s, double max_turning_deg) {
  VerificationReport r;
  r.subject = "snapshot t = " + std::to_string(s.t);
  const int n = s.n;
  const size_t total = static_cast<size_t>(n) * n;
  const auto& mem = s.membership;

  // (a) members 4-connected
  long members = std::count(mem.begin(), mem.end(), 1);
  std::vector<uint8_t> seen(total, 0);
  std::deque<size_t> queue;
  const size_t origin = static_cast<size_t>(n / 2) * n + n / 2;
  long reached = 0;
  if (mem[origin]) {
    queue.push_back(origin);
    seen[origin] = 1;
  }
  while (!queue.empty()) {
    const size_t c = queue.front();
    queue.pop_front();
    ++reached;
    const int i = static_cast<int>(c % n), j = static_cast<int>(c / n);
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      const int a = i + di[d], b = j + dj[d];
      if (a < 0 || b < 0 || a >= n || b >= n) continue;
      const size_t q = static_cast<size_t>(b) * n + a;
      if (mem[q] && !seen[q]) {
        seen[q] = 1;
        queue.push_back(q);
      }
    }
  }
  r.add("connected", static_cast<double>(members - reached), 0.0, n, s.h);

  // (b) complement 8-connected, flooded from the grid corner (outside the disk)
  std::fill(seen.begin(), seen.end(), 0);
  long complement = static_cast<long>(total) - members, flooded = 0;
  if (!mem[0]) {
    queue.push_back(0);
    seen[0] = 1;
  }
  while (!queue.empty()) {
    const size_t c = queue.front();
    queue.pop_front();
    ++flooded;
    const int i = static_cast<int>(c % n), j = static_cast<int>(c / n);
    for (int b = j - 1; b <= j + 1; ++b)
      for (int a = i - 1; a <= i + 1; ++a) {
        if (a < 0 || b < 0 || a >= n || b >= n) continue;
        const size_t q = static_cast<size_t>(b) * n + a;
        if (!mem[q] && !seen[q]) {
          seen[q] = 1;
          queue.push_back(q);
        }
      }
  }
  r.add("no_holes", static_cast<double>(complement - flooded), 0.0, n, s.h);

  // (c) one loop
  r.add("single_loop", std::abs(static_cast<double>(s.loops.size()) - 1.0), 0.0, n, s.h);

  // (d) cusp proxy
  double turning = 0.0;
  for (const Polyline& p : s.loops) turning = std::max(turning, max_turning_angle(p, 1e-3 * s.h));
  r.add("turning_angle_deg", turning, max_turning_deg, n, s.h).note =
      "resolution-dependent proxy for a cusp-free boundary";
  return r;
}

Hypotheses check_hypotheses(const WeightSpec& nu, int n, bool reproducing) {
  Hypotheses hyp;
  const double h = grid_spacing(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Complex z(-1.0 + i * h, -1.0 + j * h);
      const double s = std::norm(z);
      if (std::sqrt(s) > 1.0 - h) continue;
      const double v = nu.value(z);
      double m;
      if (!(v > 0.0) || !std::isfinite(v)) {
        m = -kInf;
      } else {
        const double x = 1.0 - s;
        const Complex dlog = nu.dz(z) / v + std::conj(z) / x;
        m = x * x * (nu.lap_log(z) + std::norm(dlog)) + 1.0;
      }
      if (std::isnan(m)) m = -kInf;
      hyp.subharmonic_margin = std::min(hyp.subharmonic_margin, m);
    }
  if (reproducing) {
    auto weighted = [&](auto&& hfun) {
      return quad::disk_integral([&](Complex z) { return hfun(z) * nu.value(z); }, 64, 256);
    };
    double worst = std::abs(weighted([](Complex) { return 1.0; }) - 1.0);
    for (int k = 1; k <= 6; ++k) {
      worst = std::max(worst, std::abs(weighted([k](Complex z) { return harmonic_power(z, k).real(); })));
      worst = std::max(worst, std::abs(weighted([k](Complex z) { return harmonic_power(z, k).imag(); })));
    }
    hyp.reproducing_residual = std::isfinite(worst) ? worst : kInf;
  }
  return hyp;
}

WEstimate w_estimate(const WeightSpec& nu, int n) {
  WEstimate out;
  out.report.subject = "W-estimate for " + nu.id();
  const Hypotheses hyp = check_hypotheses(nu, n, true);
  const double h = grid_spacing(n);
  double edge = 0.0;  // nu must extend continuously to the circle
  for (int k = 0; k < 720; ++k) edge = std::max(edge, std::abs(nu.value(std::polar(1.0, 2.0 * kPi * k / 720))));
  const bool bounded = std::isfinite(edge);
  out.report.add("hypothesis_bounded", bounded ? 0.0 : 1.0, 0.0).note = "nu finite on the circle";
  out.report.add("hypothesis_subharmonic", hyp.subharmonic_margin, -1e-8, n, h, true);
  out.report.add("hypothesis_reproducing", hyp.reproducing_residual, 1e-4);

  DiskLaplacian lap(n);
  const int m = lap.unknowns();
  std::vector<double> rhs(m);
  for (int k = 0; k < m; ++k) {
    const Complex z(-1.0 + (lap.node(k) % n) * h, -1.0 + (lap.node(k) / n) * h);
    rhs[k] = nu.value(z);
  }
  double res = 0.0;
  const std::vector<double> u = lap.solve(rhs, 0.0, &res);
  out.excess = GridField::zeros(n);
  out.max_excess = -kInf;
  for (int k = 0; k < m; ++k) {
    const size_t idx = lap.node(k);
    const Complex z(-1.0 + (idx % n) * h, -1.0 + (idx / n) * h);
    const double s = std::norm(z);
    const double e = -u[k] - 1.5 + 2.0 * s - 0.5 * s * s;
    out.excess.values[idx] = e;
    out.max_excess = std::max(out.max_excess, e);
    out.sup_deviation = std::max(out.sup_deviation, std::abs(e));
  }
  out.report.add("w_bound", out.max_excess, 10.0 * h * h, n, h).note = "max over nodes of W - bound";
  if (!bounded) out.report.mark_not_applicable("nu is unbounded at the circle");
  else if (!hyp.subharmonic()) out.report.mark_not_applicable("nu/(1-|z|^2) is not subharmonic on the grid");
  else if (!hyp.reproducing()) out.report.mark_not_applicable("nu does not reproduce harmonic functions at the origin");
  return out;
}

VerificationReport w_estimate_check(const WeightSpec& nu, int n) { return w_estimate(nu, n).report; }

TestFunction test_function_from_id(const std::string& id) {
  if (id == "abs2") return TestFunction::abs2;
  if (id == "abs4") return TestFunction::abs4;
  if (id == "exp_re") return TestFunction::exp_re;
  if (id == "inv_one_minus_half_z") return TestFunction::inv_one_minus_half_z;
  if (id == "re_z") return TestFunction::re_z;
  throw DomainError("unknown test function '" + id + "'");
}

std::string test_function_id(TestFunction u) {
  switch (u) {
    case TestFunction::abs2: return "abs2";
    case TestFunction::abs4: return "abs4";
    case TestFunction::exp_re: return "exp_re";
    case TestFunction::inv_one_minus_half_z: return "inv_one_minus_half_z";
    case TestFunction::re_z: return "re_z";
  }
  return "";
}

double eval_test_function(TestFunction u, Complex z) {
  switch (u) {
    case TestFunction::abs2: return std::norm(z);
    case TestFunction::abs4: return std::norm(z) * std::norm(z);
    case TestFunction::exp_re: return std::exp(z.real());
    case TestFunction::inv_one_minus_half_z: return 1.0 / std::abs(1.0 - 0.5 * z);
    case TestFunction::re_z: return z.real();
  }
  return NAN;
}

const std::vector<TestFunction>& subharmonic_test_functions() {
  static const std::vector<TestFunction> all = {TestFunction::abs2, TestFunction::abs4, TestFunction::exp_re,
                                                TestFunction::inv_one_minus_half_z};
  return all;
}

namespace {

void add_hypothesis_rows(VerificationReport& r, const Hypotheses& hyp, int n) {
  const double h = grid_spacing(n);
  r.add("hypothesis_subharmonic", hyp.subharmonic_margin, -1e-8, n, h, true);
  r.add("hypothesis_reproducing", hyp.reproducing_residual, 1e-4);
}

void close_hypotheses(VerificationReport& r, const Hypotheses& hyp) {
  if (!hyp.subharmonic()) r.mark_not_applicable("nu/(1-|z|^2) is not subharmonic");
  else if (!hyp.reproducing()) r.mark_not_applicable("nu does not reproduce harmonic functions at the origin");
}

}  // namespace

VerificationReport reproducing_inequality(const WeightSpec& nu, TestFunction u, int n, double tol) {
  VerificationReport r;
  r.subject = "reproducing inequality for " + nu.id() + ", u = " + test_function_id(u);
  const Hypotheses hyp = check_hypotheses(nu, n);
  add_hypothesis_rows(r, hyp, n);
  const double lhs = quad::disk_integral(
      [&](Complex z) { return eval_test_function(u, z) * 2.0 * (1.0 - std::norm(z)); }, 64, 256);
  const double rhs = quad::disk_integral([&](Complex z) { return eval_test_function(u, z) * nu.value(z); }, 64, 256);
  r.add("inequality_" + test_function_id(u), lhs - rhs, tol).note =
      "int u 2(1-|z|^2) - int u nu = " + std::to_string(lhs) + " - " + std::to_string(rhs);
  close_hypotheses(r, hyp);
  return r;
}

DensityScan boundary_density_scan(const WeightSpec& nu, int angles) {
  DensityScan scan;
  scan.angles = angles;
  for (int k = 0; k < angles; ++k) {
    const double th = 2.0 * kPi * k / angles;
    const Complex e = std::polar(1.0, th);
    const double v = nu.value(e);
    if (v > 0.0) continue;
    const double inward = -2.0 * (nu.dz(e) * e).real();
    if (std::abs(v) <= 1e-8 && inward > 0.0) {
      ++scan.zero_branch;
      continue;
    }
    ++scan.failures;
  }
  return scan;
}

VerificationReport boundary_density_check(const WeightSpec& nu, int angles, int n) {
  VerificationReport r;
  r.subject = "boundary density for " + nu.id();
  const Hypotheses hyp = check_hypotheses(nu, n);
  add_hypothesis_rows(r, hyp, n);
  const DensityScan scan = boundary_density_scan(nu, angles);
  r.add("density_dichotomy", scan.failures, 0.0).note =
      std::to_string(scan.angles) + " angles, " + std::to_string(scan.zero_branch) + " on the zero branch";
  close_hypotheses(r, hyp);
  return r;
}

}  // namespace hslab
