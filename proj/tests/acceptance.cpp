// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hslab/commands.hpp"
#include "hslab/config.hpp"
#include "hslab/expmap.hpp"
#include "hslab/flow.hpp"
#include "hslab/geodesics.hpp"
#include "hslab/kernel_checks.hpp"
#include "hslab/korenblum.hpp"

using namespace hslab;
namespace fs = std::filesystem;
namespace kb = hslab::korenblum;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  // records one measured quantity against its bound
  void le(const std::string& what, double value, double bound) {
    const bool ok = value <= bound;
    pass = pass && ok;
    append(what, value, ok ? " <= " : " > ", bound);
  }
  void ge(const std::string& what, double value, double bound) {
    const bool ok = value >= bound;
    pass = pass && ok;
    append(what, value, ok ? " >= " : " < ", bound);
  }
  void lt(const std::string& what, double value, double bound) {
    const bool ok = value < bound;
    pass = pass && ok;
    append(what, value, ok ? " < " : " >= ", bound);
  }
  void flag(const std::string& what, bool ok) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? " ok" : " FAILED");
  }

 private:
  void append(const std::string& what, double v, const char* op, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.3g%s%.3g", what.c_str(), v, op, b);
    if (!detail.empty()) detail += "; ";
    detail += buf;
  }
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0) o.le("runtime s", secs, budget_s);
  if (!o.pass) ++failures;
  std::printf("%-4s criterion %2d  %-34s %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
  std::fflush(stdout);
}

double residual_of(const VerificationReport& r, const std::string& name) {
  for (const auto& row : r.rows)
    if (row.check == name) return row.residual;
  throw Error("missing row " + name);
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// max mean-value residual over harmonic monomials of degree <= 6, per snapshot
std::vector<double> mv_residuals(const WeightSpec& w, const std::vector<double>& ts, int n) {
  std::vector<double> out;
  for (const FlowSnapshot& s : run_flow(w, ts, n)) out.push_back(max_of(mean_value_residuals(s, w, 6)));
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const int n = 513;
  const double h = grid_spacing(n);

  criterion(1, "kernel identities", 10, [](Outcome& o) {
    KernelSuiteOptions opt;
    opt.positivity_pairs = 100000;
    opt.identity_points = 1000;
    opt.seed = 7;
    const VerificationReport r = kernel_suite({"positivity", "laplacian_identity", "origin_identity"}, opt);
    o.le("non-positive pairs", residual_of(r, "positivity"), 0.0);
    o.le("fd identity rel", residual_of(r, "laplacian_identity"), 1e-4);
    o.le("origin identity", residual_of(r, "origin_identity"), 1e-12);
  });

  criterion(2, "representation quadrature", 5, [](Outcome& o) {
    KernelSuiteOptions opt;
    opt.representation_points = 100;
    const VerificationReport r = kernel_suite({"representation"}, opt);
    o.le("boundary mean error", residual_of(r, "representation"), 1e-6);
  });

  criterion(3, "flat flow exactness", 60, [&](Outcome& o) {
    const WeightSpec w = WeightSpec::flat(1);
    const std::vector<double> ts = {0.04, 0.16, 0.36, 0.64};
    const FlowSolver solver(w, n);
    double haus = 0.0, area = 0.0;
    for (const FlowSnapshot& s : run_flow(solver, ts)) {
      haus = std::max(haus, hausdorff_to_circle(s.boundary, std::sqrt(s.t)) / h);
      area = std::max(area, std::abs(s.area_omega - s.t) / (h * s.t));
    }
    o.le("hausdorff/h", haus, 2.0);
    o.le("|area - t|/(h t)", area, 5.0);
    const TerminationEstimate T = termination_time(solver);
    o.flag("T finite", !T.infinite);
    o.le("|T - 1|", std::abs(T.value - 1.0), 1e-2);
  });

  criterion(4, "mean value property", 120, [&](Outcome& o) {
    struct Case {
      const char* name;
      WeightSpec w;
      std::vector<double> ts;
    };
    const Case cases[] = {{"flat", WeightSpec::flat(1), {0.04, 0.16, 0.36, 0.64}},
                          {"2(1-|z|^2)", WeightSpec::alpha_power(0.5, 2.0), {0.1, 0.3, 0.6, 0.9}}};
    for (const Case& c : cases) {
      const std::vector<double> fine = mv_residuals(c.w, c.ts, n);
      const std::vector<double> coarse = mv_residuals(c.w, c.ts, (n + 1) / 2);
      double worst = 0.0, sf = 0.0, sc = 0.0;
      for (size_t k = 0; k < c.ts.size(); ++k) {
        worst = std::max(worst, fine[k] / (h * c.ts[k]));
        sf += fine[k];
        sc += coarse[k];
      }
      o.le(std::string(c.name) + " residual/(h t)", worst, 5.0);
      o.ge(std::string(c.name) + " 257->513 ratio", sc / sf, 1.8);
    }
  });

  criterion(5, "weakly hyperbolic flows", 120, [&](Outcome& o) {
    const std::pair<WeightSpec, std::vector<double>> cases[] = {
        {WeightSpec::alpha_power(0.5, 2.0), {0.1, 0.3, 0.6, 0.9}},
        {WeightSpec::alpha_power(-0.5), {0.1, 0.5, 1.0, 2.0}}};
    int bad = 0, total = 0;
    for (const auto& [w, ts] : cases)
      for (const FlowSnapshot& s : run_flow(w, ts, n)) {
        ++total;
        if (!verify_snapshot(s).passed()) ++bad;
      }
    o.le("failing snapshots", bad, 0.0);
    o.ge("snapshots", total, 8.0);
  });

  criterion(6, "W-estimate equality case", 30, [&](Outcome& o) {
    const WEstimate e = w_estimate(WeightSpec::alpha_power(0.5, 2.0), n);
    o.le("sup deviation/h^2", e.sup_deviation / (h * h), 10.0);
  });

  criterion(7, "Korenblum suite", 60, [](Outcome& o) {
    o.le("|F(0+) - e|", std::abs(kb::big_f_area(1e-7) - std::exp(1.0)), 1e-4);
    double polar = 0.0;
    for (int k = 1; k < 50; ++k) {
      const double r = 0.5 + 0.49 * k / 50.0;
      polar = std::max(polar, std::abs(kb::big_f_polar(r) - kb::big_f_area(r)));
    }
    o.le("polar vs area", polar, 1e-6);
    double ratio = -kInf;
    for (int k = 0; k <= 20; ++k) ratio = std::max(ratio, kb::log_ratio(0.99 + 0.009 * k / 20.0));
    o.le("log ratio", ratio, 4.0 / kPi + 0.05);
    o.le("threshold error", std::abs(kb::divergence_threshold_bisect(1.0) - kPi / (kPi + 2 * (4 - kPi))), 1e-3);
    DiskSampler rng(7);
    double pk = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Complex z = rng.point(0.9);
      pk = std::max(pk, std::abs(kb::pk_integral(z) - kb::pk_closed(z)));
    }
    o.le("P_k identity", pk, 1e-6);
  });

  criterion(8, "containment", 60, [&](Outcome& o) {
    const WeightSpec flat = WeightSpec::flat(1), two = WeightSpec::alpha_power(0.5, 2.0);
    const VerificationReport a = kb::containment_check(extract_domain(flat, 0.1, n), flat, 0.0);
    o.flag("flat applicable", a.applicable);
    o.le("flat |gap|/h", std::abs(residual_of(a, "containment")) / h, 2.0);
    const VerificationReport b = kb::containment_check(extract_domain(two, 0.1, n), two, 0.5);
    o.flag("2(1-|z|^2) applicable", b.applicable);
    o.lt("2(1-|z|^2) gap", residual_of(b, "containment"), 0.0);
  });

  criterion(9, "geodesic circles example", 30, [](Outcome& o) {
    const WeightSpec w = WeightSpec::example7(0.01, 1.0);
    const std::vector<double> roots = geodesic_circle_radii(w);
    o.le("|roots - 2|", std::abs(static_cast<double>(roots.size()) - 2.0), 0.0);
    if (roots.size() != 2) return;
    // independent bracket: 1e4-panel scan and plain bisection to 1e-10
    std::vector<double> ref;
    const int panels = 10000;
    for (int k = 0; k < panels; ++k) {
      double a = (k + 0.5) / (panels + 1.0), b = (k + 1.5) / (panels + 1.0);
      if ((circle_expression(w, a) > 0) == (circle_expression(w, b) > 0)) continue;
      while (b - a > 1e-10) {
        const double m = 0.5 * (a + b);
        ((circle_expression(w, a) > 0) == (circle_expression(w, m) > 0) ? a : b) = m;
      }
      ref.push_back(0.5 * (a + b));
    }
    o.le("independent roots", ref.size(), 2.0);
    const double win[2][2] = {{0.35, 0.45}, {0.5, 0.7}};
    for (size_t k = 0; k < 2; ++k) {
      const std::string tag = "root " + std::to_string(k + 1);
      const double s = roots[k], rho = std::sqrt(s);
      o.flag(tag + " in window", s > win[k][0] && s < win[k][1]);
      if (ref.size() == 2) o.le(tag + " vs bisection", std::abs(s - ref[k]), 1e-10);
      o.le(tag + " residual", circle_residual(w, rho), 1e-8);
      o.ge(tag + " residual at 0.9 rho", circle_residual(w, 0.9 * rho), 1e-2);
      const GeodesicPath p = shoot(w, {rho, 0.0}, Complex(0, 1), 2 * kPi * rho, 2.5e-4);
      o.le(tag + " shot deviation", circle_deviation(p, rho), 1e-3);
    }
    o.ge("hyperbolicity margin", curvature_report(w, 1.0).worst_margin, 0.0);
  });

  criterion(10, "Hele-Shaw exponential charts", 120, [&](Outcome& o) {
    struct Case {
      const char* name;
      WeightSpec w;
      double slope_tol;
    };
    const Case cases[] = {{"flat", WeightSpec::flat(1), 0.05},
                          {"flat(4)", WeightSpec::flat(4), 0.025},
                          {"2(1-|z|^2)", WeightSpec::alpha_power(0.5, 2.0), 0.05}};
    for (const Case& c : cases) {
      ChartBuilder b(c.w, {0.0, 0.0}, n);
      const ExpMapChart chart = b.build(0.8, 4, 32);
      const VerificationReport r = chart_checks(chart, c.w);
      const std::string tag = c.name;
      o.le(tag + " slope err", residual_of(r, "slope_rel_error"), c.slope_tol);
      o.le(tag + " orthogonality deg", residual_of(r, "orthogonality_deg"), 1.0);
      o.le(tag + " crossings", residual_of(r, "trajectory_crossings"), 0.0);
      const ChartRefinement ref = chart_refinement(b, 0.8, 4, 32);
      o.ge(tag + " refinement", ref.ratio, 1.8);
      char buf[96];
      std::snprintf(buf, sizeof buf, " (e1 %.2e, e2 %.2e)", ref.e1, ref.e2);
      o.detail += buf;
    }
  });

  criterion(11, "determinism", 0, [](Outcome& o) {
    struct Run {
      const char* command;
      const char* family;
    };
    const Run runs[] = {{"kernels", "flat"},    {"flow", "alpha_power"}, {"expmap", "flat"},  {"geodesic", "poincare"},
                        {"korenblum", "flat"}, {"example7", "example7"}, {"verify", "alpha_power"}};
    const fs::path root = fs::temp_directory_path() / "hslab_acceptance";
    long compared = 0, differing = 0;
    for (const Run& run : runs) {
      RunConfig c;
      c.weight.family = run.family;
      c.weight.scale = 2.0;
      c.n = 129;
      c.t = {0.1, 0.3};
      c.seed = 11;
      std::vector<fs::path> dirs;
      for (const char* rep : {"a", "b"}) {
        dirs.push_back(root / (std::string(run.command) + "_" + rep));
        fs::remove_all(dirs.back());
        c.out = dirs.back().string();
        std::ostringstream log;
        run_command(run.command, c, log);
      }
      for (const auto& e : fs::directory_iterator(dirs[0])) {
        const std::string ext = e.path().extension().string();
        if (ext != ".json" && ext != ".csv") continue;
        ++compared;
        if (slurp(e.path()) != slurp(dirs[1] / e.path().filename())) ++differing;
      }
    }
    o.ge("artifacts compared", compared, 7.0);
    o.le("differing artifacts", differing, 0.0);
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
