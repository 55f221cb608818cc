#include "hslab/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "hslab/expmap.hpp"
#include "hslab/flow.hpp"
#include "hslab/geodesics.hpp"
#include "hslab/kernel_checks.hpp"
#include "hslab/korenblum.hpp"
#include "hslab/svg.hpp"

namespace hslab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string real17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

  void text(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << body;
    written.push_back(p.string());
  }
  void json_file(const std::string& name, const json& j) { text(name, dump(j)); }
  void svg(const std::string& name, const SvgFigure& fig) { text(name, fig.str()); }

  std::vector<std::string> written;

 private:
  fs::path dir_;
};

bool wants(const RunConfig& cfg, const std::string& check) {
  for (const auto& c : cfg.checks)
    if (c == "all" || c == check) return true;
  return false;
}

std::string base_name(const std::string& check) { return check.substr(0, check.find('@')); }

// Keeps the requested rows; a requested name matching nothing is an error.
void select(VerificationReport& rep, const RunConfig& cfg, const std::string& command) {
  if (wants(cfg, "all")) return;
  std::set<std::string> want(cfg.checks.begin(), cfg.checks.end()), seen;
  std::vector<CheckRow> kept;
  for (auto& row : rep.rows) {
    const std::string b = base_name(row.check);
    if (want.count(b)) {
      seen.insert(b);
      kept.push_back(row);
    }
  }
  for (const auto& w : want)
    if (!seen.count(w)) throw Error("unknown check '" + w + "' for " + command);
  rep.rows = std::move(kept);
}

void tag_rows(VerificationReport& rep, const std::string& tag, VerificationReport& into) {
  for (auto& row : rep.rows) {
    row.check += tag;
    into.rows.push_back(row);
  }
}

// Hypothesis rows are shared between reports on the same weight; keep the first copy.
void append_unique(VerificationReport& into, const VerificationReport& from) {
  for (const auto& row : from.rows) {
    bool dup = false;
    for (const auto& r : into.rows) dup = dup || r.check == row.check;
    if (!dup) into.rows.push_back(row);
  }
}

json envelope(const std::string& command, const RunConfig& cfg, const WeightSpec* w) {
  json j;
  j["command"] = command;
  j["config"] = cfg.to_json();
  if (w) j["weight"] = w->id();
  return j;
}

// ---------------------------------------------------------------- kernels

void cmd_kernels(const RunConfig& cfg, Output& out, VerificationReport& rep) {
  KernelSuiteOptions o;
  o.positivity_pairs = cfg.samples;
  o.seed = cfg.seed;
  o.identity_rel = cfg.tol("kernel_identity_rel");
  o.origin_abs = cfg.tol("kernel_origin_abs");
  o.representation_abs = cfg.tol("representation_abs");
  rep = kernel_suite(cfg.checks, o);
  json j = envelope("kernels", cfg, nullptr);
  j["checks"] = to_json(rep);
  out.json_file("kernels.json", j);
}

// ---------------------------------------------------------------- flow

void cmd_flow(const RunConfig& cfg, Output& out, VerificationReport& rep) {
  const WeightSpec w = cfg.weight.make();
  const std::vector<double> ts = cfg.t.empty() ? std::vector<double>{0.25} : cfg.t;
  FlowSolver solver(w, cfg.n);
  const std::vector<FlowSnapshot> snaps = run_flow(solver, ts);
  const double h = solver.h();
  const int n = cfg.n;
  const auto* flat = std::get_if<WeightSpec::Flat>(&w.family());
  rep.subject = "flow " + w.id();

  SvgFigure fig;
  fig.axes();
  json files = json::array();
  for (size_t k = 0; k < snaps.size(); ++k) {
    const FlowSnapshot& s = snaps[k];
    const std::string tag = "@t=" + num(s.t);
    VerificationReport v = verify_snapshot(s, cfg.tol("turning_deg"));
    tag_rows(v, tag, rep);

    double mv = 0.0;
    for (double r : mean_value_residuals(s, w, 6)) mv = std::max(mv, r);
    rep.add("mean_value" + tag, mv, cfg.tol("mean_value_factor") * h * s.t, n, h).note =
        "harmonic monomials up to degree 6";
    rep.add("area" + tag, std::abs(s.area_omega - s.t), cfg.tol("area_factor") * h * s.t, n, h);
    if (flat) {
      const double radius = std::sqrt(s.t / flat->c);
      rep.add("hausdorff" + tag, hausdorff_to_circle(s.boundary, radius), cfg.tol("hausdorff_factor") * h, n, h);
      fig.circle(0.0, radius, "#999999", 0.8, true);
    }
    if (k > 0)
      rep.add("nested" + tag, static_cast<double>(inclusion_violations(snaps[k - 1], s)), 0.0, n, h).note =
          "members of the previous snapshot outside this one";

    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%02zu.json", k);
    json js = to_json(s);
    js["weight"] = w.id();
    out.json_file(name, js);
    files.push_back(name);
    fig.polyline(s.boundary, kColors[k % 7], 1.5, true);
  }

  json j = envelope("flow", cfg, &w);
  j["snapshots"] = files;
  if (cfg.termination) {
    const TerminationEstimate T = termination_time(solver);
    j["termination"] = {{"value", T.value},     {"infinite", T.infinite},       {"t_margin_2h", T.t_margin_2h},
                        {"t_margin_4h", T.t_margin_4h}, {"coarse_value", T.coarse_value},
                        {"evaluations", T.evaluations}, {"note", T.note}};
    if (flat) {
      rep.add("termination", T.infinite ? kInf : std::abs(T.value - flat->c), cfg.tol("termination_abs"), n, h).note =
          "T = " + num(T.value) + " against the total mass " + num(flat->c);
    } else if (std::holds_alternative<WeightSpec::PoincareScaled>(w.family())) {
      rep.add("termination_infinite", T.infinite ? 0.0 : 1.0, 0.0, n, h).note = T.note;
    } else {
      CheckRow row;
      row.check = "termination";
      row.residual = T.infinite ? kInf : T.value;
      row.tolerance = NAN;
      row.n = n;
      row.h = h;
      row.note = "no reference value for this weight";
      rep.rows.push_back(row);
    }
  }
  select(rep, cfg, "flow");
  j["checks"] = to_json(rep);
  out.json_file("report.json", j);
  out.svg("flow.svg", fig);
}

// ---------------------------------------------------------------- expmap

void cmd_expmap(const RunConfig& cfg, Output& out, VerificationReport& rep) {
  const WeightSpec w = cfg.weight.make();
  ChartBuilder builder(w, cfg.z0, cfg.n);
  const ExpMapChart chart = builder.build(cfg.r_max, cfg.n_r, cfg.n_theta);
  rep = chart_checks(chart, w);
  json refinement;
  if (wants(cfg, "refinement")) {
    const ChartRefinement ref = chart_refinement(builder, cfg.r_max, cfg.n_r, cfg.n_theta);
    rep.add("refinement", ref.ratio, cfg.tol("refinement_factor"), cfg.n, chart.h, true).note =
        "ring doubling errors " + num(ref.e1) + ", " + num(ref.e2);
    refinement = {{"e1", ref.e1}, {"e2", ref.e2}, {"ratio", ref.ratio}};
  }
  select(rep, cfg, "expmap");

  json j = to_json(chart, rep);
  const json env = envelope("expmap", cfg, &w);
  for (const auto& [k, v] : env.items()) j[k] = v;
  if (!refinement.is_null()) j["refinement"] = refinement;
  out.json_file("chart.json", j);

  SvgFigure fig;
  fig.axes();
  for (size_t i = 0; i < chart.points.size(); ++i) fig.polyline(chart.points[i], kColors[0], 1.2, true);
  for (size_t a = 0; a < chart.angles.size(); ++a) {
    std::vector<Complex> ray{chart.z0};
    for (const auto& ring : chart.points) ray.push_back(ring[a]);
    fig.polyline(ray, kColors[1], 0.8);
  }
  fig.dot(chart.z0, 3.0, "#000000");
  out.svg("chart.svg", fig);
}

// ---------------------------------------------------------------- geodesic

std::string path_csv(const GeodesicPath& p) {
  std::string s = "t,x,y,speed\n";
  for (size_t k = 0; k < p.nodes.size(); ++k) {
    const auto& q = p.nodes[k];
    s += real17(static_cast<double>(k) * p.step) + "," + real17(q.z.real()) + "," + real17(q.z.imag()) + "," +
         real17(q.speed) + "\n";
  }
  return s;
}

void cmd_geodesic(const RunConfig& cfg, Output& out, VerificationReport& rep) {
  const WeightSpec w = cfg.weight.make();
  const Complex dir = std::polar(1.0, cfg.direction_deg * kPi / 180.0);
  const GeodesicPath path = shoot(w, cfg.start, dir, cfg.length, cfg.step);
  rep.subject = "geodesic " + w.id();
  rep.add("speed_drift", speed_drift(path), cfg.tol("speed_drift")).note = "step " + num(cfg.step);

  // Shoot back from the end point; the equation is invariant under t -> -lambda t.
  const GeodesicNode& last = path.nodes.back();
  const double sp = std::abs(last.v);
  const double run = static_cast<double>(path.nodes.size() - 1) * cfg.step;
  const GeodesicPath back = shoot(w, last.z, -last.v / sp, run * sp, cfg.step * sp);
  rep.add("reversibility", std::abs(back.nodes.back().z - cfg.start),
          cfg.tol("reversibility_factor") * cfg.step * cfg.step)
      .note = path.truncated ? "path truncated near the circle" : "";
  select(rep, cfg, "geodesic");

  out.text("path.csv", path_csv(path));
  json j = envelope("geodesic", cfg, &w);
  j["truncated"] = path.truncated;
  j["nodes"] = path.nodes.size();
  j["end"] = {last.z.real(), last.z.imag()};
  j["checks"] = to_json(rep);
  out.json_file("geodesic.json", j);

  SvgFigure fig;
  fig.axes();
  std::vector<Complex> pts;
  for (const auto& q : path.nodes) pts.push_back(q.z);
  fig.polyline(pts, kColors[0], 1.5);
  fig.dot(cfg.start, 3.0, "#000000");
  out.svg("geodesic.svg", fig);
}

// ---------------------------------------------------------------- korenblum

void cmd_korenblum(const RunConfig& cfg, Output& out, VerificationReport& rep) {
  namespace kb = korenblum;
  const WeightSpec w = cfg.weight.make();
  rep.subject = "korenblum";

  // F on the r-grid
  std::string csv = "r,F,log_ratio\n";
  double f_min = kInf;
  SvgFigure fig(600, 1.05);
  std::vector<Complex> curve;
  for (int k = 1; k <= cfg.r_points; ++k) {
    const double r = 0.999 * k / cfg.r_points;
    const double f = kb::big_f(r);
    const double lr = kb::log_ratio(r);
    f_min = std::min(f_min, f);
    csv += real17(r) + "," + real17(f) + "," + real17(lr) + "\n";
    curve.emplace_back(r, lr);
  }
  out.text("korenblum_F.csv", csv);
  rep.add("f_at_least_one", f_min, 1.0, 0, 0.0, true);
  rep.add("f_zero", std::abs(kb::big_f_area(1e-7) - std::exp(1.0)), cfg.tol("korenblum_f0")).note = "F(1e-7) against e";

  double agree = 0.0;
  for (int k = 0; k <= 48; ++k) {
    const double r = 0.5 + 0.49 * (k + 0.5) / 49.0;
    agree = std::max(agree, std::abs(kb::big_f_polar(r) - kb::big_f_area(r)));
  }
  rep.add("polar_vs_area", agree, cfg.tol("korenblum_agreement")).note = "49 radii in (0.5, 0.99)";

  double excess = -kInf;
  for (int k = 0; k <= 20; ++k) {
    const double r = 0.99 + 0.009 * k / 20.0;
    excess = std::max(excess, kb::log_ratio(r) - kb::kFExponent);
  }
  rep.add("log_ratio", excess, cfg.tol("korenblum_eps")).note = "max of log F / log(1/(1-r)) - 4/pi on [0.99, 0.999]";

  json thresholds = json::array();
  for (double a : {0.5, 1.0, 1.5}) {
    const double b = kb::divergence_threshold_bisect(a), c = kb::divergence_threshold(a);
    rep.add("threshold@alpha=" + num(a), std::abs(b - c), cfg.tol("korenblum_threshold"));
    thresholds.push_back({{"alpha", a}, {"bisection", b}, {"closed_form", c}});
  }

  DiskSampler rng(cfg.seed);
  double pk = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Complex z = rng.point(0.9);
    pk = std::max(pk, std::abs(kb::pk_integral(z) - kb::pk_closed(z)));
  }
  rep.add("pk_identity", pk, cfg.tol("korenblum_pk")).note = "100 seeded points with |z| < 0.9";
  const double b1 = kb::balayage_integral(WeightSpec::flat(1.0));
  const double b2 = kb::balayage_integral(WeightSpec::alpha_power(0.5, 2.0));
  rep.add("balayage@flat", b1 - 1.0, cfg.tol("balayage"));
  rep.add("balayage@two_minus", b2 - 1.0, cfg.tol("balayage")).note = "nu = 2(1-|z|^2)";

  json table = json::array();
  for (double a : {0.0, 0.5, 1.0, 1.5})
    for (int i = 1; i <= 9; ++i) {
      const kb::Constant c = kb::c_p_alpha(0.1 * i, a);
      table.push_back({{"p", c.p}, {"alpha", c.alpha}, {"value", c.divergent ? json(nullptr) : json(c.value)},
                       {"divergent", c.divergent}, {"endpoint_exponent", c.endpoint_exponent}});
    }
  const kb::Constant req = kb::c_p_alpha(cfg.p, cfg.alpha);
  const kb::RadialLength len = kb::radial_p_length(w, cfg.p);

  json j = envelope("korenblum", cfg, &w);
  j["c_table"] = table;
  j["requested"] = {{"p", req.p}, {"alpha", req.alpha}, {"value", req.divergent ? json(nullptr) : json(req.value)},
                    {"divergent", req.divergent}};
  j["radial_p_length"] = {{"p", cfg.p}, {"value", len.divergent ? json(nullptr) : json(len.value)},
                          {"divergent", len.divergent}};
  j["thresholds"] = thresholds;
  j["balayage"] = {{"flat", b1}, {"two_minus", b2}};

  if (!cfg.t.empty()) {
    FlowSolver solver(w, cfg.n);
    for (const FlowSnapshot& s : run_flow(solver, cfg.t)) {
      VerificationReport c = kb::containment_check(s, w, cfg.alpha);
      tag_rows(c, "@t=" + num(s.t), rep);
    }
  }
  select(rep, cfg, "korenblum");
  j["checks"] = to_json(rep);
  out.json_file("korenblum.json", j);

  // log-ratio against r with the 4/pi level
  SvgFigure plot(600, 1.6);
  plot.axes();
  plot.polyline(curve, kColors[0], 1.5);
  plot.polyline({{0.0, kb::kFExponent}, {1.0, kb::kFExponent}}, "#999999", 0.8);
  plot.label({0.02, kb::kFExponent + 0.05}, "4/pi");
  out.svg("korenblum.svg", plot);
}

// ---------------------------------------------------------------- example7

void cmd_example7(const RunConfig& cfg, Output& out, VerificationReport& rep, std::ostream& log) {
  const double c = std::isnan(cfg.weight.c) ? 0.01 : cfg.weight.c;
  const double alpha = cfg.weight.alpha;
  const WeightSpec w = WeightSpec::example7(c, alpha);
  rep.subject = w.id();
  const std::vector<double> roots = geodesic_circle_radii(w);
  const bool reference = c == 0.01 && alpha == 1.0;
  if (reference) {
    rep.add("root_count", std::abs(static_cast<double>(roots.size()) - 2.0), 0.0);
    const double windows[2][2] = {{0.35, 0.45}, {0.5, 0.7}};
    for (size_t k = 0; k < roots.size() && k < 2; ++k) {
      const double s = roots[k];
      const double outside = std::max({0.0, windows[k][0] - s, s - windows[k][1]});
      rep.add("root_window@" + std::to_string(k + 1), outside, 0.0).note =
          "(" + num(windows[k][0]) + ", " + num(windows[k][1]) + ")";
    }
  } else {
    rep.add("root_count", static_cast<double>(roots.size()), 1.0, 0, 0.0, true);
  }

  SvgFigure fig;
  fig.axes();
  json jr = json::array();
  for (size_t k = 0; k < roots.size(); ++k) {
    const double rho = std::sqrt(roots[k]);
    const std::string tag = "@" + std::to_string(k + 1);
    const double res = circle_residual(w, rho), off = circle_residual(w, 0.9 * rho);
    const double fd = geodesic_residual(w, circle_path(w, rho, cfg.step));
    rep.add("circle_residual" + tag, res, cfg.tol("circle_residual"));
    rep.add("off_root_residual" + tag, off, 1e-2, 0, 0.0, true).note = "at 0.9 times the radius";
    rep.add("circle_fd_residual" + tag, fd, cfg.tol("circle_fd_residual"));
    jr.push_back({{"s", roots[k]}, {"radius", rho}, {"circle_residual", res}, {"off_root_residual", off}});
    fig.circle(0.0, rho, "#999999", 0.8, true);
    char line[160];
    std::snprintf(line, sizeof line, "root %zu: s = %.12f  radius = %.12f  circle residual = %.3e\n", k + 1,
                  roots[k], rho, res);
    log << line;
  }

  json shot;
  if (!roots.empty()) {
    const double rho = std::sqrt(roots.back());
    // The larger circle has minimal circumference, so nearby geodesics peel off exponentially;
    // the step is capped so that RK4 truncation stays below the rounding floor.
    const double step = std::min(cfg.step, 2.5e-4);
    const GeodesicPath p = shoot(w, DiskPoint(rho, 0.0), Complex(0.0, 1.0), 2.0 * kPi * rho, step);
    const double dev = circle_deviation(p, rho);
    rep.add("tangential_shot", dev, cfg.tol("circle_shot")).note = "one loop from the larger root, step " + num(step);
    shot = {{"radius", rho}, {"deviation", dev}, {"truncated", p.truncated}, {"step", step}};
    out.text("shot.csv", path_csv(p));
    std::vector<Complex> pts;
    for (const auto& q : p.nodes) pts.push_back(q.z);
    fig.polyline(pts, kColors[1], 1.2);
  }
  const CurvatureReport cr = curvature_report(w, alpha);
  rep.add("hyperbolicity_margin", cr.worst_margin, 0.0, cr.m, 0.0, true).note =
      "min of Delta log[omega/(1-|z|^2)^(2 alpha)] on the test grid";
  select(rep, cfg, "example7");

  json j = envelope("example7", cfg, &w);
  j["roots"] = jr;
  j["shot"] = shot;
  j["checks"] = to_json(rep);
  out.json_file("example7.json", j);
  out.svg("example7.svg", fig);
}

// ---------------------------------------------------------------- verify

void cmd_verify(const RunConfig& cfg, Output& out, VerificationReport& rep) {
  const WeightSpec w = cfg.weight.make();
  rep.subject = "verify " + w.id();
  const CurvatureReport cr = curvature_report(w, cfg.alpha);
  rep.add("curvature_condition", cr.worst_margin, -1e-8, cr.m, 0.0, true).note =
      "K + " + num(cfg.alpha) + " K_H <= 0 on the test grid";
  append_unique(rep, w_estimate_check(w, cfg.n));
  for (TestFunction u : subharmonic_test_functions()) append_unique(rep, reproducing_inequality(w, u, cfg.n));
  append_unique(rep, boundary_density_check(w));
  json j = envelope("verify", cfg, &w);
  if (!cfg.t.empty()) {
    FlowSolver solver(w, cfg.n);
    for (const FlowSnapshot& s : run_flow(solver, cfg.t)) {
      VerificationReport v = verify_snapshot(s, cfg.tol("turning_deg"));
      tag_rows(v, "@t=" + num(s.t), rep);
    }
  }
  select(rep, cfg, "verify");
  j["checks"] = to_json(rep);
  out.json_file("verify.json", j);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"kernels", "flow",     "expmap", "geodesic",
                                                 "korenblum", "example7", "verify"};
  return names;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  Output out(cfg.out);
  CommandResult r;
  if (name == "kernels") cmd_kernels(cfg, out, r.report);
  else if (name == "flow") cmd_flow(cfg, out, r.report);
  else if (name == "expmap") cmd_expmap(cfg, out, r.report);
  else if (name == "geodesic") cmd_geodesic(cfg, out, r.report);
  else if (name == "korenblum") cmd_korenblum(cfg, out, r.report);
  else if (name == "example7") cmd_example7(cfg, out, r.report, log);
  else if (name == "verify") cmd_verify(cfg, out, r.report);
  else throw Error("unknown command '" + name + "'");

  log << render_table(r.report);
  for (const auto& row : r.report.rows)
    if (row.pass.has_value() && !*row.pass) r.exit_code = 1;
  r.artifacts = out.written;
  return r;
}

}  // namespace hslab
