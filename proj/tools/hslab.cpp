// hslab: Hele-Shaw flows, kernels and charts on weighted disks.
#include <CLI11.hpp>
#include <iostream>

#include "hslab/commands.hpp"

namespace {

using hslab::RunConfig;

// Flag values; a flag overrides the config file only when it was given.
struct Flags {
  std::string config, weight, table, t, out, z0, start;
  double c = 0, alpha = 0, scale = 0, condition_alpha = 0, r_max = 0, direction_deg = 0, length = 0, step = 0, p = 0;
  int n = 0, samples = 0, n_r = 0, n_theta = 0, r_points = 0;
  std::uint64_t seed = 0;
  bool termination = false;
  std::vector<std::string> checks, tols;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Config file")->check(CLI::ExistingFile);
  sub->add_option("--weight", f.weight, "Weight family");
  sub->add_option("--c", f.c, "Weight constant c");
  sub->add_option("--alpha", f.alpha, "Weight exponent alpha");
  sub->add_option("--scale", f.scale, "alpha_power scale");
  sub->add_option("--table", f.table, "CSV samples for the table weight");
  sub->add_option("--n", f.n, "Grid nodes per side");
  sub->add_option("--t", f.t, "Flow times, comma separated");
  sub->add_option("--condition-alpha", f.condition_alpha, "alpha of the curvature condition");
  sub->add_option("--check", f.checks, "Checks to run (all by default)")->delimiter(',');
  sub->add_option("--out", f.out, "Output directory");
  sub->add_option("--seed", f.seed, "Sampling seed");
  sub->add_option("--samples", f.samples, "Sample pairs for the positivity checks");
  sub->add_flag("--termination", f.termination, "Estimate the termination time");
  sub->add_option("--z0", f.z0, "Chart basepoint x,y");
  sub->add_option("--r-max", f.r_max, "Outer chart radius");
  sub->add_option("--n-r", f.n_r, "Chart rings");
  sub->add_option("--n-theta", f.n_theta, "Chart rays");
  sub->add_option("--start", f.start, "Geodesic start x,y");
  sub->add_option("--direction-deg", f.direction_deg, "Geodesic direction in degrees");
  sub->add_option("--length", f.length, "Geodesic parameter length");
  sub->add_option("--step", f.step, "Integration step");
  sub->add_option("--p", f.p, "Exponent p of the radial length");
  sub->add_option("--r-points", f.r_points, "Points of the F grid");
  sub->add_option("--tol", f.tols, "Tolerance override key=value")->delimiter(',');
}

hslab::Complex point(const std::string& s) {
  const auto xs = hslab::parse_real_list(s);
  if (xs.size() != 2) throw hslab::ParseError("expected x,y but got '" + s + "'", 0);
  return {xs[0], xs[1]};
}

RunConfig resolve(CLI::App* sub, const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : hslab::load_config(f.config);
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--weight")) c.weight.family = f.weight;
  if (given("--c")) c.weight.c = f.c;
  if (given("--alpha")) c.weight.alpha = f.alpha;
  if (given("--scale")) c.weight.scale = f.scale;
  if (given("--table")) c.weight.table = f.table;
  if (given("--n")) c.n = f.n;
  if (given("--t")) c.t = hslab::parse_real_list(f.t);
  if (given("--condition-alpha")) c.alpha = f.condition_alpha;
  if (given("--check")) c.checks = f.checks;
  if (given("--out")) c.out = f.out;
  if (given("--seed")) c.seed = f.seed;
  if (given("--samples")) c.samples = f.samples;
  if (given("--termination")) c.termination = f.termination;
  if (given("--z0")) c.z0 = point(f.z0);
  if (given("--r-max")) c.r_max = f.r_max;
  if (given("--n-r")) c.n_r = f.n_r;
  if (given("--n-theta")) c.n_theta = f.n_theta;
  if (given("--start")) c.start = point(f.start);
  if (given("--direction-deg")) c.direction_deg = f.direction_deg;
  if (given("--length")) c.length = f.length;
  if (given("--step")) c.step = f.step;
  if (given("--p")) c.p = f.p;
  if (given("--r-points")) c.r_points = f.r_points;
  for (const auto& kv : f.tols) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw hslab::ParseError("tolerance override needs key=value: '" + kv + "'", 0);
    const std::string key = kv.substr(0, eq);
    if (!c.tolerances.count(key)) throw hslab::ParseError("unknown tolerance '" + key + "'", 0);
    c.tolerances[key] = std::stod(kv.substr(eq + 1));
  }
  hslab::validate(c);
  c.weight.make();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hele-Shaw flows, kernels and charts on weighted disks"};
  app.footer(hslab::config_reference() + "\nHS_LAB_THREADS caps the worker count.");
  app.require_subcommand(1);
  Flags flags;
  const std::map<std::string, std::string> about = {
      {"kernels", "Property suite of the biharmonic Green function and its compensator"},
      {"flow", "Hele-Shaw domains D(t) for a weight, with verification"},
      {"expmap", "Chart of flow boundaries and orthogonal trajectories"},
      {"geodesic", "Shoot a geodesic of the weight"},
      {"korenblum", "F(r), the constants c_{p,alpha} and the containment check"},
      {"example7", "Geodesic circles of c/(1-|z|^2)^2 + (1-|z|^2)^(2 alpha)"},
      {"verify", "Weight hypotheses and the W-estimate"}};
  std::vector<CLI::App*> subs;
  for (const auto& name : hslab::command_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    add_flags(sub, flags);
    subs.push_back(sub);
  }
  CLI11_PARSE(app, argc, argv);

  for (CLI::App* sub : subs) {
    if (!sub->parsed()) continue;
    try {
      const RunConfig cfg = resolve(sub, flags);
      return hslab::run_command(sub->get_name(), cfg, std::cout).exit_code;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}
