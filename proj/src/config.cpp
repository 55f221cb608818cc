#include "hslab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace hslab {

WeightSpec WeightConfig::make() const {
  auto pick = [&](double fallback) { return std::isnan(c) ? fallback : c; };
  if (family == "flat") return WeightSpec::flat(pick(1.0));
  if (family == "poincare") return WeightSpec::poincare_scaled(pick(4.0));
  if (family == "alpha_power") return WeightSpec::alpha_power(alpha, scale);
  if (family == "example7") return WeightSpec::example7(pick(0.01), alpha);
  if (family == "table") {
    if (table.empty()) throw InvalidWeight("table weight needs a CSV path");
    return WeightSpec::table(WeightTable::load_csv(table));
  }
  throw InvalidWeight("unknown weight family '" + family + "'");
}

std::map<std::string, double> default_tolerances() {
  return {
      {"area_factor", 5.0},           // |area_omega - t| <= area_factor h t
      {"mean_value_factor", 5.0},     // mean-value residuals <= factor h t
      {"hausdorff_factor", 2.0},      // flat boundaries within factor h of the circle
      {"turning_deg", 150.0},
      {"w_bound_factor", 10.0},       // W - bound <= factor h^2
      {"kernel_identity_rel", 1e-4},
      {"kernel_origin_abs", 1e-12},
      {"representation_abs", 1e-6},
      {"orthogonality_deg", 1.0},
      {"slope_rel", 0.05},
      {"circle_residual", 1e-8},
      {"circle_shot", 1e-3},
      {"korenblum_agreement", 1e-6},
      {"korenblum_eps", 0.05},
      {"containment_factor", 2.0},
      {"termination_abs", 1e-2},
      {"refinement_factor", 1.8},     // error ratio on ring or grid doubling, lower bound
      {"speed_drift", 1e-6},          // per unit parameter
      {"reversibility_factor", 10.0}, // forward-backward shot within factor step^2
      {"circle_fd_residual", 1e-6},
      {"korenblum_f0", 1e-4},
      {"korenblum_threshold", 1e-3},
      {"korenblum_pk", 1e-6},
      {"balayage", 1e-6},
  };
}

double RunConfig::tol(const std::string& key) const {
  auto it = tolerances.find(key);
  if (it == tolerances.end()) throw Error("unknown tolerance '" + key + "'");
  return it->second;
}

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Line of "key =" inside the given section (empty for top level); 0 when not found.
int line_of(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line, current;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const std::string s = trim(line);
    if (s.size() > 1 && s.front() == '[' && s.back() == ']' && s.find('=') == std::string::npos) {
      current = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq != std::string::npos && current == section && trim(s.substr(0, eq)) == key) return no;
  }
  return 0;
}

std::string unquote(const std::string& v) {
  const std::string s = trim(v);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

double to_real(const std::string& v) {
  const std::string s = unquote(v);
  size_t used = 0;
  double x = std::stod(s, &used);
  if (trim(s.substr(used)).size() != 0) throw std::invalid_argument("trailing characters");
  if (!std::isfinite(x)) throw std::invalid_argument("not finite");
  return x;
}

int to_int(const std::string& v) {
  const double x = to_real(v);
  if (x != std::floor(x) || std::abs(x) > 2e9) throw std::invalid_argument("not an integer");
  return static_cast<int>(x);
}

bool to_bool(const std::string& v) {
  const std::string s = unquote(v);
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("expected true or false");
}

std::vector<std::string> to_strings(const std::string& v) {
  std::string s = trim(v);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!trim(item).empty()) out.push_back(unquote(item));
  return out;
}

Complex to_point(const std::string& v) {
  const std::vector<double> xs = parse_real_list(v);
  if (xs.size() != 2) throw std::invalid_argument("expected [x, y]");
  return {xs[0], xs[1]};
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& s : to_strings(text)) out.push_back(to_real(s));
  return out;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ParseError(m, 0); };
  if (c.n < 17 || c.n % 2 == 0) fail("n must be odd and at least 17");
  for (size_t i = 0; i < c.t.size(); ++i) {
    if (!(c.t[i] > 0.0)) fail("t values must be positive");
    if (i > 0 && !(c.t[i] > c.t[i - 1])) fail("t values must be strictly increasing");
  }
  if (!(c.alpha >= 0.0)) fail("alpha of the curvature condition must be nonnegative");
  if (c.samples < 1) fail("samples must be positive");
  if (std::norm(c.z0) >= 1.0) fail("z0 must lie in the open disk");
  if (!(c.r_max > 0.0) || c.n_r < 2 || c.n_theta < 3) fail("expmap needs r_max > 0, n_r >= 2, n_theta >= 3");
  if (std::norm(c.start) >= 1.0) fail("geodesic start must lie in the open disk");
  if (!(c.length >= 0.0) || !(c.step > 0.0)) fail("geodesic length must be nonnegative and step positive");
  if (!(c.p > 0.0 && c.p < 1.0)) fail("p must lie in (0, 1)");
  if (c.r_points < 2) fail("r_points must be at least 2");
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.message(), static_cast<int>(e.line()));
  }
  RunConfig c;
  c.tolerances = default_tolerances();
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, std::map<std::string, Setter>> keys = {
      {"",
       {{"weight", [&](const std::string& v) { c.weight.family = unquote(v); }},
        {"c", [&](const std::string& v) { c.weight.c = to_real(v); }},
        {"alpha", [&](const std::string& v) { c.weight.alpha = to_real(v); }},
        {"scale", [&](const std::string& v) { c.weight.scale = to_real(v); }},
        {"table", [&](const std::string& v) { c.weight.table = unquote(v); }},
        {"n", [&](const std::string& v) { c.n = to_int(v); }},
        {"t", [&](const std::string& v) { c.t = parse_real_list(v); }},
        {"condition_alpha", [&](const std::string& v) { c.alpha = to_real(v); }},
        {"checks", [&](const std::string& v) { c.checks = to_strings(v); }},
        {"out", [&](const std::string& v) { c.out = unquote(v); }},
        {"seed", [&](const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int(v)); }},
        {"samples", [&](const std::string& v) { c.samples = to_int(v); }}}},
      {"flow", {{"termination", [&](const std::string& v) { c.termination = to_bool(v); }}}},
      {"expmap",
       {{"z0", [&](const std::string& v) { c.z0 = to_point(v); }},
        {"r_max", [&](const std::string& v) { c.r_max = to_real(v); }},
        {"n_r", [&](const std::string& v) { c.n_r = to_int(v); }},
        {"n_theta", [&](const std::string& v) { c.n_theta = to_int(v); }}}},
      {"geodesic",
       {{"start", [&](const std::string& v) { c.start = to_point(v); }},
        {"direction_deg", [&](const std::string& v) { c.direction_deg = to_real(v); }},
        {"length", [&](const std::string& v) { c.length = to_real(v); }},
        {"step", [&](const std::string& v) { c.step = to_real(v); }}}},
      {"korenblum",
       {{"p", [&](const std::string& v) { c.p = to_real(v); }},
        {"r_points", [&](const std::string& v) { c.r_points = to_int(v); }}}},
  };

  auto apply = [&](const std::string& section, const std::string& key, const std::string& value) {
    const int line = line_of(text, section, key);
    const std::string where = section.empty() ? key : section + "." + key;
    if (section == "tolerances") {
      auto it = c.tolerances.find(key);
      if (it == c.tolerances.end()) throw ParseError("unknown key '" + where + "'", line);
      try {
        it->second = to_real(value);
      } catch (const std::exception&) {
        throw ParseError("bad value for '" + where + "'", line);
      }
      if (!(it->second > 0.0)) throw ParseError("tolerance '" + where + "' must be positive", line);
      return;
    }
    auto sec = keys.find(section);
    if (sec == keys.end()) throw ParseError("unknown section '" + section + "'", line_of(text, "", section));
    auto it = sec->second.find(key);
    if (it == sec->second.end()) throw ParseError("unknown key '" + where + "'", line);
    try {
      it->second(value);
    } catch (const std::exception& e) {
      throw ParseError("bad value for '" + where + "': " + e.what(), line);
    }
  };

  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      apply("", name, node.data());
      continue;
    }
    for (const auto& [key, leaf] : node) apply(name, key, leaf.data());
  }
  try {
    validate(c);
  } catch (const ParseError& e) {
    // point at the offending line where one key is responsible
    std::string msg = e.what();
    int line = 0;
    if (msg.find("t values") != std::string::npos) line = line_of(text, "", "t");
    else if (msg.find("n must") != std::string::npos) line = line_of(text, "", "n");
    throw ParseError(msg, line);
  }
  try {
    c.weight.make();
  } catch (const Error& e) {
    throw ParseError(e.what(), line_of(text, "", "weight"));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config '" + path + "'", 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["weight"] = {{"family", weight.family}, {"alpha", weight.alpha}, {"scale", weight.scale}};
  j["weight"]["c"] = std::isnan(weight.c) ? nlohmann::json(nullptr) : nlohmann::json(weight.c);
  if (!weight.table.empty()) j["weight"]["table"] = weight.table;
  j["n"] = n;
  j["t"] = t;
  j["condition_alpha"] = alpha;
  j["checks"] = checks;
  j["seed"] = seed;
  j["samples"] = samples;
  j["flow"] = {{"termination", termination}};
  j["expmap"] = {{"z0", {z0.real(), z0.imag()}}, {"r_max", r_max}, {"n_r", n_r}, {"n_theta", n_theta}};
  j["geodesic"] = {{"start", {start.real(), start.imag()}},
                   {"direction_deg", direction_deg},
                   {"length", length},
                   {"step", step}};
  j["korenblum"] = {{"p", p}, {"r_points", r_points}};
  j["tolerances"] = tolerances;
  return j;
}

std::string config_reference() {
  const RunConfig d;
  std::ostringstream s;
  s << "Config file (INI style; strings may be quoted, lists as [a, b]):\n"
    << "  weight = flat            flat | poincare | alpha_power | example7 | table\n"
    << "  c, alpha, scale, table   weight parameters (c defaults: flat 1, poincare 4, example7 0.01;\n"
    << "                           alpha 0.5, scale 1)\n"
    << "  n = " << d.n << "                  grid nodes per side (odd)\n"
    << "  t = [0.25]               flow times, strictly increasing\n"
    << "  condition_alpha = " << d.alpha << "    alpha in K + alpha K_H <= 0\n"
    << "  checks = [all]           check names, or all\n"
    << "  out = " << d.out << "\n"
    << "  seed = " << d.seed << ", samples = " << d.samples << "\n"
    << "  [flow] termination = false\n"
    << "  [expmap] z0 = [0, 0], r_max = " << d.r_max << ", n_r = " << d.n_r << ", n_theta = " << d.n_theta << "\n"
    << "  [geodesic] start = [0, 0], direction_deg = 0, length = 1, step = 0.001\n"
    << "  [korenblum] p = " << d.p << ", r_points = " << d.r_points << "\n"
    << "  [tolerances]\n";
  for (const auto& [k, v] : default_tolerances()) s << "    " << k << " = " << v << "\n";
  return s.str();
}

}  // namespace hslab
