#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hslab/surface.hpp"

namespace hslab {

struct WeightConfig {
  std::string family = "flat";  // flat, poincare, alpha_power, example7, table
  double c = NAN;               // NaN picks the family default
  double alpha = 0.5;
  double scale = 1.0;
  std::string table;            // CSV path for the table family

  WeightSpec make() const;
};

std::map<std::string, double> default_tolerances();

struct RunConfig {
  WeightConfig weight;
  int n = 513;
  std::vector<double> t;
  double alpha = 0.5;  // alpha of the curvature condition K + alpha K_H <= 0
  std::vector<std::string> checks = {"all"};
  std::string out = "runs/default";
  std::uint64_t seed = 7;
  int samples = 100000;

  bool termination = false;  // [flow]

  Complex z0 = 0.0;  // [expmap]
  double r_max = 0.8;
  int n_r = 4;
  int n_theta = 32;

  Complex start = 0.0;  // [geodesic]
  double direction_deg = 0.0;
  double length = 1.0;
  double step = 1e-3;

  double p = 0.5;  // [korenblum]
  int r_points = 50;

  std::map<std::string, double> tolerances = default_tolerances();

  double tol(const std::string& key) const;
  nlohmann::json to_json() const;
};

// INI-style document: top-level keys, [flow], [expmap], [geodesic], [korenblum] and [tolerances].
// Strings may be quoted; lists are written [a, b, c]. Unknown keys and bad values raise ParseError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Validation shared with the command line.
void validate(const RunConfig& c);

// Key reference with defaults, for --help.
std::string config_reference();

// Comma or bracket separated list of reals.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace hslab
