#pragma once

#include <string>
#include <vector>

#include "hslab/obstacle.hpp"
#include "hslab/report.hpp"

namespace hslab {

// Snapshots at strictly increasing times.
std::vector<FlowSnapshot> run_flow(const WeightSpec& w, const std::vector<double>& ts, int n);
std::vector<FlowSnapshot> run_flow(const FlowSolver& solver, const std::vector<double>& ts);

// Members of a that are not members of b (0 when D(a.t) is inside D(b.t)).
long inclusion_violations(const FlowSnapshot& a, const FlowSnapshot& b);

// |int_D h omega dSigma - t h(0)| for h = 1, Re z, Im z, ..., Re z^N, Im z^N, in that order.
std::vector<double> mean_value_residuals(const FlowSnapshot& s, const WeightSpec& w, int degree);

// Connectedness, absence of holes, single boundary loop and the turning-angle cusp proxy.
VerificationReport verify_snapshot(const FlowSnapshot& s, double max_turning_deg = 150.0);

// Largest change of direction (degrees) between consecutive edges of a closed polyline.
double max_turning_angle(const Polyline& p, double merge_tol);

struct Hypotheses {
  double subharmonic_margin = kInf;  // min of Delta q scaled by q/(1-|z|^2)^2, q = nu/(1-|z|^2)
  double reproducing_residual = 0.0; // max mean-value residual of nu over harmonic monomials
  bool subharmonic(double tol = 1e-8) const { return subharmonic_margin >= -tol; }
  bool reproducing(double tol = 1e-4) const { return reproducing_residual <= tol; }
};

// Delta(nu/(1-|z|^2)) on the interior nodes of an n-grid, and the reproducing residuals up to degree 6.
Hypotheses check_hypotheses(const WeightSpec& nu, int n, bool reproducing = true);

struct WEstimate {
  VerificationReport report;
  GridField excess;         // W - bound at the unknowns
  double max_excess = 0.0;  // max of W - bound
  double sup_deviation = 0.0;
};

// W = log|z|^2 - u_nu against the bound log|z|^2 + 3/2 - 2|z|^2 + |z|^4/2.
WEstimate w_estimate(const WeightSpec& nu, int n);
VerificationReport w_estimate_check(const WeightSpec& nu, int n);

enum class TestFunction { abs2, abs4, exp_re, inv_one_minus_half_z, re_z };

TestFunction test_function_from_id(const std::string& id);
std::string test_function_id(TestFunction u);
double eval_test_function(TestFunction u, Complex z);
const std::vector<TestFunction>& subharmonic_test_functions();

// int u 2(1-|z|^2) dSigma <= int u nu dSigma + tol.
VerificationReport reproducing_inequality(const WeightSpec& nu, TestFunction u, int n, double tol = 1e-8);

struct DensityScan {
  int angles = 0;
  int failures = 0;     // angles satisfying neither branch
  int zero_branch = 0;  // angles where nu vanishes and the inward derivative is positive
};

// nu(e^{i theta}) > 0, or nu = 0 with positive inward normal derivative, at equally spaced angles.
DensityScan boundary_density_scan(const WeightSpec& nu, int angles = 720);
VerificationReport boundary_density_check(const WeightSpec& nu, int angles = 720, int n = 129);

}  // namespace hslab
