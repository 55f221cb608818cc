#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hslab/contour.hpp"
#include "hslab/laplacian.hpp"
#include "hslab/surface.hpp"

namespace hslab {

struct SolverOptions {
  double sor_factor = 1.8;
  double update_tol = 1e-12;   // max update relative to the value scale
  long max_sweeps = 1000000;
  int max_active_iterations = 200;
  bool active_set = true;      // false: projected SOR from scratch
  int coarsest = 33;           // nested iteration stops coarsening below this n
};

struct MajorantResult {
  GridField value;
  GridField obstacle;
  long sweeps = 0;              // projected SOR sweeps on the finest grid
  int active_iterations = 0;    // active-set solves on the finest grid
  double residual = 0.0;        // last max update divided by the value scale
  double complementarity = 0.0; // max over nodes of |min(s - psi, -Delta_h s)|
  double scale = 1.0;
  std::vector<uint8_t> active;  // per unknown of the finest grid
};

// Smallest s >= obstacle with Delta_h s <= 0 and s = boundary_value on the circle.
// Origin or any node whose obstacle is -inf is unconstrained.
MajorantResult superharmonic_majorant(const GridField& obstacle, const SolverOptions& opts = {},
                                      double boundary_value = 0.0);

// V_t = t log|z|^2 - u_omega with Delta_h u_omega = omega, u_omega = 0 on the circle; -inf at the origin.
GridField build_vt(const WeightSpec& w, double t, int n);

struct FlowSnapshot {
  double t = 0.0;
  int n = 0;
  double h = 0.0;
  double eps_detach = 0.0;
  std::vector<uint8_t> membership;
  GridField detach_gap;
  std::vector<Polyline> loops;
  Polyline boundary;  // outer loop
  double area_omega = 0.0;
  long sweeps = 0;
  int active_iterations = 0;
  double residual = 0.0;
  double complementarity = 0.0;
  std::string weight_id;

  DomainGeometry geometry() const;
};

// Potentials and grid hierarchy for one weight, reused across t.
class FlowSolver {
 public:
  FlowSolver(const WeightSpec& w, int n, SolverOptions opts = {});

  const WeightSpec& weight() const { return w_; }
  int n() const { return n_; }
  double h() const { return grid_spacing(n_); }

  GridField potential(double t) const;
  MajorantResult majorant(double t, const std::vector<uint8_t>* warm_active = nullptr) const;
  FlowSnapshot snapshot(double t, const std::vector<uint8_t>* warm_active = nullptr,
                        std::vector<uint8_t>* active_out = nullptr) const;

 private:
  struct Level {
    std::unique_ptr<DiskLaplacian> lap;
    std::vector<double> u_omega;  // per unknown
    std::vector<double> log_abs2; // per unknown, -inf at the origin
  };
  std::vector<double> obstacle(const Level& lv, double t) const;

  WeightSpec w_;
  int n_;
  SolverOptions opts_;
  std::vector<Level> levels_;  // coarse to fine
};

FlowSnapshot extract_domain(const WeightSpec& w, double t, int n);

// Snapshot assembly from a majorant (used by FlowSolver and by tests on custom obstacles).
FlowSnapshot make_snapshot(const WeightSpec& w, double t, const MajorantResult& m);

struct TerminationOptions {
  double t_max = 1e3;
  double rel_width = 1e-3;
  bool refinement_test = true;
  double divergence_ratio = 1.5;
};

struct TerminationEstimate {
  double value = NAN;       // extrapolated T; with infinite set, the finite-grid exit time
  bool infinite = false;
  double t_margin_2h = NAN; // exit times for margins 2h and 4h
  double t_margin_4h = NAN;
  double coarse_value = NAN;
  int evaluations = 0;
  std::string note;
};

TerminationEstimate termination_time(const WeightSpec& w, int n, const TerminationOptions& opts = {});
TerminationEstimate termination_time(const FlowSolver& solver, const TerminationOptions& opts = {});

}  // namespace hslab
