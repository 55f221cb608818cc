#pragma once

#include <map>
#include <memory>
#include <vector>

#include "hslab/obstacle.hpp"
#include "hslab/report.hpp"

namespace hslab {

struct ExpMapChart {
  Complex z0;
  int n = 0;
  double h = 0.0;
  std::string weight_id;
  double omega0 = 1.0;                 // pulled-back weight at the origin
  std::vector<double> radii;           // r_i, ring i is the boundary of D(z0, r_i^2)
  std::vector<double> angles;          // theta_j
  std::vector<std::vector<Complex>> points;  // Phi(r_i e^{i theta_j}) [ring][angle]
  std::vector<std::vector<Complex>> local;   // the same points in the pulled-back frame
  std::vector<double> local_angles;          // seed directions in the pulled-back frame
  std::vector<Polyline> boundaries;          // raw flow boundaries, pulled-back frame
  std::vector<Polyline> smoothed;            // low-pass boundaries used for stepping
  std::vector<std::vector<double>> orthogonality;  // degrees; NaN on the first and last ring
};

// Builds charts at one basepoint, caching flow boundaries by time.
class ChartBuilder {
 public:
  ChartBuilder(const WeightSpec& w, DiskPoint z0, int n, int smoothing_modes = 6, SolverOptions opts = {});

  // Rings with r <= seed_radius (at least the first one) are placed from the first-order asymptotics
  // omega(0)^{-1/2} r e^{i theta}; later rings follow the normals.
  ExpMapChart build(double r_max, int n_r, int n_theta, double angle_offset = 0.0, double seed_radius = 0.0);
  const WeightSpec& local_weight() const { return local_; }

 private:
  struct Ring {
    Polyline raw, smooth;
  };
  const Ring& ring(double r);

  WeightSpec w_, local_;
  Complex z0_;
  int n_;
  int modes_;
  std::unique_ptr<FlowSolver> solver_;
  std::map<double, Ring> cache_;
};

ExpMapChart build_chart(const WeightSpec& w, DiskPoint z0, double r_max, int n_r, int n_theta, int n);

VerificationReport chart_checks(const ExpMapChart& chart, const WeightSpec& w);

struct ChartRefinement {
  double e1 = 0.0;  // max |Phi_{n_r} - Phi_{2 n_r}| on the common rings
  double e2 = 0.0;  // max |Phi_{2 n_r} - Phi_{4 n_r}| on the same rings
  double ratio = 0.0;
};

// Charts with n_r, 2 n_r and 4 n_r rings, all seeded on the first ring of the coarsest one.
ChartRefinement chart_refinement(ChartBuilder& builder, double r_max, int n_r, int n_theta);

// Closed polyline resampled by arc length and low-passed to the Fourier modes |k| <= modes.
Polyline smooth_loop(const Polyline& p, int modes, int samples = 4096);

nlohmann::json to_json(const ExpMapChart& chart, const VerificationReport& checks);

}  // namespace hslab
