#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hslab/report.hpp"

namespace hslab {

// Deterministic point sampler (SplitMix64), uniform in the disk of the given radius.
class DiskSampler {
 public:
  explicit DiskSampler(std::uint64_t seed) : state_(seed) {}
  double uniform();  // [0, 1)
  Complex point(double radius = 1.0);

 private:
  std::uint64_t state_;
};

struct KernelSuiteOptions {
  int positivity_pairs = 100000;
  int identity_points = 1000;
  int representation_points = 100;
  std::uint64_t seed = 7;
  double fd_step = 1e-3;
  double identity_rel = 1e-4;
  double origin_abs = 1e-12;
  double representation_abs = 1e-6;
};

// Names accepted by kernel_suite.
const std::vector<std::string>& kernel_check_names();

// Runs the listed checks ("all" selects every one).
VerificationReport kernel_suite(const std::vector<std::string>& checks, const KernelSuiteOptions& o = {});

// Four-neighbor Laplacian (a quarter of the Euclidean one) of gamma1 in z.
double fd_laplacian_gamma1(Complex z, Complex zeta, double step);

}  // namespace hslab
