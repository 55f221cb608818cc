#pragma once

#include <string>
#include <vector>

#include "hslab/surface.hpp"

namespace hslab {

struct GeodesicNode {
  Complex z;
  Complex v;     // dz/dt
  double speed;  // omega(z) |v|^2
};

struct GeodesicPath {
  std::vector<GeodesicNode> nodes;
  double step = 0.0;
  std::string weight_id;
  bool truncated = false;  // stopped before the requested length near the circle
};

// Classic RK4 for z'' + (omega_z / omega)(z) (z')^2 = 0 from start with unit Euclidean velocity dir.
GeodesicPath shoot(const WeightSpec& w, DiskPoint start, Complex dir, double length, double step = 1e-3);

// Max over interior nodes of |z'' + (omega_z/omega) (z')^2| with z'' by central differences.
double geodesic_residual(const WeightSpec& w, const GeodesicPath& path);

// The circle rho e^{it} sampled with exact velocities.
GeodesicPath circle_path(const WeightSpec& w, double rho, double step = 1e-3);

// Geodesic residual of rho e^{it} in closed form: rho |1 + s omega0'(s)/omega0(s)|, s = rho^2.
double circle_residual(const WeightSpec& w, double rho);

// Largest relative change of omega |z'|^2 along the path, per unit parameter.
double speed_drift(const GeodesicPath& path);

// Largest | |z| - rho | along the path.
double circle_deviation(const GeodesicPath& path, double rho);

// Metric length of [0, r] for a radial weight; this is the distance from the origin.
double radial_distance(const WeightSpec& w, double r);

// Inverse of radial_distance; 1 when d reaches the length of the whole radius.
double radius_at_distance(const WeightSpec& w, double d);

}  // namespace hslab
