#pragma once

#include <functional>
#include <vector>

#include "hslab/grid.hpp"

namespace hslab {

using Polyline = std::vector<Complex>;

// Detachment geometry on the grid: members are nodes with gap > eps.
struct DomainGeometry {
  int n = 0;
  double h = 0.0;
  double eps = 0.0;
  std::vector<uint8_t> member;  // per grid node
  std::vector<double> gap;      // per grid node; +inf at the origin, NaN off the mask

  Complex node(size_t idx) const {
    return {-1.0 + static_cast<double>(idx % n) * h, -1.0 + static_cast<double>(idx / n) * h};
  }
  // Crossing point on the grid edge from member node a to its non-member neighbor b.
  Complex crossing(size_t a, size_t b) const;
};

// Closed boundary loops by marching squares; members lie to the left (outer loops counter-clockwise).
std::vector<Polyline> boundary_loops(const DomainGeometry& g);

// Integral of f over the member region against dSigma = dx dy / pi, clipping partial cells at the crossings.
double integrate_domain(const DomainGeometry& g, const std::function<double(Complex)>& f);

double signed_area(const Polyline& p);

// Hausdorff distance between a closed polyline and the circle |z - c| = r.
double hausdorff_to_circle(const Polyline& p, double r, Complex c = 0.0);

// Nearest point on a closed polyline; segment k joins vertices k and k+1.
Complex nearest_point(const Polyline& p, Complex q, double* distance = nullptr, size_t* segment = nullptr);

}  // namespace hslab
