#include "hslab/grid.hpp"

namespace hslab {

double grid_spacing(int n) {
  if (n < 3) throw DomainError("grid needs at least 3 nodes per side");
  return 2.0 / (n - 1);
}

GridField GridField::zeros(int n) {
  GridField g;
  g.n = n;
  g.h = grid_spacing(n);
  g.values.assign(static_cast<size_t>(n) * n, NAN);
  g.mask.assign(static_cast<size_t>(n) * n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = g.x(i), y = g.y(j);
      if (x * x + y * y <= 1.0 + kBoundaryEps) {
        g.mask[g.index(i, j)] = 1;
        g.values[g.index(i, j)] = 0.0;
      }
    }
  return g;
}

}  // namespace hslab
