#pragma once

#include <cstdint>
#include <vector>

#include "hslab/core.hpp"

namespace hslab {

// Scalar field on the uniform n x n grid over [-1,1]^2, masked to the closed disk.
struct GridField {
  int n = 0;
  double h = 0.0;
  std::vector<double> values;  // row-major, index j*n + i; NaN off the mask
  std::vector<uint8_t> mask;   // 1 = node in the closed disk

  static GridField zeros(int n);

  size_t index(int i, int j) const { return static_cast<size_t>(j) * n + i; }
  double x(int i) const { return -1.0 + i * h; }
  double y(int j) const { return -1.0 + j * h; }
  Complex z(int i, int j) const { return {x(i), y(j)}; }
  double& at(int i, int j) { return values[index(i, j)]; }
  double at(int i, int j) const { return values[index(i, j)]; }
};

double grid_spacing(int n);

}  // namespace hslab
