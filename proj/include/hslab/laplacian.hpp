#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <vector>

#include "hslab/grid.hpp"

namespace hslab {

// Discrete Delta = (1/4)(d_xx + d_yy) on the disk grid with Dirichlet data on the unit circle.
// Neighbors across the circle are replaced by the crossing point at distance theta*h, which keeps
// the matrix symmetric (coefficient 1/(theta h^2) toward the crossing).
class DiskLaplacian {
 public:
  explicit DiskLaplacian(int n);

  int n() const { return n_; }
  double h() const { return h_; }
  int unknowns() const { return static_cast<int>(node_.size()); }
  // grid index of unknown k, and unknown index of a grid node (-1 when fixed or outside)
  size_t node(int k) const { return node_[k]; }
  int unknown(size_t idx) const { return unknown_[idx]; }
  const std::vector<int>& unknown_map() const { return unknown_; }
  int origin_unknown() const { return origin_; }  // -1 when no node sits at 0
  bool color(int k) const { return color_[k]; }

  // neighbor unknown (or -1 for the circle) and coefficient, including the 1/4
  const std::array<int, 4>& neighbors(int k) const { return nb_[k]; }
  const std::array<double, 4>& coefficients(int k) const { return coef_[k]; }
  double diagonal(int k) const { return diag_[k]; }  // negative
  // crossing distance in units of h per direction (+x, -x, +y, -y); 1 for interior neighbors
  const std::array<double, 4>& arms(int k) const { return arm_[k]; }

  // (L u)_k for unknown values u and boundary value b on the circle.
  double apply_row(int k, const double* u, double b = 0.0) const;
  void apply(const std::vector<double>& u, std::vector<double>& out, double b = 0.0) const;

  // Row scale making the equilibrated row look like an interior one (<= 1).
  double row_scale(int k) const { return -1.0 / (h_ * h_ * diag_[k]); }

  // -L restricted to the unknowns whose flag is set; index map filled for the subset.
  Eigen::SparseMatrix<double> negative_matrix(const std::vector<uint8_t>* subset, std::vector<int>* local) const;

  // Solve L u = rhs with u = b on the circle; rhs, u per unknown.
  std::vector<double> solve(const std::vector<double>& rhs, double b, double* residual) const;

 private:
  int n_;
  double h_;
  int origin_ = -1;
  std::vector<size_t> node_;
  std::vector<int> unknown_;
  std::vector<std::array<int, 4>> nb_;
  std::vector<std::array<double, 4>> coef_;
  std::vector<std::array<double, 4>> arm_;
  std::vector<double> diag_;
  std::vector<uint8_t> color_;
};

// Solution of Delta_h u = rhs with u = 0 on the circle (paper normalization of Delta).
GridField poisson_solve(const GridField& rhs);

}  // namespace hslab
