#include "hslab/laplacian.hpp"

#include <Eigen/SparseCholesky>

namespace hslab {
namespace {

// Nodes closer to the circle than this fraction of h are held at the boundary value.
constexpr double kThetaMin = 1e-3;

}  // namespace

DiskLaplacian::DiskLaplacian(int n) : n_(n), h_(grid_spacing(n)) {
  unknown_.assign(static_cast<size_t>(n) * n, -1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = -1.0 + i * h_, y = -1.0 + j * h_;
      if (1.0 - std::hypot(x, y) > kThetaMin * h_) {
        const size_t idx = static_cast<size_t>(j) * n + i;
        unknown_[idx] = static_cast<int>(node_.size());
        node_.push_back(idx);
        color_.push_back(static_cast<uint8_t>((i + j) & 1));
        if (x == 0.0 && y == 0.0) origin_ = unknown_[idx];
      }
    }
  const int m = unknowns();
  nb_.resize(m);
  coef_.resize(m);
  arm_.resize(m);
  diag_.resize(m);
  const double base = 0.25 / (h_ * h_);
  for (int k = 0; k < m; ++k) {
    const int i = static_cast<int>(node_[k] % n), j = static_cast<int>(node_[k] / n);
    const double x = -1.0 + i * h_, y = -1.0 + j * h_;
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    double d = 0.0;
    for (int dir = 0; dir < 4; ++dir) {
      const int ii = i + di[dir], jj = j + dj[dir];
      const int u = unknown_[static_cast<size_t>(jj) * n + ii];
      double theta = 1.0;
      if (u < 0) {
        const double half = dir < 2 ? std::sqrt(std::max(0.0, 1.0 - y * y)) : std::sqrt(std::max(0.0, 1.0 - x * x));
        const double pos = dir < 2 ? x : y;
        const double sign = (dir % 2 == 0) ? 1.0 : -1.0;
        theta = std::clamp((half - sign * pos) / h_, kThetaMin, 1.0);
      }
      nb_[k][dir] = u;
      arm_[k][dir] = theta;
      coef_[k][dir] = base / theta;
      d -= coef_[k][dir];
    }
    diag_[k] = d;
  }
}

double DiskLaplacian::apply_row(int k, const double* u, double b) const {
  double s = diag_[k] * u[k];
  for (int dir = 0; dir < 4; ++dir) {
    const int v = nb_[k][dir];
    s += coef_[k][dir] * (v >= 0 ? u[v] : b);
  }
  return s;
}

void DiskLaplacian::apply(const std::vector<double>& u, std::vector<double>& out, double b) const {
  out.resize(u.size());
  for (int k = 0; k < unknowns(); ++k) out[k] = apply_row(k, u.data(), b);
}

Eigen::SparseMatrix<double> DiskLaplacian::negative_matrix(const std::vector<uint8_t>* subset,
                                                           std::vector<int>* local) const {
  const int m = unknowns();
  std::vector<int> loc(m, -1);
  int cnt = 0;
  for (int k = 0; k < m; ++k)
    if (!subset || (*subset)[k]) loc[k] = cnt++;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(cnt) * 5);
  for (int k = 0; k < m; ++k) {
    if (loc[k] < 0) continue;
    trip.emplace_back(loc[k], loc[k], -diag_[k]);
    for (int dir = 0; dir < 4; ++dir) {
      const int v = nb_[k][dir];
      if (v >= 0 && loc[v] >= 0) trip.emplace_back(loc[k], loc[v], -coef_[k][dir]);
    }
  }
  Eigen::SparseMatrix<double> a(cnt, cnt);
  a.setFromTriplets(trip.begin(), trip.end());
  if (local) *local = std::move(loc);
  return a;
}

std::vector<double> DiskLaplacian::solve(const std::vector<double>& rhs, double b, double* residual) const {
  const int m = unknowns();
  Eigen::SparseMatrix<double> a = negative_matrix(nullptr, nullptr);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw SolverFailure("sparse factorization failed", NAN);
  Eigen::VectorXd f(m);
  for (int k = 0; k < m; ++k) {
    double bc = 0.0;
    for (int dir = 0; dir < 4; ++dir)
      if (nb_[k][dir] < 0) bc += coef_[k][dir] * b;
    f[k] = bc - rhs[k];
  }
  Eigen::VectorXd u = ldlt.solve(f);
  std::vector<double> out(u.data(), u.data() + m);
  double scale = 0.0;
  for (double v : rhs) scale = std::max(scale, std::abs(v));
  double res = 0.0;
  for (int refine = 0; refine < 4; ++refine) {
    Eigen::VectorXd r(m);
    res = 0.0;
    for (int k = 0; k < m; ++k) {
      r[k] = rhs[k] - apply_row(k, out.data(), b);
      res = std::max(res, row_scale(k) * std::abs(r[k]));
    }
    if (res <= 1e-10 * scale) break;
    Eigen::VectorXd du = ldlt.solve(-r);
    for (int k = 0; k < m; ++k) out[k] += du[k];
  }
  if (residual) *residual = res;
  if (!(res <= 1e-10 * scale)) throw SolverFailure("Poisson solve did not reach 1e-10 relative residual", res);
  return out;
}

GridField poisson_solve(const GridField& rhs) {
  DiskLaplacian lap(rhs.n);
  std::vector<double> f(lap.unknowns());
  for (int k = 0; k < lap.unknowns(); ++k) {
    f[k] = rhs.values[lap.node(k)];
    if (!std::isfinite(f[k])) throw DomainError("Poisson right-hand side is not finite on the mask");
  }
  std::vector<double> u = lap.solve(f, 0.0, nullptr);
  GridField out = GridField::zeros(rhs.n);
  for (int k = 0; k < lap.unknowns(); ++k) out.values[lap.node(k)] = u[k];
  return out;
}

}  // namespace hslab
