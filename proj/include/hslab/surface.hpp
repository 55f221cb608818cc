#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "hslab/core.hpp"

namespace hslab {

// Sampled weight on [-1,1]^2 with bicubic interpolation.
struct WeightTable {
  int nx = 0, ny = 0;
  std::vector<double> f, fx, fy, fxy;  // node values and derivatives in x, y (after ghost fill)
  std::string source;

  static WeightTable from_samples(int nx, int ny, std::vector<double> samples, std::string source = "");
  static WeightTable load_csv(const std::string& path);

  struct Eval {
    double v, vx, vy, vxx, vyy;
  };
  Eval eval(double x, double y) const;
};

// Conformal weight omega on the disk, the metric being omega(z)|dz|^2.
class WeightSpec {
 public:
  struct Flat { double c; };
  struct PoincareScaled { double c; };
  struct AlphaPower { double alpha; double scale; };  // scale * (1-|z|^2)^{2 alpha}
  struct Example7 { double c; double alpha; };        // c/(1-|z|^2)^2 + (1-|z|^2)^{2 alpha}
  struct Table { std::shared_ptr<const WeightTable> table; };
  struct Pullback { std::shared_ptr<const WeightSpec> base; Complex z0; };
  using Family = std::variant<Flat, PoincareScaled, AlphaPower, Example7, Table, Pullback>;

  static WeightSpec flat(double c = 1.0);
  static WeightSpec poincare_scaled(double c = 4.0);
  static WeightSpec alpha_power(double alpha, double scale = 1.0);
  static WeightSpec example7(double c, double alpha);
  static WeightSpec table(WeightTable t);

  const Family& family() const { return family_; }

  double value(Complex z) const;
  Complex dz(Complex z) const;      // d omega / dz
  double lap_log(Complex z) const;  // Delta log omega

  // Radial weights are omega(z) = omega0(|z|^2).
  bool radial() const;
  double profile(double s) const;
  double profile_d1(double s) const;
  double profile_d2(double s) const;

  std::string id() const;

 private:
  explicit WeightSpec(Family f) : family_(std::move(f)) {}
  friend WeightSpec mobius_pullback(const WeightSpec& w, DiskPoint z0);
  Family family_;
};

double eval_weight(const WeightSpec& w, DiskPoint z);

// kappa = -(2/omega) Delta log omega
double curvature(const WeightSpec& w, DiskPoint z);

// Delta log[omega / (1-|z|^2)^{2 alpha}]; nonnegative iff K + alpha K_H <= 0 at z.
double hyperbolicity_margin(const WeightSpec& w, double alpha, DiskPoint z);

struct CurvatureReport {
  int m = 0;              // samples per side over [-1,1]^2
  double radius = 0.0;    // only nodes with |z| < radius are evaluated
  double alpha = 0.0;
  std::vector<double> kappa;    // NaN outside the sampled disk
  std::vector<double> margin;   // NaN outside the sampled disk
  double worst_margin = kInf;
  bool holds(double tol = 1e-8) const { return worst_margin >= -tol; }
};

CurvatureReport curvature_report(const WeightSpec& w, double alpha, int m = 101, double radius = 0.99);

// omega0(s) + s omega0'(s); a circle |z| = sqrt(s) is a geodesic iff this vanishes.
double circle_expression(const WeightSpec& w, double s);

// Roots s in (0,1) of circle_expression (sign-change scan plus bisection to full double precision).
std::vector<double> geodesic_circle_radii(const WeightSpec& w);
std::vector<double> geodesic_circle_radii(double c, double alpha);

// omega(phi(z)) |phi'(z)|^2 with phi(z) = (z0 - z)/(1 - conj(z0) z).
WeightSpec mobius_pullback(const WeightSpec& w, DiskPoint z0);

// The involution phi_{z0} and its derivatives.
Complex mobius(Complex z0, Complex z);
Complex mobius_d1(Complex z0, Complex z);

}  // namespace hslab
