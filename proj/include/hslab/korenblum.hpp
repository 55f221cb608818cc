#pragma once

#include "hslab/obstacle.hpp"
#include "hslab/report.hpp"

namespace hslab::korenblum {

// F(r) = exp{(1-r)^-2 int_{D(r,1-r)} log(1/(1-|z|^2)) dSigma}; polar route for r > 1/2, area route otherwise.
double big_f(double r);
// One-dimensional route through the arc length of |z| = rho inside D(r, 1-r); needs 1/2 < r < 1.
double big_f_polar(double r);
// Two-dimensional route in polar coordinates about the center r; any 0 <= r < 1 (r = 0 is the limit).
double big_f_area(double r);
// log F(r) / log(1/(1-r))
double log_ratio(double r);

// Exponent 4/pi of the bound log F(r) <= (4/pi + eps) log(1/(1-r)).
inline constexpr double kFExponent = 4.0 / kPi;

struct Constant {
  double p = 0.0;
  double alpha = 0.0;
  double value = 1.0;              // c_{p,alpha}; +inf when divergent
  bool divergent = false;
  double endpoint_exponent = 0.0;  // beta (1 - 4/pi), beta = 2 alpha p / (1 - p)
};

// {int_0^1 [(1-r^2) F(r)]^beta dr}^{1-p}, the tail on (1 - 1e-4, 1) replaced by its power law.
Constant c_p_alpha(double p, double alpha);

// pi / (pi + 2 alpha (4 - pi))
double divergence_threshold(double alpha);
// Smallest p flagged divergent by c_p_alpha, by bisection to tol.
double divergence_threshold_bisect(double alpha, double tol = 1e-6);

struct RadialLength {
  double value = 0.0;
  bool divergent = false;
};

// int_0^1 omega(r)^p dr along the positive real axis.
RadialLength radial_p_length(const WeightSpec& w, double p);

// Every boundary vertex of D(t) lies in the metric ball B(0, c_alpha sqrt t), up to 2h.
VerificationReport containment_check(const FlowSnapshot& s, const WeightSpec& w, double alpha);

// int_0^1 (1-r)^-2 chi_{D(r,1-r)}(z) dr, with the cut-off in r found from the indicator alone.
double pk_integral(Complex z);
// (1-|z|^2)/|1-z|^2
double pk_closed(Complex z);

// int nu(z) (1-|z|^2)/|1-z|^2 dSigma
double balayage_integral(const WeightSpec& nu);

}  // namespace hslab::korenblum
