#pragma once

#include <functional>
#include <vector>

#include "hslab/core.hpp"

// Quadrature in the normalized measures dSigma = dx dy / pi and dsigma = |dz| / 2pi.
namespace hslab::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule mapped to [a, b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Mean of f over the unit circle by the trapezoid rule.
double circle_mean(const std::function<double(Complex)>& f, int nodes = 2048);

// Integral of f over the unit disk against dSigma; Gauss-Legendre in the radius, trapezoid in angle.
double disk_integral(const std::function<double(Complex)>& f, int radial = 64, int angular = 256);

// Adaptive tanh-sinh on [a, b]; tolerates integrable endpoint singularities.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                 double* error = nullptr);

struct EndpointIntegral {
  double value = 0.0;
  bool divergent = false;
  double exponent = 0.0;  // f ~ (1 - x)^exponent as x -> 1
};

// Integral of f over [0, 1) with a power-law tail fitted on (1 - 1e-6, 1 - 1e-8); divergent when the
// fitted exponent is at most -1.
EndpointIntegral integrate_to_one(const std::function<double(double)>& f, double tol = 1e-12);

}  // namespace hslab::quad
