#include "hslab/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/legendre.hpp>

namespace hslab::quad {

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_legendre needs n >= 1");
  Rule r;
  auto zeros = boost::math::legendre_p_zeros<double>(n);  // nonnegative zeros, ascending
  std::vector<double> x, w;
  for (double z : zeros) {
    double dp = boost::math::legendre_p_prime(n, z);
    double wt = 2.0 / ((1.0 - z * z) * dp * dp);
    if (z == 0.0) {
      x.push_back(0.0);
      w.push_back(wt);
    } else {
      x.push_back(z);
      w.push_back(wt);
      x.push_back(-z);
      w.push_back(wt);
    }
  }
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (size_t i = 0; i < x.size(); ++i) {
    r.nodes.push_back(mid + half * x[i]);
    r.weights.push_back(half * w[i]);
  }
  return r;
}

double circle_mean(const std::function<double(Complex)>& f, int nodes) {
  double s = 0.0;
  for (int k = 0; k < nodes; ++k) s += f(std::polar(1.0, 2.0 * kPi * k / nodes));
  return s / nodes;
}

double disk_integral(const std::function<double(Complex)>& f, int radial, int angular) {
  Rule r = gauss_legendre(radial, 0.0, 1.0);
  double s = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    const double rho = r.nodes[i];
    double ring = 0.0;
    for (int k = 0; k < angular; ++k) ring += f(std::polar(rho, 2.0 * kPi * k / angular));
    s += r.weights[i] * rho * ring / angular;
  }
  return 2.0 * s;  // (1/pi) * 2pi * mean over angle
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol, double* error) {
  if (a == b) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  double err = 0.0, l1 = 0.0;
  double v = ts.integrate(f, a, b, tol, &err, &l1);
  if (error) *error = err;
  return v;
}

EndpointIntegral integrate_to_one(const std::function<double(double)>& f, double tol) {
  EndpointIntegral out;
  const double d1 = 1e-6, d2 = 1e-8;
  const double f1 = f(1.0 - d1), f2 = f(1.0 - d2);
  if (!std::isfinite(f2) || !std::isfinite(f1)) {
    out.divergent = true;
    out.exponent = -kInf;
    return out;
  }
  if (f1 > 0.0 && f2 > 0.0) out.exponent = std::log(f2 / f1) / std::log(d2 / d1);
  if (out.exponent <= -1.0 + 1e-3) {
    out.divergent = true;
    out.value = kInf;
    return out;
  }
  out.value = integrate(f, 0.0, 1.0 - d2, tol) + f2 * d2 / (1.0 + out.exponent);
  return out;
}

}  // namespace hslab::quad
