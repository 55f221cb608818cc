#include "hslab/korenblum.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "hslab/geodesics.hpp"
#include "hslab/quadrature.hpp"

namespace hslab::korenblum {

namespace {

void check_r(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("r must lie in (0, 1)");
}

// Mean of log(1/(1-|z|^2)) over D(r, 1-r) with z = r + (1-r)(1-v) e^{i psi}.
// 1 - |z|^2 = rho [v (1 + r + (1-r)(1-v)) + 4 r (1-v) sin^2(psi/2)], rho = 1 - r.
double mean_area(double r) {
  const double rho = 1.0 - r;
  boost::math::quadrature::tanh_sinh<double> inner(12), outer(12);
  auto ring = [&](double psi) {
    const double s2 = std::sin(0.5 * psi);
    const double q = 4.0 * r * s2 * s2;
    auto f = [&](double v) {
      const double g = v * (1.0 + r + rho * (1.0 - v)) + q * (1.0 - v);
      return g > 0.0 ? -std::log(g) * (1.0 - v) : 0.0;
    };
    return inner.integrate(f, 0.0, 1.0, 1e-13);
  };
  const double rest = outer.integrate(ring, 0.0, kPi, 1e-12);
  return -std::log(rho) + 2.0 / kPi * rest;
}

// Same mean through circles about the origin: the arc of |z| = 1 - u inside the disk has half-angle
// 2 asin sqrt(u (L - u) / (4 r (1 - u))), L = 2(1 - r).
double mean_polar(double r) {
  const double rho = 1.0 - r, len = 2.0 * rho;
  auto f = [&](double u) {
    const double x = 1.0 - u;
    const double k = std::max(0.0, u * (len - u)) / (4.0 * r * x);
    const double half = 2.0 * std::asin(std::sqrt(std::min(1.0, k)));
    return -std::log(u * (2.0 - u)) * half * x;
  };
  return 2.0 / (kPi * rho * rho) * quad::integrate(f, 0.0, len, 1e-13);
}

}  // namespace

double big_f_polar(double r) {
  if (!(r > 0.5 && r < 1.0)) throw DomainError("polar route needs 1/2 < r < 1");
  return std::exp(mean_polar(r));
}

double big_f_area(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("r must lie in [0, 1)");
  return std::exp(mean_area(r));
}

double big_f(double r) {
  check_r(r);
  return r > 0.5 ? big_f_polar(r) : big_f_area(r);
}

double log_ratio(double r) {
  check_r(r);
  return std::log(big_f(r)) / -std::log1p(-r);
}

Constant c_p_alpha(double p, double alpha) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
  if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
  Constant c;
  c.p = p;
  c.alpha = alpha;
  const double beta = 2.0 * alpha * p / (1.0 - p);
  if (beta == 0.0) return c;
  c.endpoint_exponent = beta * (1.0 - kFExponent);
  if (c.endpoint_exponent <= -1.0) {
    c.divergent = true;
    c.value = kInf;
    return c;
  }
  auto g = [&](double r) {
    const double f = r > 0.5 ? std::exp(mean_polar(r)) : std::exp(mean_area(r));
    return std::pow((1.0 - r * r) * f, beta);
  };
  const double delta = 1e-4;
  const double body = quad::integrate(g, 0.0, 1.0 - delta, 1e-9);
  const double tail = g(1.0 - delta) * delta / (1.0 + c.endpoint_exponent);
  c.value = std::pow(body + tail, 1.0 - p);
  return c;
}

double divergence_threshold(double alpha) { return kPi / (kPi + 2.0 * alpha * (4.0 - kPi)); }

double divergence_threshold_bisect(double alpha, double tol) {
  double lo = 1e-9, hi = 1.0 - 1e-12;
  // only the flag is needed, which does not depend on the integral
  auto divergent = [&](double p) {
    const double beta = 2.0 * alpha * p / (1.0 - p);
    return beta * (1.0 - kFExponent) <= -1.0;
  };
  if (!divergent(hi)) return 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (divergent(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

RadialLength radial_p_length(const WeightSpec& w, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("p must lie in (0, 1]");
  auto f = [&](double x) {
    const double v = w.radial() ? w.profile(x * x) : w.value(Complex(x, 0.0));
    return std::pow(v, p);
  };
  const quad::EndpointIntegral e = quad::integrate_to_one(f);
  return {e.value, e.divergent};
}

VerificationReport containment_check(const FlowSnapshot& s, const WeightSpec& w, double alpha) {
  VerificationReport r;
  r.subject = "containment for " + w.id() + " at t = " + std::to_string(s.t);
  double vmax = 0.0;
  for (const Polyline& p : s.loops)
    for (Complex v : p) vmax = std::max(vmax, std::abs(v));
  if (!w.radial()) {
    r.add("containment", NAN, 2.0 * s.h, s.n, s.h);
    r.mark_not_applicable("weight is not radial");
    return r;
  }
  const double alpha_max = kPi / (8.0 - 2.0 * kPi);
  r.add("hypothesis_alpha_range", alpha, alpha_max);
  r.rows.back().pass = alpha >= 0.0 && alpha < alpha_max;
  const CurvatureReport cr = curvature_report(w, alpha);
  r.add("hypothesis_curvature", cr.worst_margin, -1e-8, 0, 0.0, true);
  const Constant c = c_p_alpha(0.5, alpha);
  const double dist = c.value * std::sqrt(s.t);
  const double rho = c.divergent ? 1.0 : radius_at_distance(w, dist);
  r.add("containment", vmax - rho, 2.0 * s.h, s.n, s.h).note =
      "c_alpha = " + std::to_string(c.value) + ", radius " + std::to_string(rho) + ", max |vertex| " +
      std::to_string(vmax);
  if (!r.rows[0].pass.value_or(false) || !r.rows[1].pass.value_or(false))
    r.mark_not_applicable("weight or alpha outside the hypotheses");
  return r;
}

double pk_integral(Complex z) {
  auto inside = [&](double r) { return std::abs(z - r) < 1.0 - r; };
  if (!inside(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 200 && hi - lo > 1e-16; ++k) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  const double cut = 0.5 * (lo + hi);
  return quad::integrate([](double r) { return 1.0 / ((1.0 - r) * (1.0 - r)); }, 0.0, cut, 1e-14);
}

double pk_closed(Complex z) { return one_minus_abs2(z) / std::norm(1.0 - z); }

double balayage_integral(const WeightSpec& nu) {
  boost::math::quadrature::tanh_sinh<double> angular(12);
  auto ring = [&](double rho) {
    auto f = [&](double phi) {
      const Complex z = std::polar(rho, phi);
      return nu.value(z) * (1.0 - rho * rho) / std::norm(1.0 - z);
    };
    return angular.integrate(f, 0.0, kPi, 1e-12) / kPi;  // mean over the full circle by symmetry
  };
  return 2.0 * quad::integrate([&](double rho) { return ring(rho) * rho; }, 0.0, 1.0, 1e-10);
}

}  // namespace hslab::korenblum
