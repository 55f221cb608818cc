#include "hslab/geodesics.hpp"

#include <boost/math/tools/roots.hpp>

#include "hslab/quadrature.hpp"

namespace hslab {

namespace {

Complex christoffel(const WeightSpec& w, Complex z) { return w.dz(z) / w.value(z); }

struct State {
  Complex z, v;
};

State rhs(const WeightSpec& w, const State& s) { return {s.v, -christoffel(w, s.z) * s.v * s.v}; }

State axpy(const State& s, double a, const State& d) { return {s.z + a * d.z, s.v + a * d.v}; }

GeodesicNode node(const WeightSpec& w, const State& s) { return {s.z, s.v, w.value(s.z) * std::norm(s.v)}; }

}  // namespace

GeodesicPath shoot(const WeightSpec& w, DiskPoint start, Complex dir, double length, double step) {
  if (!start.interior()) throw DomainError("geodesic start must be interior");
  if (!(step > 0.0) || !(length >= 0.0)) throw DomainError("step must be positive and length nonnegative");
  if (std::abs(dir) == 0.0) throw DomainError("direction must be nonzero");
  GeodesicPath path;
  path.step = step;
  path.weight_id = w.id();
  State s{start.c(), dir / std::abs(dir)};
  path.nodes.push_back(node(w, s));
  const long steps = std::lround(length / step);
  const double limit = 1.0 - 10.0 * step;
  for (long k = 0; k < steps; ++k) {
    const State k1 = rhs(w, s);
    const State k2 = rhs(w, axpy(s, 0.5 * step, k1));
    const State k3 = rhs(w, axpy(s, 0.5 * step, k2));
    const State k4 = rhs(w, axpy(s, step, k3));
    State next{s.z + step / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
               s.v + step / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
    if (std::abs(next.z) > limit) {
      path.truncated = true;
      break;
    }
    s = next;
    path.nodes.push_back(node(w, s));
  }
  return path;
}

double geodesic_residual(const WeightSpec& w, const GeodesicPath& path) {
  const auto& p = path.nodes;
  if (p.size() < 3) throw DomainError("geodesic residual needs at least three nodes");
  const double h2 = path.step * path.step;
  double worst = 0.0;
  for (size_t k = 1; k + 1 < p.size(); ++k) {
    const Complex acc = (p[k + 1].z - 2.0 * p[k].z + p[k - 1].z) / h2;
    worst = std::max(worst, std::abs(acc + christoffel(w, p[k].z) * p[k].v * p[k].v));
  }
  return worst;
}

GeodesicPath circle_path(const WeightSpec& w, double rho, double step) {
  GeodesicPath path;
  path.step = step;
  path.weight_id = w.id();
  const long steps = std::lround(2.0 * kPi / step);
  for (long k = 0; k <= steps; ++k) {
    const Complex e = std::polar(1.0, k * step);
    path.nodes.push_back(node(w, {rho * e, Complex(0.0, rho) * e}));
  }
  return path;
}

double circle_residual(const WeightSpec& w, double rho) {
  const double s = rho * rho;
  return rho * std::abs(circle_expression(w, s) / w.profile(s));
}

double speed_drift(const GeodesicPath& path) {
  if (path.nodes.size() < 2) return 0.0;
  const double s0 = path.nodes.front().speed;
  double worst = 0.0;
  for (const GeodesicNode& n : path.nodes) worst = std::max(worst, std::abs(n.speed - s0) / s0);
  return worst / (path.step * static_cast<double>(path.nodes.size() - 1));
}

double circle_deviation(const GeodesicPath& path, double rho) {
  double worst = 0.0;
  for (const GeodesicNode& n : path.nodes) worst = std::max(worst, std::abs(std::abs(n.z) - rho));
  return worst;
}

double radial_distance(const WeightSpec& w, double r) {
  if (!w.radial()) throw NotApplicable("radial distance needs a radial weight");
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("radius must lie in [0, 1]");
  if (r == 0.0) return 0.0;
  auto f = [&](double x) { return std::sqrt(w.profile(x * x)); };
  if (r == 1.0) return quad::integrate_to_one(f).value;
  const double v = quad::integrate(f, 0.0, r, 1e-12);
  return std::isfinite(v) ? v : kInf;
}

double radius_at_distance(const WeightSpec& w, double d) {
  if (!(d >= 0.0)) throw DomainError("distance must be nonnegative");
  if (d == 0.0) return 0.0;
  const double top = 1.0 - 1e-9;
  if (radial_distance(w, 1.0) <= d) return 1.0;
  auto g = [&](double r) { return radial_distance(w, r) - d; };
  const double g_top = g(top);
  if (g_top <= 0.0) return 1.0;
  std::uintmax_t iters = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(g, 0.0, top, -d, g_top,
                                                    boost::math::tools::eps_tolerance<double>(48), iters);
  return 0.5 * (lo + hi);
}

}  // namespace hslab
