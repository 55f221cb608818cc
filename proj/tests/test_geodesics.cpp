#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hslab/geodesics.hpp"

using namespace hslab;

TEST_CASE("flat geodesics are straight") {
  const Complex dir = std::polar(1.0, 0.7);
  const GeodesicPath p = shoot(WeightSpec::flat(1), {0.1, -0.2}, dir, 0.5);
  for (size_t k = 0; k < p.nodes.size(); ++k)
    CHECK(std::abs(p.nodes[k].z - (Complex(0.1, -0.2) + static_cast<double>(k) * p.step * dir)) <= 1e-13);
  CHECK(geodesic_residual(WeightSpec::flat(1), p) <= 1e-9);
}

TEST_CASE("radial Poincare geodesic stays on the axis") {
  const GeodesicPath p = shoot(WeightSpec::poincare_scaled(4), {0, 0}, 1.0, 0.9);
  for (const auto& q : p.nodes) CHECK(q.z.imag() == 0.0);
  CHECK(p.nodes.back().z.real() > 0.5);
}

TEST_CASE("boundary exit truncates the path") {
  const GeodesicPath p = shoot(WeightSpec::flat(1), {0.5, 0}, 1.0, 2.0, 1e-3);
  CHECK(p.truncated);
  CHECK(std::abs(p.nodes.back().z) <= 1 - 10 * p.step + 1e-3);
}

TEST_CASE("metric speed is conserved to fourth order") {
  const WeightSpec w = WeightSpec::example7(0.05, 0.5);
  const GeodesicPath a = shoot(w, {0.1, 0.2}, std::polar(1.0, 2.0), 1.0, 1e-3);
  const GeodesicPath b = shoot(w, {0.1, 0.2}, std::polar(1.0, 2.0), 1.0, 5e-4);
  CHECK(speed_drift(a) <= 1e-6);
  CHECK(speed_drift(a) / speed_drift(b) >= 8.0);
}

TEST_CASE("shooting back returns to the start") {
  const WeightSpec w = WeightSpec::poincare_scaled(4);
  const double step = 1e-3;
  const GeodesicPath p = shoot(w, {0.2, 0.1}, std::polar(1.0, 0.4), 0.4, step);
  const GeodesicNode& e = p.nodes.back();
  const double sp = std::abs(e.v);
  const GeodesicPath q = shoot(w, e.z, -e.v / sp, (p.nodes.size() - 1) * step * sp, step * sp);
  CHECK(std::abs(q.nodes.back().z - Complex(0.2, 0.1)) <= 10 * step * step);
}

TEST_CASE("geodesic circles of the example family") {
  const WeightSpec w = WeightSpec::example7(0.01, 1);
  const std::vector<double> roots = geodesic_circle_radii(w);
  REQUIRE(roots.size() == 2);
  for (double s : roots) {
    const double rho = std::sqrt(s);
    CHECK(circle_residual(w, rho) <= 1e-8);
    CHECK(circle_residual(w, 0.9 * rho) > 1e-2);
    CHECK(geodesic_residual(w, circle_path(w, rho)) <= 1e-6);
  }
  const double rho = std::sqrt(roots[1]);
  const GeodesicPath p = shoot(w, {rho, 0}, Complex(0, 1), 2 * kPi * rho, 2.5e-4);
  CHECK(circle_deviation(p, rho) <= 1e-3);
}

TEST_CASE("radial distances") {
  for (double r : {0.0, 0.3, 0.7}) {
    CHECK(radial_distance(WeightSpec::flat(1), r) == doctest::Approx(r));
    CHECK(radial_distance(WeightSpec::poincare_scaled(4), r) ==
          doctest::Approx(std::log((1 + r) / (1 - r))).epsilon(1e-12));
  }
  CHECK(radial_distance(WeightSpec::alpha_power(0.5, 2.0), 1.0) ==
        doctest::Approx(std::sqrt(2.0) * kPi / 4).epsilon(1e-9));
  CHECK_THROWS_AS(radial_distance(mobius_pullback(WeightSpec::flat(1), {0.5, 0}), 0.3), NotApplicable);
  CHECK(radius_at_distance(WeightSpec::poincare_scaled(4), std::log(3.0)) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(radius_at_distance(WeightSpec::flat(1), 2.0) == 1.0);
}
