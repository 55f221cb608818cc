#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hslab/expmap.hpp"

using namespace hslab;

namespace {

double row(const VerificationReport& r, const std::string& name) {
  for (const auto& x : r.rows)
    if (x.check == name) return x.residual;
  FAIL("missing row " << name);
  return NAN;
}

}  // namespace

TEST_CASE("flat chart is the identity") {
  const int n = 129;
  const ExpMapChart c = build_chart(WeightSpec::flat(1), {0, 0}, 0.8, 4, 16, n);
  REQUIRE(c.points.size() == 4);
  for (size_t i = 0; i < c.radii.size(); ++i)
    for (size_t j = 0; j < c.angles.size(); ++j)
      CHECK(std::abs(c.points[i][j] - std::polar(c.radii[i], c.angles[j])) <= 2 * c.h);
  const VerificationReport r = chart_checks(c, WeightSpec::flat(1));
  CHECK(r.passed());
}

TEST_CASE("flat(4) chart halves the radius") {
  const int n = 129;
  const ExpMapChart c = build_chart(WeightSpec::flat(4), {0, 0}, 0.8, 4, 16, n);
  CHECK(c.omega0 == doctest::Approx(4.0));
  for (size_t i = 0; i < c.radii.size(); ++i)
    for (size_t j = 0; j < c.angles.size(); ++j)
      CHECK(std::abs(c.points[i][j] - 0.5 * std::polar(c.radii[i], c.angles[j])) <= 2 * c.h);
  CHECK(row(chart_checks(c, WeightSpec::flat(4)), "slope_rel_error") <= 0.05);
}

TEST_CASE("radial charts are rotation equivariant") {
  const int n = 129;
  const WeightSpec w = WeightSpec::alpha_power(0.5, 2.0);
  ChartBuilder b(w, {0, 0}, n);
  const double delta = 0.1;
  const ExpMapChart a = b.build(0.7, 3, 12), r = b.build(0.7, 3, 12, delta);
  for (size_t i = 0; i < a.points.size(); ++i)
    for (size_t j = 0; j < a.angles.size(); ++j)
      CHECK(std::abs(r.points[i][j] - a.points[i][j] * std::polar(1.0, delta)) <= 2 * a.h);
}

TEST_CASE("chart checks on the weight 2(1-|z|^2)") {
  const int n = 257;  // orthogonality is still 1.4 deg at 129
  const WeightSpec w = WeightSpec::alpha_power(0.5, 2.0);
  const ExpMapChart c = build_chart(w, {0, 0}, 0.7, 4, 16, n);
  const VerificationReport r = chart_checks(c, w);
  CHECK(row(r, "slope_rel_error") <= 0.05);
  CHECK(row(r, "orthogonality_deg") <= 1.0);
  CHECK(row(r, "trajectory_crossings") == 0.0);
  CHECK(row(r, "ring_radial_variance") <= 4 * c.h * c.h);
}

TEST_CASE("general basepoints go through the pull-back") {
  const int n = 129;
  const Complex z0(0.3, 0.0);
  const ExpMapChart c = build_chart(WeightSpec::flat(1), z0, 0.4, 3, 12, n);
  CHECK(c.omega0 == doctest::Approx(std::pow(1 - 0.09, 2)).epsilon(1e-12));
  const VerificationReport r = chart_checks(c, WeightSpec::flat(1));
  CHECK(row(r, "intercept") <= 2 * c.h);
  CHECK(row(r, "slope_rel_error") <= 0.05);
  // every image point lies in the disk and rings are nested around z0
  for (size_t i = 1; i < c.points.size(); ++i)
    for (size_t j = 0; j < c.angles.size(); ++j)
      CHECK(std::abs(c.points[i][j] - z0) > std::abs(c.points[i - 1][j] - z0));
}

TEST_CASE("smoothing keeps circles") {
  Polyline p;
  for (int k = 0; k < 200; ++k) p.push_back(std::polar(0.5 + 0.001 * ((k % 2) ? 1 : -1), 2 * kPi * k / 200));
  const Polyline s = smooth_loop(p, 6);
  for (Complex q : s) CHECK(std::abs(std::abs(q) - 0.5) <= 2e-4);
}

TEST_CASE("chart json contract") {
  const ExpMapChart c = build_chart(WeightSpec::flat(1), {0, 0}, 0.6, 2, 8, 65);
  const nlohmann::json j = to_json(c, chart_checks(c, WeightSpec::flat(1)));
  for (const char* key : {"z0", "radii", "angles", "points", "checks"}) CHECK(j.contains(key));
  CHECK(j["points"].size() == 2 * 8);  // flattened ring by ring
  CHECK(j["points"][0].size() == 2);
}
