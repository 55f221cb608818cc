#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "hslab/flow.hpp"

using namespace hslab;

namespace {

// Snapshot whose membership is {f > 0}, with the gap f^2 so crossings land near f = 0.
FlowSnapshot fixture(int n, const std::function<double(Complex)>& f) {
  FlowSnapshot s;
  s.n = n;
  s.h = grid_spacing(n);
  s.eps_detach = s.h * s.h;
  s.t = 0.1;
  s.detach_gap = GridField::zeros(n);
  s.membership.assign(static_cast<size_t>(n) * n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const size_t k = s.detach_gap.index(i, j);
      if (!s.detach_gap.mask[k]) continue;
      const double v = f(s.detach_gap.z(i, j));
      s.detach_gap.values[k] = v > 0 ? v * v + s.eps_detach * (1 + 1e-9) : 0.0;
      s.membership[k] = v > 0;
    }
  s.loops = boundary_loops(s.geometry());
  if (!s.loops.empty()) s.boundary = s.loops.front();
  return s;
}

bool passes(const VerificationReport& r, const std::string& check) {
  for (const auto& row : r.rows)
    if (row.check == check) return row.pass.value_or(false);
  FAIL("missing row " << check);
  return false;
}

}  // namespace

TEST_CASE("run_flow validates the schedule") {
  CHECK(run_flow(WeightSpec::flat(1), {}, 65).empty());
  CHECK_THROWS(run_flow(WeightSpec::flat(1), {0.3, 0.1}, 65));
  CHECK_THROWS(run_flow(WeightSpec::flat(1), {0.1, 0.1}, 65));
  CHECK_THROWS(run_flow(WeightSpec::flat(1), {-0.1}, 65));
}

TEST_CASE("flat schedule gives nested near-circles") {
  const int n = 257;
  const auto snaps = run_flow(WeightSpec::flat(1), {0.04, 0.16, 0.36, 0.64}, n);
  REQUIRE(snaps.size() == 4);
  const double radii[] = {0.2, 0.4, 0.6, 0.8};
  for (size_t k = 0; k < 4; ++k) {
    CHECK(hausdorff_to_circle(snaps[k].boundary, radii[k]) <= 2 * snaps[k].h);
    const VerificationReport r = verify_snapshot(snaps[k]);
    CHECK(r.passed());
    if (k > 0) CHECK(inclusion_violations(snaps[k - 1], snaps[k]) == 0);
  }
}

TEST_CASE("scaling the weight rescales time") {
  const FlowSnapshot a = extract_domain(WeightSpec::flat(4), 1.0, 129);
  const FlowSnapshot b = extract_domain(WeightSpec::flat(1), 0.25, 129);
  // gaps scale by 4 while eps_detach = h^2 does not, so nodes right at the boundary may differ
  const GridField& g = a.detach_gap;
  for (size_t k = 0; k < a.membership.size(); ++k)
    if (a.membership[k] != b.membership[k]) CHECK(std::abs(std::abs(g.z(k % g.n, k / g.n)) - 0.5) <= 2 * a.h);
  CHECK(hausdorff_to_circle(a.boundary, 0.5) <= 2 * a.h);
  CHECK(std::abs(a.area_omega / 4 - b.area_omega) <= 5 * a.h * 0.25);
}

TEST_CASE("mean value residuals") {
  const int n = 257;
  const double h = grid_spacing(n);
  const FlowSnapshot s = extract_domain(WeightSpec::flat(1), 0.25, n);
  const std::vector<double> res = mean_value_residuals(s, WeightSpec::flat(1), 6);
  REQUIRE(res.size() == 13);
  CHECK(res[0] <= 5 * h * 0.25);  // h = 1
  CHECK(res[1] <= 1e-6);          // Re z
  CHECK(res[3] <= 5 * h * 0.25);  // Re z^2

  const WeightSpec w = WeightSpec::alpha_power(0.5, 2.0);
  const std::vector<double> r2 = mean_value_residuals(extract_domain(w, 0.3, n), w, 1);
  CHECK(r2[1] <= 1e-6);
}

TEST_CASE("verify_snapshot on fixtures") {
  const int n = 129;
  const FlowSnapshot disk = fixture(n, [](Complex z) { return 0.3 - std::abs(z); });
  CHECK(verify_snapshot(disk).passed());

  const FlowSnapshot annulus = fixture(n, [](Complex z) {
    const double r = std::abs(z);
    return std::min(r - 0.2, 0.6 - r);
  });
  const VerificationReport a = verify_snapshot(annulus);
  CHECK_FALSE(passes(a, "no_holes"));
  CHECK_FALSE(passes(a, "single_loop"));

  const FlowSnapshot two = fixture(n, [](Complex z) {
    return std::max(0.2 - std::abs(z - 0.45), 0.2 - std::abs(z + 0.45));
  });
  const VerificationReport b = verify_snapshot(two);
  CHECK_FALSE(passes(b, "single_loop"));
  CHECK(passes(b, "no_holes"));
}

TEST_CASE("turning angle of polygons") {
  Polyline square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(max_turning_angle(square, 1e-9) == doctest::Approx(90.0));
  Polyline spike = {{0, 0}, {1, 0}, {0.01, 0.01}, {0, 1}};
  CHECK(max_turning_angle(spike, 1e-9) > 150.0);
}

TEST_CASE("W-estimate") {
  const int n = 129;
  const double h = grid_spacing(n);
  const WEstimate e = w_estimate(WeightSpec::alpha_power(0.5, 2.0), n);
  CHECK(e.report.passed());
  CHECK(e.sup_deviation <= 10 * h * h);

  const WEstimate one = w_estimate(WeightSpec::flat(1), n);
  CHECK(one.report.passed());
  CHECK(one.max_excess <= 10 * h * h);
  // strict away from the circle
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const size_t k = one.excess.index(i, j);
      const double r = std::abs(one.excess.z(i, j));
      if (one.excess.mask[k] && r > 0 && r < 1 - 4 * h && std::isfinite(one.excess.values[k]))
        CHECK(one.excess.values[k] < 0.0);
    }

  const VerificationReport bad = w_estimate_check(WeightSpec::poincare_scaled(4), 65);
  CHECK_FALSE(bad.applicable);
}

TEST_CASE("reproducing inequality") {
  const int n = 65;
  for (TestFunction u : subharmonic_test_functions()) {
    const VerificationReport r = reproducing_inequality(WeightSpec::alpha_power(0.5, 2.0), u, n);
    CHECK(r.passed());
    CHECK(std::abs(r.rows.back().residual) <= 1e-10);  // both sides identical
  }
  const VerificationReport one = reproducing_inequality(WeightSpec::flat(1), TestFunction::abs2, n);
  CHECK(one.passed());
  CHECK(one.rows.back().residual == doctest::Approx(1.0 / 3 - 1.0 / 2).epsilon(1e-10));
  const VerificationReport re = reproducing_inequality(WeightSpec::flat(1), TestFunction::re_z, n);
  CHECK(std::abs(re.rows.back().residual) <= 1e-12);
  CHECK(test_function_from_id("exp_re") == TestFunction::exp_re);
  CHECK_THROWS(test_function_from_id("nope"));
}

TEST_CASE("boundary density dichotomy") {
  const DensityScan one = boundary_density_scan(WeightSpec::flat(1));
  CHECK(one.failures == 0);
  CHECK(one.zero_branch == 0);
  const DensityScan two = boundary_density_scan(WeightSpec::alpha_power(0.5, 2.0));
  CHECK(two.failures == 0);
  CHECK(two.zero_branch == two.angles);
  CHECK(boundary_density_check(WeightSpec::alpha_power(0.5, 2.0)).passed());

  // (1-|z|^2)^2 fails the scan, and its hypotheses exclude it
  CHECK(boundary_density_scan(WeightSpec::alpha_power(1.0)).failures > 0);
  CHECK_FALSE(boundary_density_check(WeightSpec::alpha_power(1.0)).applicable);
}

TEST_CASE("report serialization") {
  VerificationReport r;
  r.add("a", 0.5, 1.0, 65, 0.03125);
  r.add("b", 2.0, 1.0);
  r.add("c", std::nan(""), 1.0);
  CHECK_FALSE(r.passed());
  const nlohmann::json j = to_json(r);
  CHECK(j[0]["check"] == "a");
  CHECK(j[0]["pass"] == true);
  CHECK(j[1]["pass"] == false);
  CHECK(j[1]["n"].is_null());
  CHECK(j[2]["pass"] == false);
  CHECK(render_table(r).find("NO") != std::string::npos);
}
