#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hslab/kernel_checks.hpp"
#include "hslab/korenblum.hpp"

using namespace hslab;
namespace kb = hslab::korenblum;

TEST_CASE("F near zero tends to e") {
  CHECK(kb::big_f_area(0.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(std::abs(kb::big_f(1e-6) - std::exp(1.0)) <= 1e-4);
  CHECK_THROWS_AS(kb::big_f(0.0), DomainError);
  CHECK_THROWS_AS(kb::big_f(1.0), DomainError);
}

TEST_CASE("polar and area routes agree") {
  CHECK(std::abs(kb::big_f_polar(0.6) - kb::big_f_area(0.6)) <= 1e-6);
  for (double r : {0.51, 0.75, 0.9, 0.95, 0.989})
    CHECK(std::abs(kb::big_f_polar(r) - kb::big_f_area(r)) <= 1e-6 * std::max(1.0, kb::big_f_area(r)));
}

TEST_CASE("F is at least one and the log-ratio stays below 4/pi") {
  for (int k = 1; k < 40; ++k) CHECK(kb::big_f(k / 40.0) >= 1.0);
  CHECK(kb::log_ratio(0.999) <= kb::kFExponent + 0.05);
  CHECK(kb::log_ratio(0.99) <= kb::kFExponent + 0.05);
}

TEST_CASE("c_{p,alpha}") {
  for (double p : {0.1, 0.5, 0.9}) CHECK(kb::c_p_alpha(p, 0.0).value == doctest::Approx(1.0));
  CHECK(kb::c_p_alpha(1e-6, 1.0).value == doctest::Approx(1.0).epsilon(1e-4));
  const kb::Constant c = kb::c_p_alpha(0.5, 1.0);
  CHECK_FALSE(c.divergent);
  CHECK(std::isfinite(c.value));
  CHECK(c.value >= 1.0);
  CHECK(c.endpoint_exponent == doctest::Approx(2 * (1 - 4 / kPi)).epsilon(1e-12));
  CHECK(kb::c_p_alpha(0.9, 1.0).divergent);
}

TEST_CASE("divergence threshold in p") {
  CHECK(kb::divergence_threshold(1.0) == doctest::Approx(kPi / (kPi + 2 * (4 - kPi))));
  for (double a : {0.5, 1.0, 1.5})
    CHECK(std::abs(kb::divergence_threshold_bisect(a) - kb::divergence_threshold(a)) <= 1e-3);
}

TEST_CASE("radial p-lengths") {
  CHECK(kb::radial_p_length(WeightSpec::flat(1), 0.3).value == doctest::Approx(1.0));
  CHECK(kb::radial_p_length(WeightSpec::alpha_power(0.5, 2.0), 0.5).value ==
        doctest::Approx(std::sqrt(2.0) * kPi / 4).epsilon(1e-9));
  CHECK(kb::radial_p_length(WeightSpec::poincare_scaled(4), 0.5).divergent);
}

TEST_CASE("indicator integral identity") {
  DiskSampler rng(3);
  for (int k = 0; k < 100; ++k) {
    const Complex z = rng.point(0.95);
    REQUIRE(std::abs(kb::pk_integral(z) - kb::pk_closed(z)) <= 1e-6 * std::max(1.0, kb::pk_closed(z)));
  }
}

TEST_CASE("balayage bound for reproducing weights") {
  CHECK(kb::balayage_integral(WeightSpec::flat(1)) <= 1 + 1e-6);
  CHECK(kb::balayage_integral(WeightSpec::alpha_power(0.5, 2.0)) <= 1 + 1e-6);
}

TEST_CASE("containment") {
  const int n = 129;
  const double h = grid_spacing(n);
  const WeightSpec flat = WeightSpec::flat(1);
  const VerificationReport r = kb::containment_check(extract_domain(flat, 0.2, n), flat, 0.0);
  CHECK(r.passed());
  CHECK(std::abs(r.rows.back().residual) <= 2 * h);  // equality case

  const WeightSpec two = WeightSpec::alpha_power(0.5, 2.0);
  const VerificationReport s = kb::containment_check(extract_domain(two, 0.1, n), two, 0.5);
  CHECK(s.passed());
  CHECK(s.rows.back().residual < 0.0);

  // non-radial weight
  const WeightSpec off = mobius_pullback(WeightSpec::alpha_power(0.5, 2.0), {0.3, 0});
  CHECK_FALSE(kb::containment_check(extract_domain(off, 0.1, 65), off, 0.5).applicable);
  // alpha out of range, and a weight violating the curvature condition
  CHECK_FALSE(kb::containment_check(extract_domain(two, 0.1, 65), two, 2.0).applicable);
  const WeightSpec p = WeightSpec::alpha_power(1.0);
  CHECK_FALSE(kb::containment_check(extract_domain(p, 0.05, 65), p, 0.5).applicable);
}
