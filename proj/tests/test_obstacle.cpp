#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hslab/kernels.hpp"
#include "hslab/laplacian.hpp"
#include "hslab/obstacle.hpp"

using namespace hslab;

namespace {

GridField field(int n, double (*f)(Complex)) {
  GridField g = GridField::zeros(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (g.mask[g.index(i, j)]) g.at(i, j) = f(g.z(i, j));
  return g;
}

double max_error(const GridField& u, double (*exact)(Complex)) {
  double e = 0.0;
  for (int j = 0; j < u.n; ++j)
    for (int i = 0; i < u.n; ++i)
      if (u.mask[u.index(i, j)]) e = std::max(e, std::abs(u.at(i, j) - exact(u.z(i, j))));
  return e;
}

}  // namespace

TEST_CASE("grid basics") {
  const GridField g = GridField::zeros(33);
  CHECK(g.h == doctest::Approx(2.0 / 32));
  CHECK(g.mask[g.index(16, 16)]);
  CHECK_FALSE(g.mask[g.index(0, 0)]);
  CHECK(g.mask[g.index(0, 16)]);  // (-1, 0) lies on the circle
}

TEST_CASE("poisson solve reproduces radial solutions to second order") {
  auto one = [](Complex) { return 1.0; };
  auto exact_one = [](Complex z) { return std::norm(z) - 1.0; };
  auto bump = [](Complex z) { return 1.0 - std::norm(z); };
  auto exact_bump = [](Complex z) {
    const double s = std::norm(z);
    return s - 0.25 * s * s - 0.75;
  };
  double prev = 0.0;
  for (int n : {33, 65, 129}) {
    const double h = grid_spacing(n);
    const double e1 = max_error(poisson_solve(field(n, one)), exact_one);
    const double e2 = max_error(poisson_solve(field(n, bump)), exact_bump);
    CHECK(e1 <= 0.5 * h * h);
    CHECK(e2 <= 0.5 * h * h);
    if (prev > 0) CHECK(prev / e1 >= 3.0);
    prev = e1;
  }
  const GridField zero = poisson_solve(field(65, [](Complex) { return 0.0; }));
  CHECK(max_error(zero, [](Complex) { return 0.0; }) == 0.0);
}

TEST_CASE("V_t for the flat weight") {
  const int n = 65;
  const GridField v = build_vt(WeightSpec::flat(1), 0.3, n);
  const GridField v2 = build_vt(WeightSpec::flat(1), 0.6, n);
  const double h = v.h;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const size_t k = v.index(i, j);
      if (!v.mask[k]) continue;
      const Complex z = v.z(i, j);
      const double s = std::norm(z);
      if (s == 0.0) {
        CHECK(v.values[k] == -kInf);
        continue;
      }
      CHECK(std::abs(v.values[k] - (0.3 * std::log(s) + 1 - s)) <= 0.5 * h * h);
      // linear in t with slope G(z, 0)
      CHECK(std::abs((v2.values[k] - v.values[k]) / 0.3 - std::log(s)) <= 1e-12);
      if (std::abs(std::sqrt(s) - 1.0) < 1e-12) CHECK(std::abs(v.values[k]) < 1e-12);
    }
}

TEST_CASE("majorant of a superharmonic obstacle is the obstacle") {
  const GridField c = field(33, [](Complex) { return 0.0; });
  const MajorantResult m = superharmonic_majorant(c);
  CHECK(max_error(m.value, [](Complex) { return 0.0; }) <= 1e-14);

  // -|z|^2 + 1 is superharmonic with zero boundary values
  const GridField d = field(65, [](Complex z) { return 1.0 - std::norm(z); });
  CHECK(max_error(superharmonic_majorant(d).value, [](Complex z) { return 1.0 - std::norm(z); }) <= 1e-12);
}

TEST_CASE("flat majorant has the smooth-fit plateau") {
  const int n = 129;
  const double t = 0.25;
  const MajorantResult m = superharmonic_majorant(build_vt(WeightSpec::flat(1), t, n));
  const double plateau = t * std::log(t) + 1 - t;
  CHECK(plateau == doctest::Approx(0.403426).epsilon(1e-6));
  double err = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const size_t k = m.value.index(i, j);
      if (!m.value.mask[k]) continue;
      const double r = std::abs(m.value.z(i, j));
      const double exact = r <= 0.5 ? plateau : t * std::log(r * r) + 1 - r * r;
      err = std::max(err, std::abs(m.value.values[k] - exact));
    }
  CHECK(err <= m.value.h * m.value.h);
  CHECK(m.complementarity <= 1e-8 * m.scale);
}

TEST_CASE("majorant is monotone in the obstacle") {
  const int n = 65;
  const GridField lo = build_vt(WeightSpec::flat(0.8), 0.2, n), hi = build_vt(WeightSpec::flat(1), 0.2, n);
  const MajorantResult a = superharmonic_majorant(hi), b = superharmonic_majorant(lo);
  for (size_t k = 0; k < a.value.values.size(); ++k) {
    if (!a.value.mask[k] || !std::isfinite(lo.values[k])) continue;
    REQUIRE(lo.values[k] <= hi.values[k]);
    CHECK(b.value.values[k] <= a.value.values[k] + 1e-12);
  }
}

TEST_CASE("projected SOR agrees with the active-set solver") {
  for (int n : {33, 65}) {
    const GridField obstacle = build_vt(WeightSpec::alpha_power(0.5, 2.0), 0.3, n);
    SolverOptions sor;
    sor.active_set = false;
    const MajorantResult a = superharmonic_majorant(obstacle);
    const MajorantResult b = superharmonic_majorant(obstacle, sor);
    double diff = 0.0;
    for (size_t k = 0; k < a.value.values.size(); ++k)
      if (a.value.mask[k] && std::isfinite(a.value.values[k]))
        diff = std::max(diff, std::abs(a.value.values[k] - b.value.values[k]));
    CHECK(diff <= 1e-9);
    CHECK(b.sweeps > a.sweeps);
  }
}

TEST_CASE("sweep cap raises a solver failure") {
  SolverOptions o;
  o.active_set = false;
  o.max_sweeps = 3;
  CHECK_THROWS_AS(superharmonic_majorant(build_vt(WeightSpec::flat(1), 0.3, 65), o), SolverFailure);
}

TEST_CASE("flat domain is the disk of radius sqrt(t)") {
  const int n = 257;
  const FlowSnapshot s = extract_domain(WeightSpec::flat(1), 0.25, n);
  CHECK(s.eps_detach == doctest::Approx(s.h * s.h));
  CHECK(hausdorff_to_circle(s.boundary, 0.5) <= 2 * s.h);
  CHECK(std::abs(s.area_omega - 0.25) <= 5 * s.h * 0.25);
  CHECK(s.loops.size() == 1);
}

TEST_CASE("domains increase with t") {
  const FlowSolver solver(WeightSpec::alpha_power(0.5, 2.0), 65);
  const FlowSnapshot a = solver.snapshot(0.2), b = solver.snapshot(0.5);
  for (size_t k = 0; k < a.membership.size(); ++k)
    if (a.membership[k]) CHECK(b.membership[k]);
}

TEST_CASE("unresolvable t is an empty domain") {
  CHECK_THROWS_AS(extract_domain(WeightSpec::flat(1), 1e-6, 33), EmptyDomain);
}

TEST_CASE("termination times") {
  const TerminationEstimate f = termination_time(WeightSpec::flat(4), 129);
  CHECK_FALSE(f.infinite);
  CHECK(std::abs(f.value - 4.0) <= 1e-2 * 4.0);
  const TerminationEstimate p = termination_time(WeightSpec::poincare_scaled(4), 129);
  CHECK(p.infinite);
}
