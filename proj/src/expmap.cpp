#include "hslab/expmap.hpp"

#include <algorithm>
#include <numeric>

#include "hslab/contour.hpp"

namespace hslab {

namespace {

double wrap(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Polyline resample(const Polyline& p, int m) {
  const size_t k = p.size();
  std::vector<double> acc(k + 1, 0.0);
  for (size_t i = 0; i < k; ++i) acc[i + 1] = acc[i] + std::abs(p[(i + 1) % k] - p[i]);
  const double len = acc[k];
  Polyline out(m);
  size_t seg = 0;
  for (int j = 0; j < m; ++j) {
    const double s = len * j / m;
    while (seg + 1 < k && acc[seg + 1] < s) ++seg;
    const double d = acc[seg + 1] - acc[seg];
    const double f = d > 0.0 ? (s - acc[seg]) / d : 0.0;
    out[j] = p[seg] + f * (p[(seg + 1) % k] - p[seg]);
  }
  return out;
}

Complex tangent(const Polyline& p, size_t seg) {
  const size_t m = p.size();
  const Complex d = p[(seg + 1) % m] - p[(seg + m - 1) % m] + p[(seg + 2) % m] - p[seg];
  return d / std::abs(d);
}

}  // namespace

Polyline smooth_loop(const Polyline& p, int modes, int samples) {
  if (p.size() < 3) throw ChartBuildError("boundary loop has fewer than three vertices");
  const int m = 1024;
  const Polyline q = resample(p, m);
  std::vector<Complex> coef(2 * modes + 1);
  for (int k = -modes; k <= modes; ++k) {
    Complex c = 0.0;
    for (int j = 0; j < m; ++j) c += q[j] * std::polar(1.0, -2.0 * kPi * k * j / m);
    coef[k + modes] = c / static_cast<double>(m);
  }
  Polyline out(samples);
  for (int j = 0; j < samples; ++j) {
    Complex z = 0.0;
    for (int k = -modes; k <= modes; ++k) z += coef[k + modes] * std::polar(1.0, 2.0 * kPi * k * j / samples);
    out[j] = z;
  }
  return out;
}

ChartBuilder::ChartBuilder(const WeightSpec& w, DiskPoint z0, int n, int smoothing_modes, SolverOptions opts)
    : w_(w), local_(z0.abs2() == 0.0 ? w : mobius_pullback(w, z0)), z0_(z0.c()), n_(n), modes_(smoothing_modes) {
  if (!z0.interior()) throw DomainError("basepoint must be interior");
  solver_ = std::make_unique<FlowSolver>(local_, n, opts);
}

const ChartBuilder::Ring& ChartBuilder::ring(double r) {
  auto it = cache_.find(r);
  if (it != cache_.end()) return it->second;
  const FlowSnapshot s = solver_->snapshot(r * r);
  Ring ring;
  ring.raw = s.boundary;
  ring.smooth = smooth_loop(s.boundary, modes_);
  return cache_.emplace(r, std::move(ring)).first->second;
}

ExpMapChart ChartBuilder::build(double r_max, int n_r, int n_theta, double angle_offset, double seed_radius) {
  if (!(r_max > 0.0 && r_max < 1e3) || n_r < 2 || n_theta < 3)
    throw DomainError("chart needs r_max > 0, at least two rings and three angles");
  ExpMapChart c;
  c.z0 = z0_;
  c.n = n_;
  c.h = grid_spacing(n_);
  c.weight_id = w_.id();
  c.omega0 = local_.value(0.0);
  const bool pulled = std::norm(z0_) != 0.0;
  for (int i = 1; i <= n_r; ++i) c.radii.push_back(r_max * i / n_r);
  for (int j = 0; j < n_theta; ++j) {
    c.angles.push_back(angle_offset + 2.0 * kPi * j / n_theta);
    c.local_angles.push_back(c.angles.back() + (pulled ? kPi : 0.0));
  }
  const double scale = 1.0 / std::sqrt(c.omega0);

  std::vector<Complex> cur(n_theta);
  for (int i = 0; i < n_r; ++i) {
    const Ring& rg = ring(c.radii[i]);
    c.boundaries.push_back(rg.raw);
    c.smoothed.push_back(rg.smooth);
    std::vector<Complex> next(n_theta);
    std::vector<double> dist(n_theta);
    for (int j = 0; j < n_theta; ++j) {
      const bool seeded = i == 0 || c.radii[i] <= seed_radius * (1.0 + 1e-12);
      const Complex from = seeded ? scale * std::polar(c.radii[i], c.local_angles[j]) : cur[j];
      next[j] = nearest_point(rg.smooth, from, &dist[j]);
    }
    if (i > 0 && c.radii[i] > seed_radius * (1.0 + 1e-12)) {
      std::vector<double> sorted = dist;
      std::nth_element(sorted.begin(), sorted.begin() + n_theta / 2, sorted.end());
      const double typical = sorted[n_theta / 2];
      for (int j = 0; j < n_theta; ++j)
        if (dist[j] > 4.0 * typical + 2.0 * c.h)
          throw ChartBuildError("trajectory lost at ring " + std::to_string(i) + ", angle " +
                                std::to_string(c.angles[j]));
    }
    c.local.push_back(next);
    cur = next;
  }

  for (int i = 0; i < n_r; ++i) {
    std::vector<Complex> ring_pts(n_theta);
    std::vector<double> ortho(n_theta, NAN);
    for (int j = 0; j < n_theta; ++j) {
      ring_pts[j] = pulled ? mobius(z0_, c.local[i][j]) : c.local[i][j];
      if (i > 0 && i + 1 < n_r) {
        size_t seg = 0;
        nearest_point(c.smoothed[i], c.local[i][j], nullptr, &seg);
        const Complex dir = c.local[i + 1][j] - c.local[i - 1][j];
        const Complex tan = tangent(c.smoothed[i], seg);
        ortho[j] = std::abs(std::arg(dir / tan)) * 180.0 / kPi;
      }
    }
    c.points.push_back(ring_pts);
    c.orthogonality.push_back(ortho);
  }
  return c;
}

ExpMapChart build_chart(const WeightSpec& w, DiskPoint z0, double r_max, int n_r, int n_theta, int n) {
  return ChartBuilder(w, z0, n).build(r_max, n_r, n_theta);
}

namespace {

// Least-squares a + b zeta through the given samples.
std::pair<Complex, Complex> linear_fit(const std::vector<Complex>& zeta, const std::vector<Complex>& val) {
  Complex s1 = 0.0, sz = 0.0, sv = 0.0, szv = 0.0;
  double szz = 0.0;
  for (size_t k = 0; k < zeta.size(); ++k) {
    s1 += 1.0;
    sz += zeta[k];
    sv += val[k];
    szz += std::norm(zeta[k]);
    szv += std::conj(zeta[k]) * val[k];
  }
  // [n, sz; conj(sz), szz] [a; b] = [sv; szv]
  const Complex det = s1 * szz - sz * std::conj(sz);
  const Complex a = (szz * sv - sz * szv) / det;
  const Complex b = (s1 * szv - std::conj(sz) * sv) / det;
  return {a, b};
}

}  // namespace

VerificationReport chart_checks(const ExpMapChart& c, const WeightSpec& w) {
  VerificationReport r;
  r.subject = "exponential chart for " + w.id();
  const int nr = static_cast<int>(c.radii.size()), nt = static_cast<int>(c.angles.size());

  double on_ring = 0.0;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) {
      double d = 0.0;
      nearest_point(c.boundaries[i], c.local[i][j], &d);
      on_ring = std::max(on_ring, d);
    }
  r.add("ring_on_boundary", on_ring, 2.0 * c.h, c.n, c.h);

  double ortho = 0.0;
  for (const auto& ring : c.orthogonality)
    for (double a : ring)
      if (!std::isnan(a)) ortho = std::max(ortho, std::abs(a - 90.0));
  r.add("orthogonality_deg", ortho, 1.0, c.n, c.h);

  std::vector<Complex> zeta, val, zeta_o, val_o;
  for (int i = 0; i < std::min(2, nr); ++i)
    for (int j = 0; j < nt; ++j) {
      zeta.push_back(std::polar(c.radii[i], c.local_angles[j]));
      val.push_back(c.local[i][j]);
      zeta_o.push_back(std::polar(c.radii[i], c.angles[j]));
      val_o.push_back(c.points[i][j]);
    }
  const double expected = 1.0 / std::sqrt(c.omega0);
  const auto [a_loc, b_loc] = linear_fit(zeta, val);
  (void)a_loc;
  r.add("slope_rel_error", std::abs(std::abs(b_loc) - expected) / expected, 0.05, c.n, c.h).note =
      "slope " + std::to_string(std::abs(b_loc)) + ", expected " + std::to_string(expected);
  const auto [a_org, b_org] = linear_fit(zeta_o, val_o);
  (void)b_org;
  r.add("intercept", std::abs(a_org - c.z0), 2.0 * c.h, c.n, c.h);

  double dir = 0.0;
  for (int j = 0; j < nt; ++j)
    dir = std::max(dir, std::abs(wrap(std::arg(c.local[0][j]) - c.local_angles[j])) * 180.0 / kPi);
  r.add("initial_direction_deg", dir, 1.0, c.n, c.h);

  double crossings = 0.0;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) {
      const Complex a = c.local[i][j], b = c.local[i][(j + 1) % nt];
      if (std::abs(b - a) == 0.0 || wrap(std::arg(b) - std::arg(a)) <= 0.0) crossings += 1.0;
    }
  r.add("trajectory_crossings", crossings, 0.0, c.n, c.h);

  if (w.radial() && std::norm(c.z0) == 0.0) {
    double var = 0.0;
    for (int i = 0; i < nr; ++i) {
      double m = 0.0, m2 = 0.0;
      for (int j = 0; j < nt; ++j) {
        const double rad = std::abs(c.points[i][j]);
        m += rad;
        m2 += rad * rad;
      }
      m /= nt;
      var = std::max(var, m2 / nt - m * m);
    }
    r.add("ring_radial_variance", var, 4.0 * c.h * c.h, c.n, c.h);
  }
  return r;
}

ChartRefinement chart_refinement(ChartBuilder& b, double r_max, int n_r, int n_theta) {
  const double seed = r_max / n_r;
  const ExpMapChart c1 = b.build(r_max, n_r, n_theta, 0.0, seed);
  const ExpMapChart c2 = b.build(r_max, 2 * n_r, n_theta, 0.0, seed);
  const ExpMapChart c4 = b.build(r_max, 4 * n_r, n_theta, 0.0, seed);
  ChartRefinement out;
  for (int i = 0; i < n_r; ++i)
    for (int j = 0; j < n_theta; ++j) {
      out.e1 = std::max(out.e1, std::abs(c1.points[i][j] - c2.points[2 * i + 1][j]));
      out.e2 = std::max(out.e2, std::abs(c2.points[2 * i + 1][j] - c4.points[4 * i + 3][j]));
    }
  out.ratio = out.e2 > 0.0 ? out.e1 / out.e2 : kInf;
  return out;
}

nlohmann::json to_json(const ExpMapChart& c, const VerificationReport& checks) {
  nlohmann::json j;
  j["z0"] = {c.z0.real(), c.z0.imag()};
  j["radii"] = c.radii;
  j["angles"] = c.angles;
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& ring : c.points)
    for (Complex z : ring) pts.push_back({z.real(), z.imag()});
  j["points"] = pts;
  j["checks"] = to_json(checks);
  return j;
}

}  // namespace hslab
