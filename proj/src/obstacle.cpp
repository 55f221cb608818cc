#include "hslab/obstacle.hpp"

#include <Eigen/SparseCholesky>
#include <boost/math/tools/toms748_solve.hpp>
#include <cstdlib>

namespace hslab {
namespace {

struct LcpResult {
  std::vector<double> s;
  std::vector<uint8_t> active;
  long sweeps = 0;
  int iterations = 0;
  double residual = 0.0;
  double complementarity = 0.0;
  double scale = 1.0;
};

double boundary_sum(const DiskLaplacian& lap, int k, double b) {
  double s = 0.0;
  for (int dir = 0; dir < 4; ++dir)
    if (lap.neighbors(k)[dir] < 0) s += lap.coefficients(k)[dir] * b;
  return s;
}

// Active-set iteration: exact solve on the inactive set, obstacle on the active set.
void active_set_iterations(const DiskLaplacian& lap, const std::vector<double>& psi, double b,
                           std::vector<uint8_t>& active, std::vector<double>& s, const SolverOptions& o,
                           int& iterations) {
  const int m = lap.unknowns();
  double psi_scale = 1e-300;
  for (double v : psi)
    if (std::isfinite(v)) psi_scale = std::max(psi_scale, std::abs(v));
  for (int it = 0; it < o.max_active_iterations; ++it) {
    ++iterations;
    std::vector<uint8_t> inactive(m);
    for (int k = 0; k < m; ++k) inactive[k] = !active[k];
    std::vector<int> loc;
    Eigen::SparseMatrix<double> a = lap.negative_matrix(&inactive, &loc);
    for (int k = 0; k < m; ++k)
      if (active[k]) s[k] = psi[k];
    if (a.rows() > 0) {
      Eigen::VectorXd f(a.rows());
      for (int k = 0; k < m; ++k) {
        if (loc[k] < 0) continue;
        double r = boundary_sum(lap, k, b);
        for (int dir = 0; dir < 4; ++dir) {
          const int v = lap.neighbors(k)[dir];
          if (v >= 0 && active[v]) r += lap.coefficients(k)[dir] * psi[v];
        }
        f[loc[k]] = r;
      }
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
      if (ldlt.info() != Eigen::Success) throw SolverFailure("active-set factorization failed", NAN);
      Eigen::VectorXd x = ldlt.solve(f);
      for (int k = 0; k < m; ++k)
        if (loc[k] >= 0) s[k] = x[loc[k]];
    }
    double lam_scale = 1.0;
    std::vector<double> lam(m, 0.0);
    for (int k = 0; k < m; ++k)
      if (active[k]) {
        lam[k] = -lap.apply_row(k, s.data(), b) * lap.row_scale(k);
        lam_scale = std::max(lam_scale, std::abs(lam[k]));
      }
    bool changed = false;
    for (int k = 0; k < m; ++k) {
      if (!std::isfinite(psi[k])) continue;
      uint8_t next = active[k];
      if (active[k])
        next = lam[k] > -1e-11 * lam_scale;
      else
        next = s[k] < psi[k] - 1e-14 * psi_scale;
      if (next != active[k]) {
        active[k] = next;
        changed = true;
      }
    }
    if (!changed) return;
  }
}

LcpResult solve_lcp(const DiskLaplacian& lap, const std::vector<double>& psi, double b,
                    std::vector<uint8_t> active, const SolverOptions& o) {
  const int m = lap.unknowns();
  LcpResult r;
  r.s.assign(m, b);
  for (int k = 0; k < m; ++k) {
    if (!std::isfinite(psi[k])) active[k] = 0;
    if (std::isfinite(psi[k])) r.s[k] = psi[k];
  }
  if (o.active_set) active_set_iterations(lap, psi, b, active, r.s, o, r.iterations);
  for (int k = 0; k < m; ++k)
    if (std::isfinite(psi[k])) r.s[k] = std::max(r.s[k], psi[k]);

  std::vector<int> colors[2];
  for (int k = 0; k < m; ++k) colors[lap.color(k)].push_back(k);
  double scale = 1e-300;
  for (double v : r.s) scale = std::max(scale, std::abs(v));
  const double w = o.sor_factor;
  double upd = kInf;
  while (true) {
    if (r.sweeps >= o.max_sweeps)
      throw SolverFailure("projected SOR hit the sweep cap", upd / scale);
    ++r.sweeps;
    upd = 0.0;
    for (auto& list : colors)
      for (int k : list) {
        double off = 0.0;
        for (int dir = 0; dir < 4; ++dir) {
          const int v = lap.neighbors(k)[dir];
          off += lap.coefficients(k)[dir] * (v >= 0 ? r.s[v] : b);
        }
        const double gs = -off / lap.diagonal(k);
        double next = r.s[k] + w * (gs - r.s[k]);
        if (std::isfinite(psi[k])) next = std::max(psi[k], next);
        upd = std::max(upd, std::abs(next - r.s[k]));
        r.s[k] = next;
      }
    if (upd <= o.update_tol * scale) break;
    if (r.sweeps % 64 == 0) {
      scale = 1e-300;
      for (double v : r.s) scale = std::max(scale, std::abs(v));
    }
  }
  r.residual = upd / scale;
  r.scale = scale;
  r.active.assign(m, 0);
  for (int k = 0; k < m; ++k) {
    const double lam = -lap.apply_row(k, r.s.data(), b) * lap.row_scale(k);
    double c;
    if (std::isfinite(psi[k])) {
      const double gap = r.s[k] - psi[k];
      c = std::min(gap, lam);
      r.active[k] = gap <= 0.0;
    } else {
      c = lam;
    }
    r.complementarity = std::max(r.complementarity, std::abs(c));
  }
  return r;
}

// Fine-grid active flags from the coarse solution (n_f = 2 n_c - 1).
std::vector<uint8_t> prolong_active(const DiskLaplacian& coarse, const std::vector<uint8_t>& ac,
                                    const DiskLaplacian& fine) {
  std::vector<uint8_t> af(fine.unknowns(), 0);
  const int nf = fine.n(), nc = coarse.n();
  for (int k = 0; k < fine.unknowns(); ++k) {
    const int I = static_cast<int>(fine.node(k) % nf), J = static_cast<int>(fine.node(k) / nf);
    const int i0 = I / 2, i1 = (I + 1) / 2, j0 = J / 2, j1 = (J + 1) / 2;
    bool all = true;
    for (int i : {i0, i1})
      for (int j : {j0, j1}) {
        const int c = coarse.unknown(static_cast<size_t>(j) * nc + i);
        if (c >= 0 && !ac[c]) all = false;
      }
    af[k] = all;
  }
  return af;
}

std::vector<int> level_sizes(int n, int coarsest) {
  std::vector<int> sizes{n};
  while ((sizes.back() - 1) % 2 == 0 && (sizes.back() + 1) / 2 >= coarsest) sizes.push_back((sizes.back() + 1) / 2);
  std::reverse(sizes.begin(), sizes.end());
  return sizes;
}

GridField to_grid(const DiskLaplacian& lap, const std::vector<double>& u, double fixed) {
  GridField g = GridField::zeros(lap.n());
  for (size_t idx = 0; idx < g.values.size(); ++idx)
    if (g.mask[idx]) g.values[idx] = fixed;
  for (int k = 0; k < lap.unknowns(); ++k) g.values[lap.node(k)] = u[k];
  return g;
}

MajorantResult to_result(const DiskLaplacian& lap, const LcpResult& r, const std::vector<double>& psi, double b) {
  MajorantResult out;
  out.value = to_grid(lap, r.s, b);
  out.obstacle = to_grid(lap, psi, b);
  out.sweeps = r.sweeps;
  out.active_iterations = r.iterations;
  out.residual = r.residual;
  out.complementarity = r.complementarity;
  out.scale = r.scale;
  out.active = r.active;
  return out;
}

}  // namespace

MajorantResult superharmonic_majorant(const GridField& obstacle, const SolverOptions& o, double b) {
  const std::vector<int> sizes = o.active_set ? level_sizes(obstacle.n, o.coarsest) : std::vector<int>{obstacle.n};
  std::unique_ptr<DiskLaplacian> prev;
  std::vector<uint8_t> active;
  LcpResult r;
  std::vector<double> psi;
  for (size_t l = 0; l < sizes.size(); ++l) {
    auto lap = std::make_unique<DiskLaplacian>(sizes[l]);
    const int stride = (obstacle.n - 1) / (sizes[l] - 1);
    psi.assign(lap->unknowns(), 0.0);
    for (int k = 0; k < lap->unknowns(); ++k) {
      const int i = static_cast<int>(lap->node(k) % sizes[l]), j = static_cast<int>(lap->node(k) / sizes[l]);
      const double v = obstacle.at(i * stride, j * stride);
      if (std::isnan(v)) throw DomainError("obstacle is NaN on the mask");
      psi[k] = v;
    }
    active = prev ? prolong_active(*prev, r.active, *lap) : std::vector<uint8_t>(lap->unknowns(), 0);
    SolverOptions lo = o;
    r = solve_lcp(*lap, psi, b, active, lo);
    if (l + 1 == sizes.size()) return to_result(*lap, r, psi, b);
    prev = std::move(lap);
  }
  throw SolverFailure("no grid levels", NAN);
}

GridField build_vt(const WeightSpec& w, double t, int n) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  return FlowSolver(w, n).potential(t);
}

// ---------------------------------------------------------------- FlowSolver

FlowSolver::FlowSolver(const WeightSpec& w, int n, SolverOptions opts) : w_(w), n_(n), opts_(opts) {
  const std::vector<int> sizes = opts_.active_set ? level_sizes(n, opts_.coarsest) : std::vector<int>{n};
  for (int m : sizes) {
    Level lv;
    lv.lap = std::make_unique<DiskLaplacian>(m);
    const DiskLaplacian& lap = *lv.lap;
    const double h = lap.h();
    std::vector<double> rhs(lap.unknowns());
    lv.log_abs2.resize(lap.unknowns());
    for (int k = 0; k < lap.unknowns(); ++k) {
      const size_t idx = lap.node(k);
      const Complex z(-1.0 + static_cast<double>(idx % m) * h, -1.0 + static_cast<double>(idx / m) * h);
      rhs[k] = w_.value(z);
      if (!(std::isfinite(rhs[k]) && rhs[k] >= 0.0))
        throw InvalidWeight("weight " + w_.id() + " is not finite and nonnegative at a grid node");
      lv.log_abs2[k] = k == lap.origin_unknown() ? -kInf : std::log(std::norm(z));
    }
    lv.u_omega = lap.solve(rhs, 0.0, nullptr);
    levels_.push_back(std::move(lv));
  }
}

std::vector<double> FlowSolver::obstacle(const Level& lv, double t) const {
  std::vector<double> psi(lv.u_omega.size());
  for (size_t k = 0; k < psi.size(); ++k)
    psi[k] = std::isfinite(lv.log_abs2[k]) ? t * lv.log_abs2[k] - lv.u_omega[k] : -kInf;
  return psi;
}

GridField FlowSolver::potential(double t) const {
  const Level& lv = levels_.back();
  return to_grid(*lv.lap, obstacle(lv, t), 0.0);
}

MajorantResult FlowSolver::majorant(double t, const std::vector<uint8_t>* warm) const {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  const Level& fine = levels_.back();
  if (warm) {
    if (static_cast<int>(warm->size()) != fine.lap->unknowns()) throw DomainError("warm start has the wrong size");
    std::vector<double> psi = obstacle(fine, t);
    return to_result(*fine.lap, solve_lcp(*fine.lap, psi, 0.0, *warm, opts_), psi, 0.0);
  }
  LcpResult r;
  std::vector<double> psi;
  for (size_t l = 0; l < levels_.size(); ++l) {
    const Level& lv = levels_[l];
    psi = obstacle(lv, t);
    std::vector<uint8_t> active =
        l == 0 ? std::vector<uint8_t>(lv.lap->unknowns(), 0) : prolong_active(*levels_[l - 1].lap, r.active, *lv.lap);
    r = solve_lcp(*lv.lap, psi, 0.0, std::move(active), opts_);
  }
  return to_result(*fine.lap, r, psi, 0.0);
}

FlowSnapshot FlowSolver::snapshot(double t, const std::vector<uint8_t>* warm, std::vector<uint8_t>* active_out) const {
  MajorantResult m = majorant(t, warm);
  if (active_out) *active_out = m.active;
  return make_snapshot(w_, t, m);
}

// ---------------------------------------------------------------- snapshots

DomainGeometry FlowSnapshot::geometry() const {
  DomainGeometry g;
  g.n = n;
  g.h = h;
  g.eps = eps_detach;
  g.member = membership;
  g.gap = detach_gap.values;
  return g;
}

FlowSnapshot make_snapshot(const WeightSpec& w, double t, const MajorantResult& m) {
  FlowSnapshot s;
  s.t = t;
  s.n = m.value.n;
  s.h = m.value.h;
  s.eps_detach = s.h * s.h;
  s.sweeps = m.sweeps;
  s.active_iterations = m.active_iterations;
  s.residual = m.residual;
  s.complementarity = m.complementarity;
  s.weight_id = w.id();
  s.detach_gap = m.value;
  s.membership.assign(m.value.values.size(), 0);
  for (size_t idx = 0; idx < s.membership.size(); ++idx) {
    if (!m.value.mask[idx]) continue;
    const double psi = m.obstacle.values[idx];
    const double gap = std::isfinite(psi) ? m.value.values[idx] - psi : kInf;
    s.detach_gap.values[idx] = gap;
    s.membership[idx] = gap > s.eps_detach;
  }
  // resolvability: every node within h of the origin must be in the domain
  bool any = false;
  for (int j = 0; j < s.n; ++j)
    for (int i = 0; i < s.n; ++i) {
      const size_t idx = m.value.index(i, j);
      const double r = std::abs(m.value.z(i, j));
      if (r <= s.h * 1.000001 && !s.membership[idx])
        throw EmptyDomain("D(t) at t = " + std::to_string(t) + " is below grid resolution; use a larger t or finer grid");
      if (s.membership[idx] && r > s.h * 1.000001) any = true;
    }
  if (!any)
    throw EmptyDomain("D(t) at t = " + std::to_string(t) + " is below grid resolution; use a larger t or finer grid");
  DomainGeometry g = s.geometry();
  s.loops = boundary_loops(g);
  double best = -1.0;
  for (const Polyline& p : s.loops)
    if (std::abs(signed_area(p)) > best) {
      best = std::abs(signed_area(p));
      s.boundary = p;
    }
  s.area_omega = integrate_domain(g, [&](Complex z) { return w.value(z); });
  return s;
}

FlowSnapshot extract_domain(const WeightSpec& w, double t, int n) { return FlowSolver(w, n).snapshot(t); }

// ---------------------------------------------------------------- termination time

namespace {

class MarginProbe {
 public:
  explicit MarginProbe(const FlowSolver& s) : s_(s) {}

  double operator()(double t) {
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second.margin;
    const std::vector<uint8_t>* warm = nullptr;
    double best = kInf;
    for (auto& kv : cache_) {
      const double d = std::abs(std::log(kv.first / t));
      if (d < best && d < 0.02 && !kv.second.active.empty()) {
        best = d;
        warm = &kv.second.active;
      }
    }
    Entry e;
    try {
      FlowSnapshot snap = s_.snapshot(t, warm, &e.active);
      double r = 0.0;
      for (const Polyline& p : snap.loops)
        for (Complex v : p) r = std::max(r, std::abs(v));
      e.margin = 1.0 - r;
    } catch (const EmptyDomain&) {
      e.margin = 1.0;
    }
    ++evaluations;
    return cache_.emplace(t, std::move(e)).first->second.margin;
  }

  int evaluations = 0;

 private:
  struct Entry {
    double margin = 0.0;
    std::vector<uint8_t> active;
  };
  const FlowSolver& s_;
  std::map<double, Entry> cache_;
};

// Exit time for margin m: returns +inf when D(t) stays inside up to t_max.
// (1 - margin)^2 is close to linear in t, which keeps the bracketing solver short.
double exit_time(MarginProbe& probe, double m, const TerminationOptions& o, double guess) {
  auto g = [&](double t) {
    const double d = std::min(probe(t), 1.0);
    if (std::abs(d - m) <= 5e-4 * m) return 0.0;  // margin matched; the root is resolved
    return (1.0 - m) * (1.0 - m) - (1.0 - d) * (1.0 - d);
  };
  double lo, hi;
  if (guess > 0.0 && std::isfinite(guess)) {
    // coarse-grid guesses are usually within 1e-4, so try a bracket already narrow enough first
    double step = 1.0 + 0.4 * o.rel_width;
    guess = std::min(guess, o.t_max);
    lo = guess / step;
    hi = std::min(guess * step, o.t_max);
    if (g(lo) > 0.0) {
      while (g(hi) > 0.0) {
        lo = hi;
        if (hi >= o.t_max) return kInf;
        step *= step;
        hi = std::min(hi * step, o.t_max);
      }
    } else {
      while (!(g(lo) > 0.0)) {
        hi = lo;
        step *= step;
        lo /= step;
        if (lo < 1e-9) return 0.0;
      }
    }
  } else {
    lo = 0.05;
    while (!(g(lo) > 0.0)) {
      lo *= 0.25;
      if (lo < 1e-9) return 0.0;
    }
    hi = lo * 2.0;
    while (g(hi) > 0.0) {
      lo = hi;
      if (hi >= o.t_max) return kInf;
      hi = std::min(hi * 2.0, o.t_max);
    }
  }
  auto tol = [&](double a, double b) { return b - a <= o.rel_width * a; };
  if (tol(lo, hi)) return 0.5 * (lo + hi);
  std::uintmax_t iters = 64;
  auto br = boost::math::tools::toms748_solve(g, lo, hi, g(lo), g(hi), tol, iters);
  return 0.5 * (br.first + br.second);
}

}  // namespace

TerminationEstimate termination_time(const FlowSolver& solver, const TerminationOptions& o) {
  TerminationEstimate est;
  const double h = solver.h();
  // The coarse estimate both brackets the fine search and tests for divergence under refinement.
  TerminationEstimate coarse;
  const int nc = (solver.n() + 1) / 2;
  const bool refine = o.refinement_test && (solver.n() - 1) % 2 == 0 && nc >= 33;
  if (refine) {
    TerminationOptions co = o;
    co.refinement_test = false;
    coarse = termination_time(FlowSolver(solver.weight(), nc), co);
    est.coarse_value = coarse.infinite ? kInf : coarse.value;
    est.evaluations += coarse.evaluations;
  }
  MarginProbe probe(solver);
  const bool have = refine && !coarse.infinite;
  est.t_margin_2h = exit_time(probe, 2.0 * h, o, have ? 0.5 * (coarse.t_margin_2h + coarse.value) : -1.0);
  if (std::isinf(est.t_margin_2h)) {
    est.infinite = true;
    est.evaluations += probe.evaluations;
    est.note = "D(t) stays inside the disk up to t_max";
    return est;
  }
  est.t_margin_4h = exit_time(probe, 4.0 * h, o, have ? coarse.t_margin_2h : -1.0);
  est.value = 2.0 * est.t_margin_2h - est.t_margin_4h;
  est.evaluations += probe.evaluations;
  est.note = "extrapolated from margins 2h and 4h";
  if (refine && (coarse.infinite || est.value >= o.divergence_ratio * coarse.value)) {
    est.infinite = true;
    est.note = "exit time grows under grid refinement (n = " + std::to_string(nc) + " -> " +
               std::to_string(solver.n()) + ")";
  }
  return est;
}

TerminationEstimate termination_time(const WeightSpec& w, int n, const TerminationOptions& o) {
  return termination_time(FlowSolver(w, n), o);
}

}  // namespace hslab
