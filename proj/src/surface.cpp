#include "hslab/surface.hpp"

#include <boost/math/tools/roots.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hslab {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double clamp_gap(double s) {
  double x = 1.0 - s;
  return x <= kBoundaryEps ? 0.0 : x;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

// ---------------------------------------------------------------- table

WeightTable WeightTable::from_samples(int nx, int ny, std::vector<double> samples, std::string source) {
  if (nx < 4 || ny < 4) throw InvalidWeight("table needs at least 4x4 samples");
  if (static_cast<long>(samples.size()) != static_cast<long>(nx) * ny)
    throw InvalidWeight("table sample count does not match nx*ny");
  WeightTable t;
  t.nx = nx;
  t.ny = ny;
  t.source = std::move(source);
  const double dx = 2.0 / (nx - 1), dy = 2.0 / (ny - 1);
  auto at = [&](int i, int j) -> double& { return samples[static_cast<size_t>(j) * nx + i]; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double x = -1.0 + i * dx, y = -1.0 + j * dy;
      double v = at(i, j);
      if (x * x + y * y <= 1.0 + kBoundaryEps && !(std::isfinite(v) && v > 0.0))
        throw InvalidWeight("table sample at (" + num(x) + ", " + num(y) + ") is not strictly positive");
      if (x * x + y * y > 1.0 + kBoundaryEps && !std::isfinite(v)) at(i, j) = NAN;
    }

  // Ghost band outside the mask by linear extrapolation, so cells straddling the circle stay usable.
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<double> next = samples;
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (std::isfinite(at(i, j))) continue;
        double sum = 0.0;
        int cnt = 0;
        for (int d = 0; d < 4; ++d) {
          int i1 = i + di[d], j1 = j + dj[d], i2 = i + 2 * di[d], j2 = j + 2 * dj[d];
          if (i1 < 0 || i1 >= nx || j1 < 0 || j1 >= ny || !std::isfinite(at(i1, j1))) continue;
          bool has2 = i2 >= 0 && i2 < nx && j2 >= 0 && j2 < ny && std::isfinite(at(i2, j2));
          sum += has2 ? 2.0 * at(i1, j1) - at(i2, j2) : at(i1, j1);
          ++cnt;
        }
        if (cnt) next[static_cast<size_t>(j) * nx + i] = sum / cnt;
      }
    samples.swap(next);
  }
  t.f = samples;

  auto deriv = [&](const std::vector<double>& g, int i, int j, bool in_x) -> double {
    const int n_along = in_x ? nx : ny;
    const int k = in_x ? i : j;
    const double step = in_x ? dx : dy;
    auto val = [&](int kk) -> double {
      if (kk < 0 || kk >= n_along) return NAN;
      return in_x ? g[static_cast<size_t>(j) * nx + kk] : g[static_cast<size_t>(kk) * nx + i];
    };
    double c = val(k), p = val(k + 1), m = val(k - 1);
    if (!std::isfinite(c)) return NAN;
    if (std::isfinite(p) && std::isfinite(m)) return (p - m) / (2.0 * step);
    if (std::isfinite(p)) return (p - c) / step;
    if (std::isfinite(m)) return (c - m) / step;
    return 0.0;
  };
  const size_t total = static_cast<size_t>(nx) * ny;
  t.fx.assign(total, NAN);
  t.fy.assign(total, NAN);
  t.fxy.assign(total, NAN);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      t.fx[static_cast<size_t>(j) * nx + i] = deriv(t.f, i, j, true);
      t.fy[static_cast<size_t>(j) * nx + i] = deriv(t.f, i, j, false);
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) t.fxy[static_cast<size_t>(j) * nx + i] = deriv(t.fy, i, j, true);
  return t;
}

WeightTable WeightTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidWeight("cannot open weight table " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  for (char& ch : text)
    if (ch == ',' || ch == ';') ch = ' ';
  std::istringstream tokens(text);
  std::string tok;
  std::vector<double> vals;
  while (tokens >> tok) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw InvalidWeight("bad number '" + tok + "' in " + path);
    vals.push_back(v);
  }
  if (vals.size() < 2) throw InvalidWeight("weight table " + path + " lacks the nx, ny header");
  int nx = static_cast<int>(vals[0]), ny = static_cast<int>(vals[1]);
  return from_samples(nx, ny, std::vector<double>(vals.begin() + 2, vals.end()), path);
}

WeightTable::Eval WeightTable::eval(double x, double y) const {
  const double dx = 2.0 / (nx - 1), dy = 2.0 / (ny - 1);
  double gx = (x + 1.0) / dx, gy = (y + 1.0) / dy;
  int i = std::clamp(static_cast<int>(std::floor(gx)), 0, nx - 2);
  int j = std::clamp(static_cast<int>(std::floor(gy)), 0, ny - 2);
  double u = gx - i, v = gy - j;

  auto id = [&](int a, int b) { return static_cast<size_t>(j + b) * nx + (i + a); };
  // Hermite data per corner, derivatives scaled to the unit cell.
  double F[4][4];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      size_t k = id(a, b);
      F[a][b] = f[k];
      F[a][2 + b] = fy[k] * dy;
      F[2 + a][b] = fx[k] * dx;
      F[2 + a][2 + b] = fxy[k] * dx * dy;
    }
  for (auto& row : F)
    for (double e : row)
      if (!std::isfinite(e)) throw InvalidWeight("table weight evaluated outside its sampled region");
  static const double M[4][4] = {{1, 0, 0, 0}, {0, 0, 1, 0}, {-3, 3, -2, -1}, {2, -2, 1, 1}};
  double T[4][4] = {}, A[4][4] = {};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < 4; ++k) T[r][c] += M[r][k] * F[k][c];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < 4; ++k) A[r][c] += T[r][k] * M[c][k];

  double up[4] = {1, u, u * u, u * u * u}, vp[4] = {1, v, v * v, v * v * v};
  double dup[4] = {0, 1, 2 * u, 3 * u * u}, dvp[4] = {0, 1, 2 * v, 3 * v * v};
  double ddup[4] = {0, 0, 2, 6 * u}, ddvp[4] = {0, 0, 2, 6 * v};
  Eval e{0, 0, 0, 0, 0};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      e.v += A[r][c] * up[r] * vp[c];
      e.vx += A[r][c] * dup[r] * vp[c];
      e.vy += A[r][c] * up[r] * dvp[c];
      e.vxx += A[r][c] * ddup[r] * vp[c];
      e.vyy += A[r][c] * up[r] * ddvp[c];
    }
  e.vx /= dx;
  e.vy /= dy;
  e.vxx /= dx * dx;
  e.vyy /= dy * dy;
  return e;
}

// ---------------------------------------------------------------- weight spec

WeightSpec WeightSpec::flat(double c) {
  if (!(c > 0.0)) throw InvalidWeight("flat weight needs c > 0");
  return WeightSpec(Flat{c});
}
WeightSpec WeightSpec::poincare_scaled(double c) {
  if (!(c > 0.0)) throw InvalidWeight("poincare_scaled weight needs c > 0");
  return WeightSpec(PoincareScaled{c});
}
WeightSpec WeightSpec::alpha_power(double alpha, double scale) {
  if (!(scale > 0.0) || !std::isfinite(alpha)) throw InvalidWeight("alpha_power needs scale > 0");
  return WeightSpec(AlphaPower{alpha, scale});
}
WeightSpec WeightSpec::example7(double c, double alpha) {
  if (!(c > 0.0) || !(alpha > 0.0)) throw InvalidWeight("example7 needs c > 0 and alpha > 0");
  return WeightSpec(Example7{c, alpha});
}
WeightSpec WeightSpec::table(WeightTable t) {
  return WeightSpec(Table{std::make_shared<const WeightTable>(std::move(t))});
}

bool WeightSpec::radial() const {
  return std::visit(overloaded{[](const Table&) { return false; },
                               [](const Pullback& p) { return p.z0 == Complex(0.0) && p.base->radial(); },
                               [](const auto&) { return true; }},
                    family_);
}

double WeightSpec::profile(double s) const {
  const double x = clamp_gap(s);
  return std::visit(
      overloaded{[](const Flat& f) { return f.c; },
                 [&](const PoincareScaled& p) { return p.c / (x * x); },
                 [&](const AlphaPower& a) { return a.scale * std::pow(x, 2.0 * a.alpha); },
                 [&](const Example7& e) { return e.c / (x * x) + std::pow(x, 2.0 * e.alpha); },
                 [&](const Pullback& p) -> double {
                   if (!radial()) throw NotApplicable("weight is not radial");
                   return p.base->profile(s);
                 },
                 [](const Table&) -> double { throw NotApplicable("table weight is not radial"); }},
      family_);
}

double WeightSpec::profile_d1(double s) const {
  const double x = clamp_gap(s);
  return std::visit(
      overloaded{[](const Flat&) { return 0.0; },
                 [&](const PoincareScaled& p) { return 2.0 * p.c / (x * x * x); },
                 [&](const AlphaPower& a) { return -2.0 * a.alpha * a.scale * std::pow(x, 2.0 * a.alpha - 1.0); },
                 [&](const Example7& e) {
                   return 2.0 * e.c / (x * x * x) - 2.0 * e.alpha * std::pow(x, 2.0 * e.alpha - 1.0);
                 },
                 [&](const Pullback& p) -> double {
                   if (!radial()) throw NotApplicable("weight is not radial");
                   return p.base->profile_d1(s);
                 },
                 [](const Table&) -> double { throw NotApplicable("table weight is not radial"); }},
      family_);
}

double WeightSpec::profile_d2(double s) const {
  const double x = clamp_gap(s);
  return std::visit(
      overloaded{[](const Flat&) { return 0.0; },
                 [&](const PoincareScaled& p) { return 6.0 * p.c / (x * x * x * x); },
                 [&](const AlphaPower& a) {
                   return 2.0 * a.alpha * (2.0 * a.alpha - 1.0) * a.scale * std::pow(x, 2.0 * a.alpha - 2.0);
                 },
                 [&](const Example7& e) {
                   return 6.0 * e.c / (x * x * x * x) +
                          2.0 * e.alpha * (2.0 * e.alpha - 1.0) * std::pow(x, 2.0 * e.alpha - 2.0);
                 },
                 [&](const Pullback& p) -> double {
                   if (!radial()) throw NotApplicable("weight is not radial");
                   return p.base->profile_d2(s);
                 },
                 [](const Table&) -> double { throw NotApplicable("table weight is not radial"); }},
      family_);
}

double WeightSpec::value(Complex z) const {
  return std::visit(overloaded{[&](const Table& t) { return t.table->eval(z.real(), z.imag()).v; },
                               [&](const Pullback& p) {
                                 Complex d = mobius_d1(p.z0, z);
                                 return p.base->value(mobius(p.z0, z)) * std::norm(d);
                               },
                               [&](const auto&) { return profile(std::norm(z)); }},
                    family_);
}

Complex WeightSpec::dz(Complex z) const {
  return std::visit(overloaded{[&](const Table& t) {
                                 auto e = t.table->eval(z.real(), z.imag());
                                 return Complex(0.5 * e.vx, -0.5 * e.vy);
                               },
                               [&](const Pullback& p) {
                                 const Complex w = mobius(p.z0, z);
                                 const Complex q = 1.0 - std::conj(p.z0) * z;
                                 const Complex d1 = mobius_d1(p.z0, z);
                                 const Complex d2 = -2.0 * (1.0 - std::norm(p.z0)) * std::conj(p.z0) / (q * q * q);
                                 return p.base->dz(w) * d1 * std::norm(d1) + p.base->value(w) * d2 * std::conj(d1);
                               },
                               [&](const auto&) { return profile_d1(std::norm(z)) * std::conj(z); }},
                    family_);
}

double WeightSpec::lap_log(Complex z) const {
  const double s = std::norm(z);
  const double x = clamp_gap(s);
  return std::visit(
      overloaded{[](const Flat&) { return 0.0; },
                 [&](const PoincareScaled&) { return 2.0 / (x * x); },
                 [&](const AlphaPower& a) { return -2.0 * a.alpha / (x * x); },
                 [&](const Example7&) {
                   const double w0 = profile(s), w1 = profile_d1(s), w2 = profile_d2(s);
                   const double l1 = w1 / w0;
                   return l1 + s * (w2 / w0 - l1 * l1);
                 },
                 [&](const Table& t) {
                   auto e = t.table->eval(z.real(), z.imag());
                   return 0.25 * ((e.vxx + e.vyy) / e.v - (e.vx * e.vx + e.vy * e.vy) / (e.v * e.v));
                 },
                 [&](const Pullback& p) {
                   return std::norm(mobius_d1(p.z0, z)) * p.base->lap_log(mobius(p.z0, z));
                 }},
      family_);
}

std::string WeightSpec::id() const {
  return std::visit(
      overloaded{[](const Flat& f) { return "flat(c=" + num(f.c) + ")"; },
                 [](const PoincareScaled& p) { return "poincare_scaled(c=" + num(p.c) + ")"; },
                 [](const AlphaPower& a) {
                   return "alpha_power(alpha=" + num(a.alpha) + ",scale=" + num(a.scale) + ")";
                 },
                 [](const Example7& e) { return "example7(c=" + num(e.c) + ",alpha=" + num(e.alpha) + ")"; },
                 [](const Table& t) { return "table(" + t.table->source + ")"; },
                 [](const Pullback& p) {
                   return "pullback(" + p.base->id() + ",z0=" + num(p.z0.real()) + "," + num(p.z0.imag()) + ")";
                 }},
      family_);
}

// ---------------------------------------------------------------- free functions

double eval_weight(const WeightSpec& w, DiskPoint z) { return w.value(z.c()); }

double curvature(const WeightSpec& w, DiskPoint z) {
  const double v = w.value(z.c());
  if (!(v > 0.0)) throw InvalidWeight("weight is not positive at the evaluation point");
  return -2.0 * w.lap_log(z.c()) / v;
}

double hyperbolicity_margin(const WeightSpec& w, double alpha, DiskPoint z) {
  if (!z.interior()) throw DomainError("hyperbolicity margin needs an interior point");
  const double v = w.value(z.c());
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidWeight("weight is not positive at the evaluation point");
  const double x = one_minus_abs2(z.c());
  return w.lap_log(z.c()) + 2.0 * alpha / (x * x);
}

CurvatureReport curvature_report(const WeightSpec& w, double alpha, int m, double radius) {
  CurvatureReport r;
  r.m = m;
  r.radius = radius;
  r.alpha = alpha;
  r.kappa.assign(static_cast<size_t>(m) * m, NAN);
  r.margin.assign(static_cast<size_t>(m) * m, NAN);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const double x = -1.0 + 2.0 * i / (m - 1), y = -1.0 + 2.0 * j / (m - 1);
      if (x * x + y * y >= radius * radius) continue;
      DiskPoint z(x, y);
      const size_t k = static_cast<size_t>(j) * m + i;
      r.kappa[k] = curvature(w, z);
      r.margin[k] = hyperbolicity_margin(w, alpha, z);
      r.worst_margin = std::min(r.worst_margin, r.margin[k]);
    }
  return r;
}

double circle_expression(const WeightSpec& w, double s) {
  if (!w.radial()) throw NotApplicable("geodesic circles are only located for radial weights");
  return w.profile(s) + s * w.profile_d1(s);
}

std::vector<double> geodesic_circle_radii(const WeightSpec& w) {
  constexpr int kPanels = 10000;
  auto f = [&](double s) { return circle_expression(w, s); };
  std::vector<double> roots;
  double a = 0.0, fa = f(a);
  for (int k = 1; k <= kPanels; ++k) {
    double b = k < kPanels ? static_cast<double>(k) / kPanels : 1.0 - 1e-9;
    double fb = f(b);
    if (fa == 0.0) {
      if (a > 0.0) roots.push_back(a);
    } else if (std::isfinite(fa) && std::isfinite(fb) && (fa < 0.0) != (fb < 0.0) && fb != 0.0) {
      // Full precision, well past 1e-10: the outer circles are unstable and a shot from them
      // amplifies the seed error by about e^25 over one loop.
      auto br = boost::math::tools::bisect(f, a, b, boost::math::tools::eps_tolerance<double>());
      roots.push_back(0.5 * (br.first + br.second));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

std::vector<double> geodesic_circle_radii(double c, double alpha) {
  return geodesic_circle_radii(WeightSpec::example7(c, alpha));
}

Complex mobius(Complex z0, Complex z) { return (z0 - z) / (1.0 - std::conj(z0) * z); }

Complex mobius_d1(Complex z0, Complex z) {
  const Complex q = 1.0 - std::conj(z0) * z;
  return -(1.0 - std::norm(z0)) / (q * q);
}

WeightSpec mobius_pullback(const WeightSpec& w, DiskPoint z0) {
  if (!z0.interior()) throw DomainError("pull-back basepoint must be interior");
  return WeightSpec(WeightSpec::Pullback{std::make_shared<const WeightSpec>(w), z0.c()});
}

}  // namespace hslab
