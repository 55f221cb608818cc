#include "hslab/contour.hpp"

#include <array>
#include <unordered_map>

namespace hslab {

Complex DomainGeometry::crossing(size_t a, size_t b) const {
  const Complex za = node(a), zb = node(b);
  // sqrt(gap) is linear in the distance to the free boundary; extrapolate it from a and the node behind a.
  const long step = static_cast<long>(b) - static_cast<long>(a);
  const long back = static_cast<long>(a) - step;
  double d = 0.5;
  const double pa = std::sqrt(gap[a]);
  if (back >= 0 && back < static_cast<long>(gap.size()) && member[back] && std::isfinite(gap[back])) {
    const double pk = std::sqrt(gap[back]);
    if (pk > pa) d = pa / (pk - pa);
  }
  d = std::clamp(d, 0.0, 1.0);
  return za + d * (zb - za);
}

namespace {

struct Cell {
  std::array<size_t, 4> c;     // corners counter-clockwise from lower-left
  std::array<bool, 4> in;
  std::array<size_t, 4> edge;  // edge k joins corner k and k+1
};

Cell make_cell(const DomainGeometry& g, int i, int j) {
  const size_t n = g.n;
  Cell cell;
  cell.c = {j * n + i, j * n + i + 1, (j + 1) * n + i + 1, (j + 1) * n + i};
  for (int k = 0; k < 4; ++k) cell.in[k] = g.member[cell.c[k]] != 0;
  cell.edge = {2 * cell.c[0], 2 * cell.c[1] + 1, 2 * cell.c[3], 2 * cell.c[0] + 1};
  return cell;
}

Complex edge_point(const DomainGeometry& g, const Cell& cell, int k) {
  const size_t a = cell.c[k], b = cell.c[(k + 1) % 4];
  return cell.in[k] ? g.crossing(a, b) : g.crossing(b, a);
}

bool saddle_connected(const DomainGeometry& g, const Cell& cell) {
  double s = 0.0;
  for (size_t c : cell.c) s += std::isfinite(g.gap[c]) ? g.gap[c] : 1e300;
  return 0.25 * s > g.eps;
}

bool is_saddle(const Cell& cell) {
  return cell.in[0] == cell.in[2] && cell.in[1] == cell.in[3] && cell.in[0] != cell.in[1];
}

// Interface segments (start edge, end edge) of one cell.
std::vector<std::pair<int, int>> cell_segments(const DomainGeometry& g, const Cell& cell) {
  std::vector<int> outs, ins;
  for (int k = 0; k < 4; ++k) {
    const bool a = cell.in[k], b = cell.in[(k + 1) % 4];
    if (a && !b) outs.push_back(k);
    if (!a && b) ins.push_back(k);
  }
  std::vector<std::pair<int, int>> seg;
  if (outs.empty()) return seg;
  if (outs.size() == 1) {
    seg.emplace_back(outs[0], ins[0]);
    return seg;
  }
  const bool connected = saddle_connected(g, cell);
  for (int o : outs) {
    // following in-edge walks around a single non-member corner; preceding one cuts off the member corner
    const int next_in = (o + 1) % 4, prev_in = (o + 3) % 4;
    seg.emplace_back(o, connected ? next_in : prev_in);
  }
  return seg;
}

double tri_rule(const std::function<double(Complex)>& f, Complex a, Complex b, Complex c) {
  const double area = 0.5 * ((b - a).real() * (c - a).imag() - (b - a).imag() * (c - a).real());
  if (area == 0.0) return 0.0;
  return area * (f(0.5 * (a + b)) + f(0.5 * (b + c)) + f(0.5 * (c + a))) / 3.0;
}

double polygon_rule(const std::function<double(Complex)>& f, const Polyline& p) {
  double s = 0.0;
  for (size_t k = 1; k + 1 < p.size(); ++k) s += tri_rule(f, p[0], p[k], p[k + 1]);
  return s;
}

}  // namespace

std::vector<Polyline> boundary_loops(const DomainGeometry& g) {
  struct Seg {
    size_t from, to;
    Complex p;
  };
  std::unordered_map<size_t, Seg> by_start;
  for (int j = 0; j + 1 < g.n; ++j)
    for (int i = 0; i + 1 < g.n; ++i) {
      Cell cell = make_cell(g, i, j);
      if (!(cell.in[0] || cell.in[1] || cell.in[2] || cell.in[3])) continue;
      for (auto [a, b] : cell_segments(g, cell))
        by_start[cell.edge[a]] = Seg{cell.edge[a], cell.edge[b], edge_point(g, cell, a)};
    }
  // deterministic traversal order: smallest start edge first
  std::vector<size_t> starts;
  starts.reserve(by_start.size());
  for (auto& kv : by_start) starts.push_back(kv.first);
  std::sort(starts.begin(), starts.end());
  std::unordered_map<size_t, bool> used;
  std::vector<Polyline> loops;
  for (size_t s : starts) {
    if (used[s]) continue;
    Polyline loop;
    size_t e = s;
    while (!used[e]) {
      used[e] = true;
      auto it = by_start.find(e);
      if (it == by_start.end()) break;
      const Complex p = it->second.p;
      if (loop.empty() || std::abs(p - loop.back()) > 1e-12) loop.push_back(p);
      e = it->second.to;
    }
    if (loop.size() > 1 && std::abs(loop.front() - loop.back()) <= 1e-12) loop.pop_back();
    if (loop.size() >= 3) loops.push_back(std::move(loop));
  }
  return loops;
}

double integrate_domain(const DomainGeometry& g, const std::function<double(Complex)>& f) {
  const double h = g.h;
  const double gp = 0.5 / std::sqrt(3.0);
  double total = 0.0;
  for (int j = 0; j + 1 < g.n; ++j)
    for (int i = 0; i + 1 < g.n; ++i) {
      Cell cell = make_cell(g, i, j);
      const int cnt = cell.in[0] + cell.in[1] + cell.in[2] + cell.in[3];
      if (cnt == 0) continue;
      const Complex z0 = g.node(cell.c[0]);
      if (cnt == 4) {
        double s = 0.0;
        for (double a : {0.5 - gp, 0.5 + gp})
          for (double b : {0.5 - gp, 0.5 + gp}) s += f(z0 + Complex(a * h, b * h));
        total += 0.25 * s * h * h;
        continue;
      }
      if (is_saddle(cell) && !saddle_connected(g, cell)) {
        for (int k = 0; k < 4; ++k) {
          if (!cell.in[k]) continue;
          Polyline tri = {g.node(cell.c[k]), edge_point(g, cell, k), edge_point(g, cell, (k + 3) % 4)};
          total += polygon_rule(f, tri);
        }
        continue;
      }
      Polyline poly;
      for (int k = 0; k < 4; ++k) {
        const bool a = cell.in[k], b = cell.in[(k + 1) % 4];
        if (a) poly.push_back(g.node(cell.c[k]));
        if (a != b) poly.push_back(edge_point(g, cell, k));
      }
      total += polygon_rule(f, poly);
    }
  return total / kPi;
}

double signed_area(const Polyline& p) {
  double a = 0.0;
  for (size_t k = 0; k < p.size(); ++k) {
    const Complex u = p[k], v = p[(k + 1) % p.size()];
    a += u.real() * v.imag() - u.imag() * v.real();
  }
  return 0.5 * a;
}

Complex nearest_point(const Polyline& p, Complex q, double* distance, size_t* segment) {
  double best = kInf;
  Complex arg = q;
  size_t seg = 0;
  for (size_t k = 0; k < p.size(); ++k) {
    const Complex a = p[k], b = p[(k + 1) % p.size()];
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    double s = len2 > 0.0 ? ((q - a) * std::conj(ab)).real() / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    const Complex c = a + s * ab;
    const double d = std::abs(q - c);
    if (d < best) {
      best = d;
      arg = c;
      seg = k;
    }
  }
  if (distance) *distance = best;
  if (segment) *segment = seg;
  return arg;
}

double hausdorff_to_circle(const Polyline& p, double r, Complex c) {
  double worst = 0.0;
  for (Complex v : p) worst = std::max(worst, std::abs(std::abs(v - c) - r));
  const int samples = 4096;
  for (int k = 0; k < samples; ++k) {
    double d = 0.0;
    nearest_point(p, c + std::polar(r, 2.0 * kPi * k / samples), &d);
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace hslab
