#include "hslab/report.hpp"

#include <cstdio>
#include <sstream>

namespace hslab {

CheckRow& VerificationReport::add(std::string check, double residual, double tolerance, int n, double h,
                                  bool lower_bound) {
  CheckRow r;
  r.check = std::move(check);
  r.residual = residual;
  r.tolerance = tolerance;
  r.n = n;
  r.h = h;
  r.pass = lower_bound ? residual >= tolerance : residual <= tolerance;
  if (std::isnan(residual)) r.pass = false;
  rows.push_back(std::move(r));
  return rows.back();
}

void VerificationReport::mark_not_applicable(const std::string& why) {
  applicable = false;
  for (CheckRow& r : rows)
    if (r.check.rfind("hypothesis", 0) != 0) {
      r.pass.reset();
      r.note = why;
    }
}

bool VerificationReport::passed() const {
  if (!applicable) return false;
  for (const CheckRow& r : rows)
    if (r.pass.has_value() && !*r.pass) return false;
  return true;
}

void VerificationReport::append(const VerificationReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  applicable = applicable && other.applicable;
}

nlohmann::json to_json(const CheckRow& row) {
  nlohmann::json j;
  j["check"] = row.check;
  j["pass"] = row.pass.has_value() ? nlohmann::json(*row.pass) : nlohmann::json(nullptr);
  j["residual"] = row.residual;
  j["tolerance"] = row.tolerance;
  j["n"] = row.n > 0 ? nlohmann::json(row.n) : nlohmann::json(nullptr);
  j["h"] = row.n > 0 ? nlohmann::json(row.h) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json a = nlohmann::json::array();
  for (const CheckRow& r : report.rows) a.push_back(to_json(r));
  return a;
}

nlohmann::json to_json(const Polyline& p) {
  nlohmann::json a = nlohmann::json::array();
  for (Complex z : p) a.push_back({z.real(), z.imag()});
  return a;
}

nlohmann::json to_json(const FlowSnapshot& s) {
  nlohmann::json j;
  j["t"] = s.t;
  j["n"] = s.n;
  j["h"] = s.h;
  j["eps_detach"] = s.eps_detach;
  j["boundary"] = to_json(s.boundary);
  j["area_omega"] = s.area_omega;
  j["diagnostics"] = {{"sweeps", s.sweeps}, {"residual", s.residual}};
  return j;
}

std::string render_table(const VerificationReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-34s %-6s %14s %14s %6s %10s\n", "check", "pass", "residual", "tolerance", "n",
                "h");
  out << line;
  for (const CheckRow& r : report.rows) {
    const char* p = !r.pass.has_value() ? "n/a" : (*r.pass ? "yes" : "NO");
    char nbuf[16] = "-", hbuf[16] = "-";
    if (r.n > 0) {
      std::snprintf(nbuf, sizeof nbuf, "%d", r.n);
      std::snprintf(hbuf, sizeof hbuf, "%.3e", r.h);
    }
    std::snprintf(line, sizeof line, "%-34s %-6s %14.6e %14.6e %6s %10s\n", r.check.c_str(), p, r.residual,
                  r.tolerance, nbuf, hbuf);
    out << line;
    if (!r.note.empty()) out << "    " << r.note << "\n";
  }
  return out.str();
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace hslab
