#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hslab/obstacle.hpp"

namespace hslab {

struct CheckRow {
  std::string check;
  std::optional<bool> pass;  // empty when the check is not applicable
  double residual = 0.0;
  double tolerance = 0.0;
  int n = 0;                 // grid parameters; 0 when the check is grid-free
  double h = 0.0;
  std::string note;
};

struct VerificationReport {
  std::string subject;
  bool applicable = true;
  std::vector<CheckRow> rows;

  // Row passing when residual <= tolerance (or >= when lower_bound is set).
  CheckRow& add(std::string check, double residual, double tolerance, int n = 0, double h = 0.0,
                bool lower_bound = false);
  void mark_not_applicable(const std::string& why);
  bool passed() const;
  void append(const VerificationReport& other);
};

nlohmann::json to_json(const CheckRow& row);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const FlowSnapshot& s);
nlohmann::json to_json(const Polyline& p);

// Fixed-width table for terminals.
std::string render_table(const VerificationReport& report);

// JSON text with a trailing newline; identical inputs give identical bytes.
std::string dump(const nlohmann::json& j);

}  // namespace hslab
