#pragma once

// JSON serialization for symbols and reports, strict schema helpers for run
// configs, and CSV writers.  Symbol documents have the form
//   { "name": ..., "p": ..., "A_expr": ..., "params": {...} }
// where A_expr follows the expression grammar in expr.hpp; the built-in names
// p_laplacian / minimal_surface / p_area are recognized without an A_expr.

#include <string>
#include <vector>

#include <json.hpp>

#include "phidir/barrier.hpp"
#include "phidir/conditions.hpp"
#include "phidir/estimates.hpp"
#include "phidir/grid2d.hpp"
#include "phidir/radial.hpp"
#include "phidir/symbol.hpp"
#include "phidir/verify.hpp"

namespace phidir::io {

using nlohmann::json;

class schema_error : public std::runtime_error {
public:
  explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

// Rejects unknown keys and missing required keys; `path` names the offending
// location in error messages (e.g. "$.symbol").
void check_keys(const json& obj, const std::string& path,
                const std::vector<std::string>& allowed,
                const std::vector<std::string>& required);

double number_at(const json& obj, const std::string& path, const std::string& key);
double number_or(const json& obj, const std::string& key, double fallback);

SymbolSpec symbol_from_json(const json& doc, const std::string& path = "$.symbol");
json symbol_to_json(const SymbolSpec& spec);

json condition_report_to_json(const ConditionReport& rep);
json check_report_to_json(const CheckReport& rep);
json trace_to_json(const Solution2D& sol);

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const json& doc);

// columns.size() names, one row per index of the column arrays
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Eigen::ArrayXd>& columns);

}  // namespace phidir::io
