#include "phidir/io.hpp"

#include <fstream>
#include <set>

namespace phidir::io {

void check_keys(const json& obj, const std::string& path,
                const std::vector<std::string>& allowed,
                const std::vector<std::string>& required) {
  if (!obj.is_object()) throw schema_error(path + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  ok.insert(required.begin(), required.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.count(key)) throw schema_error(path + "." + key + ": unknown key");
  for (const auto& key : required)
    if (!obj.contains(key)) throw schema_error(path + "." + key + ": required key missing");
}

double number_at(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw schema_error(path + "." + key + ": expected a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return obj[key].get<double>();
}

SymbolSpec symbol_from_json(const json& doc, const std::string& path) {
  check_keys(doc, path, {"p", "A_expr", "params", "s0_valid", "q", "delta_growth"},
             {"name"});
  const std::string name = doc["name"].get<std::string>();
  std::map<std::string, double> params;
  if (doc.contains("params"))
    for (const auto& [k, v] : doc["params"].items()) params[k] = v.get<double>();

  if (!doc.contains("A_expr")) {
    if (name == "p_laplacian") {
      if (!params.count("p")) throw schema_error(path + ".params.p: required for p_laplacian");
      return make_p_laplacian(params.at("p"));
    }
    if (name == "minimal_surface") return make_minimal_surface();
    if (name == "p_area") {
      if (!params.count("p")) throw schema_error(path + ".params.p: required for p_area");
      return make_p_area(params.at("p"));
    }
    throw schema_error(path + ".name: unknown built-in '" + name +
                       "' (custom symbols need A_expr)");
  }
  return make_symbol(name, number_at(doc, path, "p"),
                     doc["A_expr"].get<std::string>(), params,
                     number_or(doc, "s0_valid", 0.0), number_or(doc, "q", 0.0),
                     number_or(doc, "delta_growth", 0.0));
}

json symbol_to_json(const SymbolSpec& spec) {
  json j;
  j["name"] = spec.label;
  j["p"] = spec.p;
  j["A_expr"] = spec.a_expr_src;
  j["params"] = json::object();
  for (const auto& [k, v] : spec.params) j["params"][k] = v;
  if (spec.s0_valid > 0.0) j["s0_valid"] = spec.s0_valid;
  if (spec.q > 0.0) j["q"] = spec.q;
  if (spec.delta_growth > 0.0) j["delta_growth"] = spec.delta_growth;
  return j;
}

json condition_report_to_json(const ConditionReport& rep) {
  json j;
  j["condition_id"] = to_string(rep.condition_id);
  j["symbol"] = rep.symbol_label;
  j["holds"] = rep.holds;
  j["infimum_value"] = rep.infimum_value;
  j["witness_s"] = rep.witness_s;
  j["minorant_nondecreasing"] = rep.minorant_nondecreasing;
  if (!rep.note.empty()) j["note"] = rep.note;
  j["params"] = {{"s0", rep.params.s0},
                 {"beta", rep.params.beta},
                 {"eps", rep.params.eps},
                 {"threshold", rep.params.threshold},
                 {"minorant", {{"c", rep.params.minorant.c}, {"m", rep.params.minorant.m}}},
                 {"s_max", rep.params.s_max},
                 {"grid_points", rep.params.grid_points}};
  return j;
}

json check_report_to_json(const CheckReport& rep) {
  return json{{"name", rep.name},
              {"passed", rep.passed},
              {"worst_violation", rep.worst_violation},
              {"location", rep.location},
              {"tolerance_used", rep.tolerance_used}};
}

json trace_to_json(const Solution2D& sol) {
  json iters = json::array();
  for (const auto& it : sol.trace)
    iters.push_back({{"kappa", it.kappa},
                     {"update_norm", it.update_norm},
                     {"residual", it.residual}});
  json j;
  j["iterations"] = std::move(iters);
  j["converged"] = sol.converged;
  j["final_residual"] = sol.final_residual;
  j["kappa_final"] = sol.kappa_final;
  if (!sol.note.empty()) j["note"] = sol.note;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
}

void write_json(const std::string& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Eigen::ArrayXd>& columns) {
  if (header.size() != columns.size())
    throw std::invalid_argument("write_csv: header/column count mismatch");
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.precision(17);
  for (size_t c = 0; c < header.size(); ++c)
    f << header[c] << (c + 1 < header.size() ? ',' : '\n');
  const Eigen::Index rows = columns.empty() ? 0 : columns[0].size();
  for (const auto& col : columns)
    if (col.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
  for (Eigen::Index r = 0; r < rows; ++r)
    for (size_t c = 0; c < columns.size(); ++c)
      f << columns[c][r] << (c + 1 < columns.size() ? ',' : '\n');
}

}  // namespace phidir::io
