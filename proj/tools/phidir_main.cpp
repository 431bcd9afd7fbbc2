// phidir: batch front end for the quasilinear Dirichlet toolkit.
//
//   phidir <command> --config <file> [--out <dir>]
//
// Commands: symbol-check, solve-radial, solve-grid, barrier-boundary,
// barrier-asymptotic, estimate, verify-suite.  One JSON config per run with
// every numeric tolerance explicit; unknown keys are rejected with the path
// of the offending key.  Exit codes: 0 success, 2 a check ran and failed,
// 1 error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "phidir/io.hpp"

namespace fs = std::filesystem;
using namespace phidir;
using phidir::io::json;

namespace {

json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  return json::parse(f);
}

std::string out_path(const std::string& out_dir, const std::string& name) {
  fs::create_directories(out_dir);
  return (fs::path(out_dir) / name).string();
}

ConditionParams condition_params_from(const json& c, const std::string& path) {
  io::check_keys(c, path,
                 {"beta", "eps", "minorant", "threshold", "s_max", "grid_points"},
                 {"id", "s0"});
  ConditionParams params;
  params.s0 = io::number_at(c, path, "s0");
  params.beta = io::number_or(c, "beta", params.beta);
  params.eps = io::number_or(c, "eps", params.eps);
  params.threshold = io::number_or(c, "threshold", params.threshold);
  params.s_max = io::number_or(c, "s_max", params.s_max);
  params.grid_points = static_cast<int>(io::number_or(c, "grid_points", params.grid_points));
  if (c.contains("minorant")) {
    io::check_keys(c["minorant"], path + ".minorant", {}, {"c", "m"});
    params.minorant.c = c["minorant"]["c"].get<double>();
    params.minorant.m = c["minorant"]["m"].get<double>();
  }
  return params;
}

int run_symbol_check(const json& cfg, const std::string& out_dir) {
  io::check_keys(cfg, "$", {"report"}, {"symbol", "condition"});
  const SymbolSpec spec = io::symbol_from_json(cfg["symbol"]);
  validate(spec);
  const json& c = cfg["condition"];
  const ConditionId id = condition_from_string(c["id"].get<std::string>());
  const ConditionReport rep = check_condition(spec, id, condition_params_from(c, "$.condition"));
  json doc = io::condition_report_to_json(rep);
  doc["symbol_spec"] = io::symbol_to_json(spec);
  io::write_json(out_path(out_dir, cfg.value("report", "condition_report.json")), doc);
  std::cout << "condition " << to_string(id) << " on " << spec.label << ": "
            << (rep.holds ? "holds" : "fails")
            << " (infimum " << rep.infimum_value << " at s = " << rep.witness_s << ")\n";
  return rep.holds ? 0 : 2;
}

WarpedProduct manifold_from(const json& m, const std::string& path) {
  io::check_keys(m, path, {"k"}, {"kind", "n", "r_min", "r_max"});
  const std::string kind = m["kind"].get<std::string>();
  const int n = m["n"].get<int>();
  const double r_min = io::number_at(m, path, "r_min");
  const double r_max = io::number_at(m, path, "r_max");
  if (kind == "euclidean") return WarpedProduct::euclidean(n, r_min, r_max);
  if (kind == "hyperbolic")
    return WarpedProduct::hyperbolic(n, io::number_at(m, path, "k"), r_min, r_max);
  throw io::schema_error(path + ".kind: unknown manifold kind '" + kind + "'");
}

int run_solve_radial(const json& cfg, const std::string& out_dir) {
  io::check_keys(cfg, "$", {"quad", "csv", "report"}, {"symbol", "manifold", "boundary"});
  const SymbolSpec spec = io::symbol_from_json(cfg["symbol"]);
  validate(spec);
  const WarpedProduct m = manifold_from(cfg["manifold"], "$.manifold");
  io::check_keys(cfg["boundary"], "$.boundary", {}, {"u_min", "u_max"});
  RadialQuadConfig quad;
  if (cfg.contains("quad")) {
    io::check_keys(cfg["quad"], "$.quad", {"tol", "table_nodes"}, {});
    quad.tol = io::number_or(cfg["quad"], "tol", quad.tol);
    quad.table_nodes = static_cast<int>(io::number_or(cfg["quad"], "table_nodes", quad.table_nodes));
  }
  const RadialSolution sol =
      solve_radial(spec, m, cfg["boundary"]["u_min"].get<double>(),
                   cfg["boundary"]["u_max"].get<double>(), quad);
  io::write_csv(out_path(out_dir, cfg.value("csv", "radial.csv")), {"r", "u"},
                {sol.u.nodes(), sol.u.values()});
  json meta;
  meta["flux_c"] = sol.flux_c;
  meta["boundary_residual"] = sol.boundary_residual;
  meta["tolerances"] = {{"quad_tol", sol.quad_tol}};
  meta["manifold"] = {{"kind", m.kind}, {"n", m.n}, {"k", m.k},
                      {"r_min", m.r_min}, {"r_max", m.r_max}};
  meta["symbol_spec"] = io::symbol_to_json(spec);
  io::write_json(out_path(out_dir, cfg.value("report", "radial.json")), meta);
  std::cout << "radial solve on [" << m.r_min << ", " << m.r_max
            << "]: flux " << sol.flux_c << ", boundary residual "
            << sol.boundary_residual << "\n";
  return 0;
}

Grid grid_from(const json& g, const std::string& path) {
  io::check_keys(g, path, {"warp_k", "y0", "y1"},
                 {"chart", "nx", "ny", "x0", "x1"});
  const std::string chart = g["chart"].get<std::string>();
  const int nx = g["nx"].get<int>(), ny = g["ny"].get<int>();
  const double x0 = io::number_at(g, path, "x0"), x1 = io::number_at(g, path, "x1");
  if (chart == "cartesian_rectangle")
    return Grid::cartesian(nx, ny, x0, x1, io::number_at(g, path, "y0"),
                           io::number_at(g, path, "y1"));
  if (chart == "polar_annulus")
    return Grid::polar_annulus(nx, ny, x0, x1, io::number_or(g, "warp_k", 0.0),
                               io::number_or(g, "y0", 0.0),
                               io::number_or(g, "y1", 2.0 * M_PI));
  throw io::schema_error(path + ".chart: unknown chart '" + chart + "'");
}

int run_solve_grid(const json& cfg, const std::string& out_dir) {
  io::check_keys(cfg, "$", {"kappa_schedule", "picard", "csv", "trace"},
                 {"symbol", "grid", "boundary_expr"});
  Problem2D prob;
  prob.spec = io::symbol_from_json(cfg["symbol"]);
  validate(prob.spec);
  prob.grid = grid_from(cfg["grid"], "$.grid");
  const expr::Node bexpr = expr::parse(cfg["boundary_expr"].get<std::string>());
  prob.boundary = [bexpr](double x, double y) {
    return expr::eval(bexpr, expr::Env{{"x", x}, {"y", y}});
  };
  if (cfg.contains("kappa_schedule"))
    prob.kappa_schedule = cfg["kappa_schedule"].get<std::vector<double>>();
  if (cfg.contains("picard")) {
    const json& p = cfg["picard"];
    io::check_keys(p, "$.picard",
                   {"max_iters", "theta", "tol_update", "tol_residual", "cg_tol"}, {});
    prob.picard.max_iters = static_cast<int>(io::number_or(p, "max_iters", prob.picard.max_iters));
    prob.picard.theta = io::number_or(p, "theta", prob.picard.theta);
    prob.picard.tol_update = io::number_or(p, "tol_update", prob.picard.tol_update);
    prob.picard.tol_residual = io::number_or(p, "tol_residual", prob.picard.tol_residual);
    prob.picard.cg_tol = io::number_or(p, "cg_tol", prob.picard.cg_tol);
  }
  const Solution2D sol = kappa_continuation(prob);

  const Grid& g = prob.grid;
  const long nodes = static_cast<long>(g.rows()) * g.cols();
  Eigen::ArrayXd xs(nodes), ys(nodes), us(nodes), gs(nodes);
  long k = 0;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j, ++k) {
      xs[k] = g.x(i);
      ys[k] = g.y(j);
      us[k] = sol.u(i, j);
      gs[k] = sol.grad_norm(i, j);
    }
  io::write_csv(out_path(out_dir, cfg.value("csv", "solution.csv")),
                {"x", "y", "u", "grad"}, {xs, ys, us, gs});
  json trace = io::trace_to_json(sol);
  trace["tolerances"] = {{"tol_update", prob.picard.tol_update},
                         {"tol_residual", prob.picard.tol_residual},
                         {"cg_tol", prob.picard.cg_tol}};
  io::write_json(out_path(out_dir, cfg.value("trace", "trace.json")), trace);
  std::cout << "grid solve: " << (sol.converged ? "converged" : "NOT converged")
            << ", weak residual " << sol.final_residual << ", iterations "
            << sol.trace.size() << "\n";
  return sol.converged ? 0 : 2;
}

int run_barrier_boundary(const json& cfg, const std::string& out_dir) {
  io::check_keys(cfg, "$", {"placement", "samples", "csv", "report"},
                 {"regime", "minorant", "geometry", "M"});
  const std::string regime_s = cfg["regime"].get<std::string>();
  if (regime_s != "mild" && regime_s != "strong")
    throw io::schema_error("$.regime: must be 'mild' or 'strong'");
  const BarrierRegime regime =
      regime_s == "mild" ? BarrierRegime::mild : BarrierRegime::strong;
  io::check_keys(cfg["minorant"], "$.minorant", {}, {"c", "m"});
  PowerMinorant phi{cfg["minorant"]["c"].get<double>(), cfg["minorant"]["m"].get<double>()};
  const json& ge = cfg["geometry"];
  io::check_keys(ge, "$.geometry", {"mean_convex", "n"}, {"delta0", "c1", "C_geom"});
  DomainGeometry geom;
  geom.delta0 = io::number_at(ge, "$.geometry", "delta0");
  geom.c1 = io::number_at(ge, "$.geometry", "c1");
  geom.C_geom = io::number_at(ge, "$.geometry", "C_geom");
  geom.n = static_cast<int>(io::number_or(ge, "n", 2));
  geom.mean_convex = ge.value("mean_convex", false);
  BarrierBuildOptions opt;
  if (cfg.contains("placement"))
    opt.placement = cfg["placement"].get<std::string>() == "multiply_by_C"
                        ? StrongPlacement::multiply_by_C
                        : StrongPlacement::divide_by_C;

  const BarrierProfile prof =
      build_profile(regime, phi, geom, io::number_at(cfg, "$", "M"), opt);

  const int samples = static_cast<int>(io::number_or(cfg, "samples", 201));
  Eigen::ArrayXd d = Eigen::ArrayXd::LinSpaced(samples, 0.0, prof.delta);
  Eigen::ArrayXd f(samples);
  for (int i = 0; i < samples; ++i) f[i] = eval_profile(prof, d[i]);
  io::write_csv(out_path(out_dir, cfg.value("csv", "profile.csv")), {"d", "f"}, {d, f});
  json meta = {{"regime", regime_s}, {"alpha", prof.alpha}, {"beta", prof.beta},
               {"delta", prof.delta}, {"M", prof.M}, {"C_geom", prof.C_geom}};
  io::write_json(out_path(out_dir, cfg.value("report", "profile.json")), meta);
  std::cout << "barrier profile (" << regime_s << "): alpha " << prof.alpha
            << ", beta " << prof.beta << ", delta " << prof.delta << "\n";
  return 0;
}

int run_barrier_asymptotic(const json& cfg, const std::string& out_dir) {
  io::check_keys(cfg, "$", {"quad_tol", "csv", "report"},
                 {"symbol", "n", "k", "height_C", "delta_small"});
  const SymbolSpec spec = io::symbol_from_json(cfg["symbol"]);
  validate(spec);
  const AsymptoticBarrier bar = asymptotic_barrier(
      spec, cfg["n"].get<int>(), io::number_at(cfg, "$", "k"),
      io::number_at(cfg, "$", "height_C"), io::number_at(cfg, "$", "delta_small"),
      io::number_or(cfg, "quad_tol", 1e-11));
  io::write_csv(out_path(out_dir, cfg.value("csv", "asymptotic_profile.csv")),
                {"s", "g"}, {bar.g_table.nodes(), bar.g_table.values()});
  json meta;
  meta["paper_c"] = bar.paper_c;
  meta["calib_c"] = bar.calib_c;
  meta["tau"] = bar.tau;
  meta["g_at_zero"] = bar.g_at_zero;
  meta["height_C"] = bar.height_C;
  meta["delta_small"] = bar.delta_small;
  meta["n"] = bar.n;
  meta["k"] = bar.k;
  meta["tolerances"] = {{"quad_tol", bar.quad_tol}};
  io::write_json(out_path(out_dir, cfg.value("report", "asymptotic.json")), meta);
  std::cout << "asymptotic barrier: calibrated flux " << bar.calib_c
            << " (closed-form recipe " << bar.paper_c << "), g(0) = "
            << bar.g_at_zero << " >= " << 2.0 * bar.height_C << "\n";
  return 0;
}

int run_estimate(const json& cfg, const std::string& out_dir) {
  io::check_keys(cfg, "$", {"symbol", "condition", "report"}, {"theorem", "params"});
  const std::string theorem = cfg["theorem"].get<std::string>();
  const json& pj = cfg["params"];
  io::check_keys(pj, "$.params",
                 {"n", "r", "M", "ric_minus", "hess_rho2_max", "K", "alpha",
                  "beta", "eps", "s0", "C_free", "u_sup", "s_max"}, {});
  EstimateParams p;
  p.n = static_cast<int>(io::number_or(pj, "n", p.n));
  p.r = io::number_or(pj, "r", p.r);
  p.M = io::number_or(pj, "M", p.M);
  p.ric_minus = io::number_or(pj, "ric_minus", p.ric_minus);
  p.hess_rho2_max = io::number_or(pj, "hess_rho2_max", p.hess_rho2_max);
  p.K = io::number_or(pj, "K", p.K);
  p.alpha = io::number_or(pj, "alpha", p.alpha);
  p.beta = io::number_or(pj, "beta", p.beta);
  p.eps = io::number_or(pj, "eps", p.eps);
  p.s0 = io::number_or(pj, "s0", p.s0);
  p.C_free = io::number_or(pj, "C_free", p.C_free);

  SymbolSpec spec;
  bool have_symbol = cfg.contains("symbol");
  if (have_symbol) {
    spec = io::symbol_from_json(cfg["symbol"]);
    validate(spec);
  }
  ConditionReport rep;
  bool have_condition = cfg.contains("condition");
  if (have_condition) {
    if (!have_symbol) throw io::schema_error("$.condition: needs $.symbol");
    const json& c = cfg["condition"];
    rep = check_condition(spec, condition_from_string(c["id"].get<std::string>()),
                          condition_params_from(c, "$.condition"));
  }

  json doc;
  doc["theorem"] = theorem;
  doc["params"] = pj;
  if (have_condition) doc["condition_report"] = io::condition_report_to_json(rep);
  bool refused = false;
  if (theorem == "local_mild") {
    const BoundResult r = local_bound_mild(p, have_condition ? &rep : nullptr);
    refused = r.refused;
    doc["refused"] = r.refused;
    if (r.refused) doc["reason"] = r.reason; else doc["bound"] = r.value;
  } else if (theorem == "local_strong") {
    const BoundResult r = local_bound_strong(p, have_condition ? &rep : nullptr);
    refused = r.refused;
    doc["refused"] = r.refused;
    if (r.refused) doc["reason"] = r.reason; else doc["bound"] = r.value;
  } else if (theorem == "global_strong") {
    const StrongGlobalBound r = global_bound_strong(
        spec, p.ric_minus, p.s0, p.alpha, have_condition ? &rep : nullptr);
    refused = r.refused;
    doc["refused"] = r.refused;
    if (r.refused) doc["reason"] = r.reason;
    else doc["bound"] = {{"K_required", r.K_required}, {"gradient_cap", r.gradient_cap}};
  } else if (theorem == "global_mild") {
    if (!have_symbol) throw io::schema_error("$.symbol: required for global_mild");
    const MildGlobalBound r = global_bound_mild(
        spec, p.ric_minus, p.beta, io::number_or(pj, "u_sup", p.M),
        p.s0 > 0.0 ? p.s0 : 1e-2, io::number_or(pj, "s_max", 1e6), 4096,
        have_condition ? &rep : nullptr);
    refused = r.refused;
    doc["refused"] = r.refused;
    if (r.refused) doc["reason"] = r.reason;
    else {
      doc["found"] = r.found;
      if (r.found) doc["bound"] = {{"K", r.K}, {"gradient_cap", r.gradient_cap}};
      else doc["reason"] = r.reason;
    }
  } else {
    throw io::schema_error("$.theorem: unknown theorem '" + theorem + "'");
  }
  io::write_json(out_path(out_dir, cfg.value("report", "estimate.json")), doc);
  std::cout << "estimate " << theorem << ": "
            << (refused ? "refused (condition fails)" : doc.dump()) << "\n";
  return refused ? 2 : 0;
}

int run_verify_suite(const json& cfg, const std::string& out_dir) {
  io::check_keys(cfg, "$", {"seed", "pairs", "s_max", "annulus", "report"}, {"symbol"});
  const SymbolSpec spec = io::symbol_from_json(cfg["symbol"]);
  validate(spec);
  const unsigned seed = static_cast<unsigned>(io::number_or(cfg, "seed", 12345));
  const int npairs = static_cast<int>(io::number_or(cfg, "pairs", 10000));
  const double s_max = io::number_or(cfg, "s_max", 10.0);

  std::vector<CheckReport> reports;

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, s_max);
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(npairs);
  for (int i = 0; i < npairs; ++i) pairs.emplace_back(uni(rng), uni(rng));
  reports.push_back(monotonicity_check(spec, pairs));

  const Grid flat = Grid::cartesian(9, 9, -1.0, 1.0, -1.0, 1.0);
  reports.push_back(bochner_residual(Poly2{{2, 0, 1.0}, {0, 2, 1.0}}, flat));
  reports.push_back(bochner_residual(Poly2{{3, 0, 1.0}}, flat));
  reports.push_back(bochner_residual(Poly2{{3, 0, 1.0}, {1, 2, -3.0}}, flat));

  if (cfg.contains("annulus")) {
    const json& an = cfg["annulus"];
    io::check_keys(an, "$.annulus", {"nodes"}, {"r0", "r1", "u0", "u1"});
    const double r0 = io::number_at(an, "$.annulus", "r0");
    const double r1 = io::number_at(an, "$.annulus", "r1");
    const double u0 = io::number_at(an, "$.annulus", "u0");
    const double u1 = io::number_at(an, "$.annulus", "u1");
    const int nodes = static_cast<int>(io::number_or(an, "nodes", 32));

    Problem2D prob;
    prob.spec = spec;
    prob.grid = Grid::polar_annulus(nodes, nodes, r0, r1);
    prob.boundary = [&](double r, double) { return r <= r0 ? u0 : u1; };
    const Solution2D sol_u = kappa_continuation(prob);

    Problem2D prob_v = prob;
    const double shift = 0.25 * (1.0 + std::abs(u1 - u0));
    prob_v.boundary = [&](double r, double) { return (r <= r0 ? u0 : u1) + shift; };
    const Solution2D sol_v = kappa_continuation(prob_v);

    const double h = std::max(prob.grid.hx, prob.grid.hy);
    const double tol = 1e-6 + 10.0 * h * h;
    reports.push_back(comparison_check(sol_u, sol_v, tol));
    reports.push_back(max_principle_check(sol_u, sol_v, tol));

    const RadialSolution rad =
        solve_radial(spec, WarpedProduct::euclidean(2, r0, r1), u0, u1);
    CheckReport oc = oracle_compare(sol_u, rad, ErrorNorm::inf, 0.5);
    reports.push_back(oc);
  }

  json doc;
  doc["symbol"] = io::symbol_to_json(spec);
  doc["seed"] = seed;
  doc["checks"] = json::array();
  bool all_pass = true;
  for (const auto& r : reports) {
    doc["checks"].push_back(io::check_report_to_json(r));
    all_pass = all_pass && r.passed;
    std::cout << (r.passed ? "  pass  " : "  FAIL  ") << r.name
              << " (worst " << r.worst_violation << ", tol " << r.tolerance_used
              << ")\n";
  }
  doc["passed"] = all_pass;
  io::write_json(out_path(out_dir, cfg.value("report", "verify.json")), doc);
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet problems for phi-integrand quasilinear operators"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  const std::vector<std::pair<std::string, int (*)(const json&, const std::string&)>>
      commands = {{"symbol-check", run_symbol_check},
                  {"solve-radial", run_solve_radial},
                  {"solve-grid", run_solve_grid},
                  {"barrier-boundary", run_barrier_boundary},
                  {"barrier-asymptotic", run_barrier_asymptotic},
                  {"estimate", run_estimate},
                  {"verify-suite", run_verify_suite}};

  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (default: .)");
    int (*run)(const json&, const std::string&) = fn;
    sub->callback([run, &config_path, &out_dir]() {
      const int rc = run(load_config(config_path), out_dir);
      if (rc != 0) throw CLI::RuntimeError(rc);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
