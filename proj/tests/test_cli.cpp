// Drives the command-line binary end to end: every subcommand, the three
// exit codes, strict config validation, and the declared output artifacts.
// Usage: test_cli <path-to-phidir-binary>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "[FAIL] " << what << "\n";
  } else {
    std::cout << "[ ok ] " << what << "\n";
  }
}

std::string g_binary;
fs::path g_dir;

int run(const std::string& command, const json& config, const std::string& tag) {
  const fs::path cfg = g_dir / (tag + ".json");
  std::ofstream(cfg) << config.dump(2);
  const std::string cmd = g_binary + " " + command + " --config " + cfg.string() +
                          " --out " + (g_dir / tag).string() + " >" +
                          (g_dir / (tag + ".log")).string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json read_json(const std::string& tag, const std::string& name) {
  std::ifstream f(g_dir / tag / name);
  if (!f) throw std::runtime_error("missing output: " + tag + "/" + name);
  return json::parse(f);
}

size_t csv_rows(const std::string& tag, const std::string& name) {
  std::ifstream f(g_dir / tag / name);
  if (!f) throw std::runtime_error("missing output: " + tag + "/" + name);
  size_t rows = 0;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) ++rows;
  return rows ? rows - 1 : 0;  // minus header
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_cli <phidir binary>\n";
    return 1;
  }
  g_binary = argv[1];
  g_dir = fs::temp_directory_path() / "phidir_cli_test";
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);

  const json minimal_surface = {{"name", "minimal_surface"}};
  const json p3 = {{"name", "p_laplacian"}, {"params", {{"p", 3.0}}}};

  // symbol-check: a passing certificate exits 0
  {
    json cfg = {{"symbol", minimal_surface},
                {"condition",
                 {{"id", "C18_1"}, {"s0", 2.0}, {"eps", 0.25}}},
                {"report", "report.json"}};
    expect(run("symbol-check", cfg, "sc_pass") == 0, "symbol-check pass exits 0");
    const json rep = read_json("sc_pass", "report.json");
    expect(rep["holds"].get<bool>(), "C18_1 holds for the minimal surface");
    expect(rep.contains("infimum_value"), "report carries the infimum");
  }

  // symbol-check: a failing certificate exits 2
  {
    json cfg = {{"symbol", p3},
                {"condition", {{"id", "C11_1"}, {"s0", 2.0}}},
                {"report", "report.json"}};
    expect(run("symbol-check", cfg, "sc_fail") == 2, "symbol-check fail exits 2");
    expect(!read_json("sc_fail", "report.json")["holds"].get<bool>(),
           "C11_1 fails for the p-Laplacian");
  }

  // solve-radial: csv matches the closed form sqrt(r) - 1
  {
    json cfg = {{"symbol", p3},
                {"manifold",
                 {{"kind", "euclidean"}, {"n", 2}, {"r_min", 1.0}, {"r_max", 4.0}}},
                {"boundary", {{"u_min", 0.0}, {"u_max", 1.0}}},
                {"csv", "radial.csv"},
                {"report", "radial.json"}};
    expect(run("solve-radial", cfg, "radial") == 0, "solve-radial exits 0");
    const json meta = read_json("radial", "radial.json");
    expect(std::abs(meta["flux_c"].get<double>() - 0.25) < 1e-8,
           "flux constant is 1/4");
    std::ifstream csv(g_dir / "radial" / "radial.csv");
    std::string header;
    std::getline(csv, header);
    expect(header == "r,u", "radial csv header");
    double r, u, worst = 0.0;
    char comma;
    while (csv >> r >> comma >> u)
      worst = std::max(worst, std::abs(u - (std::sqrt(r) - 1.0)));
    expect(worst <= 1e-8, "radial csv matches sqrt(r)-1 to 1e-8");
  }

  // solve-grid: constant data gives tiny residual
  {
    json cfg = {{"symbol", minimal_surface},
                {"grid",
                 {{"chart", "cartesian_rectangle"}, {"nx", 8}, {"ny", 8},
                  {"x0", 0.0}, {"x1", 1.0}, {"y0", 0.0}, {"y1", 1.0}}},
                {"boundary_expr", "0.3"},
                {"csv", "u.csv"},
                {"trace", "trace.json"}};
    expect(run("solve-grid", cfg, "grid_const") == 0, "solve-grid exits 0");
    const json trace = read_json("grid_const", "trace.json");
    expect(trace["converged"].get<bool>(), "constant solve converged");
    expect(trace["final_residual"].get<double>() <= 1e-12,
           "constant solve residual <= 1e-12");
    expect(csv_rows("grid_const", "u.csv") == 100, "nodal csv has all nodes");
  }

  // barrier-boundary: mild profile with metadata
  {
    json cfg = {{"regime", "mild"},
                {"minorant", {{"c", 1.0}, {"m", 2.0}}},
                {"geometry",
                 {{"delta0", 1.0}, {"c1", 0.0}, {"C_geom", 2.0}, {"n", 2}}},
                {"M", 1.0},
                {"csv", "profile.csv"},
                {"report", "profile.json"}};
    expect(run("barrier-boundary", cfg, "barrier") == 0, "barrier-boundary exits 0");
    const json meta = read_json("barrier", "profile.json");
    expect(meta["alpha"].get<double>() == 1.0, "alpha = max{M/delta0,1,3c1} = 1");
    expect(std::abs(meta["beta"].get<double>() - 5.5) < 1e-9,
           "beta = alpha + 9CM/4 = 5.5");
    expect(meta["delta"].get<double>() <= 1.0, "delta <= M/alpha <= delta0");
  }

  // barrier-asymptotic
  {
    json cfg = {{"symbol", minimal_surface}, {"n", 2}, {"k", 1.0},
                {"height_C", 1.0}, {"delta_small", 0.5},
                {"csv", "g.csv"}, {"report", "asymptotic.json"}};
    expect(run("barrier-asymptotic", cfg, "asym") == 0, "barrier-asymptotic exits 0");
    const json meta = read_json("asym", "asymptotic.json");
    expect(meta["g_at_zero"].get<double>() >= 2.0, "calibrated g(0) >= 2C");
    expect(meta["calib_c"].get<double>() >= meta["paper_c"].get<double>(),
           "calibration never lowers the closed-form constant");
  }

  // estimate: refusal on a failing condition exits 2
  {
    json cfg = {{"theorem", "local_mild"},
                {"symbol", p3},
                {"params", {{"M", 0.0}, {"r", 1.0}, {"beta", 1.0}}},
                {"condition", {{"id", "C11_1"}, {"s0", 2.0}}},
                {"report", "estimate.json"}};
    expect(run("estimate", cfg, "est_refused") == 2, "refused estimate exits 2");
    expect(read_json("est_refused", "estimate.json")["refused"].get<bool>(),
           "estimate report carries the refusal marker");
  }
  {
    json cfg = {{"theorem", "local_mild"},
                {"symbol", p3},
                {"params",
                 {{"M", 0.0}, {"r", 1.0}, {"beta", 1.0}, {"ric_minus", 0.0},
                  {"hess_rho2_max", 1.0}}},
                {"condition", {{"id", "C10"}, {"s0", 1.0}, {"beta", 1.0}}},
                {"report", "estimate.json"}};
    expect(run("estimate", cfg, "est_ok") == 0, "estimate exits 0");
    const json rep = read_json("est_ok", "estimate.json");
    expect(std::abs(rep["bound"].get<double>() - 18.0 * std::exp(3.0)) < 1e-9,
           "local mild bound = 18 e^3");
  }

  // verify-suite
  {
    json cfg = {{"symbol", minimal_surface},
                {"seed", 12345},
                {"pairs", 2000},
                {"annulus",
                 {{"r0", 1.0}, {"r1", 2.0}, {"u0", 0.0}, {"u1", 0.8}, {"nodes", 10}}},
                {"report", "verify.json"}};
    expect(run("verify-suite", cfg, "verify") == 0, "verify-suite exits 0");
    const json rep = read_json("verify", "verify.json");
    expect(rep["passed"].get<bool>(), "verify suite all green");
    expect(rep["checks"].size() >= 6, "suite ran the full battery");
  }

  // schema violations exit 1 and name the offending key
  {
    json cfg = {{"symbol", minimal_surface},
                {"condition", {{"id", "C18_1"}, {"s0", 2.0}}},
                {"surprise", 1}};
    expect(run("symbol-check", cfg, "bad_key") == 1, "unknown key exits 1");
    std::ifstream log(g_dir / "bad_key.log");
    std::string text((std::istreambuf_iterator<char>(log)),
                     std::istreambuf_iterator<char>());
    expect(text.find("surprise") != std::string::npos,
           "error names the offending key");
  }
  {
    json cfg = {{"condition", {{"id", "C18_1"}, {"s0", 2.0}}}};
    expect(run("symbol-check", cfg, "missing_key") == 1, "missing key exits 1");
  }
  {
    const int rc = std::system(
        (g_binary + " no-such-command --config x >/dev/null 2>&1").c_str());
    expect(WIFEXITED(rc) && WEXITSTATUS(rc) != 0, "unknown command rejected");
  }

  // identical configs produce identical artifacts
  {
    json cfg = {{"symbol", p3},
                {"manifold",
                 {{"kind", "euclidean"}, {"n", 2}, {"r_min", 1.0}, {"r_max", 2.0}}},
                {"boundary", {{"u_min", 0.0}, {"u_max", 1.0}}},
                {"csv", "radial.csv"},
                {"report", "radial.json"}};
    expect(run("solve-radial", cfg, "det_a") == 0, "determinism run A");
    expect(run("solve-radial", cfg, "det_b") == 0, "determinism run B");
    auto slurp = [&](const std::string& tag) {
      std::ifstream f(g_dir / tag / "radial.csv");
      return std::string((std::istreambuf_iterator<char>(f)),
                         std::istreambuf_iterator<char>());
    };
    expect(slurp("det_a") == slurp("det_b"),
           "identical configs give byte-identical csv");
  }

  std::cout << (failures ? "FAILED " : "PASSED ") << "cli battery, failures="
            << failures << "\n";
  return failures ? 1 : 0;
}
