// Command line front end: convergence studies, CFL error sweeps, stability
// sweeps of the two-step recursion, and single solves with CSV export.
//
// Exit codes: 0 success, 1 configuration error, 2 solver failure.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stwave/stability.hpp"
#include "stwave/verification.hpp"

namespace {

using namespace stwave;

struct OutputTarget {
  std::string path;  // empty means stdout

  template <typename Fn>
  int write(Fn&& fn) const {
    if (path.empty()) {
      fn(std::cout);
      return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "stwave: cannot open output file " << path << "\n";
      return 1;
    }
    fn(out);
    return 0;
  }
};

std::optional<MaterialModel> sigma_override(int sigma_flag) {
  if (sigma_flag < 0) return std::nullopt;  // keep the case's own setting
  if (sigma_flag == 0) return MaterialModel::vacuum();
  return MaterialModel::with_diamond_sigma(1.0);
}

ManufacturedCase load_case(const std::string& name, int sigma_flag) {
  ManufacturedCase c = ManufacturedCase::make(name);
  if (const auto material = sigma_override(sigma_flag)) c = c.with_sigma(*material);
  return c;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

int run_convergence(const std::string& case_name, std::vector<int> levels, double T, int n0,
                    int sigma_flag, const OutputTarget& out, const std::string& format) {
  if (levels.empty()) {
    std::cerr << "stwave: convergence needs a non-empty --levels list\n";
    return 1;
  }
  ManufacturedCase c = load_case(case_name, sigma_flag);
  if (T <= 0) T = c.default_T;
  const ConvergenceTable table = run_convergence_study(c, levels, T, n0);
  return out.write([&](std::ostream& os) {
    format == "md" ? convergence_to_markdown(table, os) : convergence_to_csv(table, os);
  });
}

int run_sweep(const std::string& case_name, const std::vector<double>& hx,
              const std::vector<double>& ht, double T, int sigma_flag, const OutputTarget& out,
              const std::string& format) {
  if (hx.empty() || ht.empty()) {
    std::cerr << "stwave: cfl-sweep needs non-empty --hx-list and --ht-list\n";
    return 1;
  }
  ManufacturedCase c = load_case(case_name, sigma_flag);
  if (T <= 0) T = c.default_T;
  const CflSweepResult sweep = run_cfl_sweep(c, hx, ht, T);
  return out.write([&](std::ostream& os) {
    format == "md" ? sweep_to_markdown(sweep, os) : sweep_to_csv(sweep, os);
  });
}

int run_stability(double q_min, double q_max, double step, const OutputTarget& out) {
  const StabilitySweep sweep = run_stability_sweep(q_min, q_max, step);
  return out.write([&](std::ostream& os) { write_stability_sweep_csv(sweep, os); });
}

int run_solve(const std::string& config_path, std::string case_name, double T, int nt, int n0,
              int level, int sigma_flag, const OutputTarget& out_flag) {
  std::map<std::string, std::string> cfg;
  if (!config_path.empty()) cfg = parse_config_file(config_path);
  auto from_cfg = [&](const char* key) -> std::optional<std::string> {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return std::nullopt;
    return it->second;
  };

  // Flags win over the config file.
  if (case_name.empty()) case_name = from_cfg("case").value_or("A1");
  if (T <= 0 && from_cfg("T")) T = std::stod(*from_cfg("T"));
  if (nt <= 0 && from_cfg("nt")) nt = std::stoi(*from_cfg("nt"));
  if (n0 <= 0) n0 = from_cfg("n0") ? std::stoi(*from_cfg("n0")) : 2;
  if (level < 0) level = from_cfg("level") ? std::stoi(*from_cfg("level")) : 1;
  if (sigma_flag < 0 && from_cfg("sigma")) sigma_flag = std::stoi(*from_cfg("sigma"));
  OutputTarget out = out_flag;
  if (out.path.empty() && from_cfg("out")) out.path = *from_cfg("out");

  Rect rect;
  if (from_cfg("ax")) rect.ax = std::stod(*from_cfg("ax"));
  if (from_cfg("ay")) rect.ay = std::stod(*from_cfg("ay"));
  if (from_cfg("bx")) rect.bx = std::stod(*from_cfg("bx"));
  if (from_cfg("by")) rect.by = std::stod(*from_cfg("by"));

  ManufacturedCase c = load_case(case_name, sigma_flag);
  if (from_cfg("eps") || from_cfg("mu_inv")) {
    const double eps = from_cfg("eps") ? std::stod(*from_cfg("eps")) : 1.0;
    const double mu_inv = from_cfg("mu_inv") ? std::stod(*from_cfg("mu_inv")) : 1.0;
    MaterialModel m = MaterialModel::isotropic(eps, mu_inv);
    m.sigma = c.material.sigma;
    c.material = m;
  }
  if (T <= 0) T = c.default_T;

  ProblemData p;
  p.mesh = uniform_refine(rect, n0, level - 1);
  const int n = p.mesh.n_per_side;
  if (nt <= 0) nt = static_cast<int>(std::lround(T * n / rect.width()));
  p.partition = TimePartition::equidistant(T, nt);
  p.material = c.material;
  p.j_a = c.source;

  const SolutionCoefficients sol = solve(p);
  char summary[160];
  std::snprintf(summary, sizeof summary,
                "case=%s n=%d nt=%d dofs=%ld l2_error=%.6e seminorm_error=%.6e\n",
                c.name.c_str(), n, nt, static_cast<long>(sol.n_time()) * sol.n_space(),
                error_L2Q(sol, c), error_seminorm(sol, c));
  std::cerr << summary;
  return out.write([&](std::ostream& os) { write_solution_csv(sol, os); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time Galerkin-Petrov solver for the damped vectorial wave equation"};
  app.require_subcommand(1);

  std::string case_name, format = "csv", config_path;
  OutputTarget out;
  std::vector<int> levels;
  std::vector<double> hx_list, ht_list;
  double T = -1.0, q_min = 0.0, q_max = 100.0, q_step = 0.1;
  int n0 = -1, nt = -1, level = -1, sigma_flag = -1;  // negative: unset

  auto* conv = app.add_subcommand("convergence", "Uniform-refinement error study");
  conv->add_option("--case", case_name, "Manufactured case: A1, A2 or A3")->required();
  conv->add_option("--levels", levels, "Refinement levels (1-based)")->required();
  conv->add_option("--T", T, "Final time (default: case-specific)");
  conv->add_option("--n0", n0, "Mesh resolution at level 1");
  conv->add_flag_function("--sigma,!--no-sigma", [&](std::int64_t v) { sigma_flag = v > 0; },
                          "Force the diamond conductivity on or off");
  conv->add_option("--out", out.path, "Output file (default: stdout)");
  conv->add_option("--format", format, "csv or md")->check(CLI::IsMember({"csv", "md"}));

  auto* sweep = app.add_subcommand("cfl-sweep", "Error grid over (h_x, h_t) pairs");
  sweep->add_option("--case", case_name, "Manufactured case: A1, A2 or A3")->required();
  sweep->add_option("--hx-list", hx_list, "Mesh sizes (area convention, max area^1/2)")->required();
  sweep->add_option("--ht-list", ht_list, "Time step sizes")->required();
  sweep->add_option("--T", T, "Final time (default: case-specific)");
  sweep->add_flag_function("--sigma,!--no-sigma", [&](std::int64_t v) { sigma_flag = v > 0; },
                           "Force the diamond conductivity on or off");
  sweep->add_option("--out", out.path, "Output file (default: stdout)");
  sweep->add_option("--format", format, "csv or md")->check(CLI::IsMember({"csv", "md"}));

  auto* stab = app.add_subcommand("stability-sweep", "Two-step recursion eigenvalue sweep over q");
  stab->add_option("--q-min", q_min, "Sweep start");
  stab->add_option("--q-max", q_max, "Sweep end");
  stab->add_option("--step", q_step, "Sweep step")->check(CLI::PositiveNumber);
  stab->add_option("--out", out.path, "Output file (default: stdout)");

  auto* solve_cmd = app.add_subcommand("solve", "Single solve with solution export");
  solve_cmd->add_option("--config", config_path, "key=value configuration file");
  solve_cmd->add_option("--case", case_name, "Manufactured case: A1, A2 or A3");
  solve_cmd->add_option("--T", T, "Final time");
  solve_cmd->add_option("--nt", nt, "Number of time elements");
  solve_cmd->add_option("--n0", n0, "Base mesh resolution");
  solve_cmd->add_option("--level", level, "Refinement level (1-based)");
  solve_cmd->add_flag_function("--sigma,!--no-sigma", [&](std::int64_t v) { sigma_flag = v > 0; },
                               "Force the diamond conductivity on or off");
  solve_cmd->add_option("--out", out.path, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) {
      return run_convergence(case_name, levels, T, n0 > 0 ? n0 : 2, sigma_flag, out, format);
    }
    if (sweep->parsed()) {
      return run_sweep(case_name, hx_list, ht_list, T, sigma_flag, out, format);
    }
    if (stab->parsed()) {
      return run_stability(q_min, q_max, q_step, out);
    }
    if (solve_cmd->parsed()) {
      return run_solve(config_path, case_name, T, nt, n0, level, sigma_flag, out);
    }
  } catch (const SingularMatrixError& err) {
    std::cerr << "stwave: solver failure: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "stwave: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
