#include "stwave/verification.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "stwave/quadrature.hpp"
#include "stwave/stability.hpp"

namespace stwave {

namespace {

// Shared spatial profile of cases A1 and A3.
Vec2 bubble_profile(const Vec2& x) {
  const double b = x.x() * (1 - x.x()) * x.y() * (1 - x.y());
  return Vec2(b * x.y(), -b * x.x());
}

double bubble_curl(const Vec2& x) {
  const double x1 = x.x(), x2 = x.y();
  return -(2 * x1 - 3 * x1 * x1) * (x2 - x2 * x2) - (x1 - x1 * x1) * (2 * x2 - 3 * x2 * x2);
}

Vec2 bubble_curl_curl(const Vec2& x) {
  const double x1 = x.x(), x2 = x.y();
  return Vec2(x1 * (x1 * (5 - 12 * x2) + 10 * x2 - 4),
              -x2 * (10 * x1 - 12 * x1 * x2 + 5 * x2 - 4));
}

ManufacturedCase make_a1() {
  ManufacturedCase c;
  c.name = "A1";
  c.default_T = 2.0;
  c.material = MaterialModel::vacuum();
  c.A = [](double t, const Vec2& x) { return Vec2(t * t * t * bubble_profile(x)); };
  c.dt_A = [](double t, const Vec2& x) { return Vec2(3 * t * t * bubble_profile(x)); };
  c.curl_A = [](double t, const Vec2& x) { return t * t * t * bubble_curl(x); };
  c.source = [](double t, const Vec2& x) {
    return Vec2(6 * t * bubble_profile(x) + t * t * t * bubble_curl_curl(x));
  };
  return c;
}

ManufacturedCase make_a2() {
  ManufacturedCase c;
  c.name = "A2";
  c.default_T = std::sqrt(10.4);
  c.material = MaterialModel::vacuum();
  const auto g = [](const Vec2& x) {
    return Vec2(-5 * x.y() * (1 - x.y()), x.x() * (1 - x.x()));
  };
  const auto s = [](const Vec2& x) {
    return Vec2(std::sin(M_PI * x.x()) * x.y() * (1 - x.y()), 0.0);
  };
  c.A = [g, s](double t, const Vec2& x) { return Vec2(t * t * g(x) + t * t * t * s(x)); };
  c.dt_A = [g, s](double t, const Vec2& x) { return Vec2(2 * t * g(x) + 3 * t * t * s(x)); };
  c.curl_A = [](double t, const Vec2& x) {
    const double curl_g = (1 - 2 * x.x()) + 5 * (1 - 2 * x.y());
    const double curl_s = -std::sin(M_PI * x.x()) * (1 - 2 * x.y());
    return t * t * curl_g + t * t * t * curl_s;
  };
  c.source = [](double t, const Vec2& x) {
    const double x1 = x.x(), x2 = x.y();
    const double sp = std::sin(M_PI * x1), cp = std::cos(M_PI * x1);
    return Vec2(-10 * x2 * (1 - x2) - 10 * t * t + 6 * t * sp * x2 * (1 - x2) + 2 * t * t * t * sp,
                2 * x1 * (1 - x1) + 2 * t * t + M_PI * t * t * t * (1 - 2 * x2) * cp);
  };
  return c;
}

ManufacturedCase make_a3() {
  ManufacturedCase c;
  c.name = "A3";
  c.default_T = 2.0;
  c.material = MaterialModel::with_diamond_sigma(1.0);
  c.A = [](double t, const Vec2& x) { return Vec2(t * t * bubble_profile(x)); };
  c.dt_A = [](double t, const Vec2& x) { return Vec2(2 * t * bubble_profile(x)); };
  c.curl_A = [](double t, const Vec2& x) { return t * t * bubble_curl(x); };
  const auto sigma = c.material.sigma;
  c.source = [sigma](double t, const Vec2& x) {
    const Vec2 p = bubble_profile(x);
    return Vec2(2 * p + sigma(x) * (2 * t * p) + t * t * bubble_curl_curl(x));
  };
  return c;
}

}  // namespace

ManufacturedCase ManufacturedCase::make(std::string_view name) {
  if (name == "A1") return make_a1();
  if (name == "A2") return make_a2();
  if (name == "A3") return make_a3();
  throw std::invalid_argument("ManufacturedCase: unknown case (expected A1, A2 or A3)");
}

ManufacturedCase ManufacturedCase::with_sigma(MaterialModel material_override) const {
  ManufacturedCase c = *this;
  c.material = std::move(material_override);
  const auto dt_a = c.dt_A;
  const auto base_material = material;
  const auto base_source = source;
  const auto old_sigma = base_material.sigma;
  const auto new_sigma = c.material.sigma;
  c.source = [=](double t, const Vec2& x) {
    Vec2 j = base_source(t, x);
    const Vec2 v = dt_a(t, x);
    if (old_sigma) j -= old_sigma(x) * v;
    if (new_sigma) j += new_sigma(x) * v;
    return j;
  };
  return c;
}

namespace {

template <typename Accumulate>
void for_each_spacetime_point(const SolutionCoefficients& sol, const QuadratureConfig& quad,
                              Accumulate&& accumulate) {
  const TriMesh& mesh = sol.mesh;
  const TimePartition& part = sol.partition;
  const auto srule = triangle_rule(quad.error_space_degree);
  const auto trule = gauss_rule(quad.error_time_points);

  struct TriData {
    WhitneyTriangle w;
    std::array<int, 3> edges;
  };
  std::vector<TriData> tris;
  tris.reserve(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    tris.push_back({WhitneyTriangle::from(mesh, t), mesh.triangle_edges[t]});
  }

  for (int e = 0; e < part.n_elements(); ++e) {
    const double h = part.h(e);
    double shape[3], dshape[3];
    for (const auto& gp : trule) {
      const double t = part.t_nodes[e] + gp.x * h;
      const double wt = gp.w * h;
      quadratic_shape(gp.x, shape);
      quadratic_shape_deriv(gp.x, dshape);
      for (const auto& tri : tris) {
        // Local space-time coefficients of the three temporal nodes.
        double c[3][3];
        for (int a = 0; a < 3; ++a) {
          const int kappa = 2 * e + a;
          for (int k = 0; k < 3; ++k) c[a][k] = sol.coef_edge(kappa, tri.edges[k]);
        }
        Vec2 w[3];
        for (const auto& qp : srule) {
          const double bary[3] = {qp.l0, qp.l1, qp.l2};
          const Vec2 x = tri.w.point(bary);
          tri.w.values(bary, w);
          Vec2 value = Vec2::Zero(), dt_value = Vec2::Zero();
          double curl = 0.0;
          for (int a = 0; a < 3; ++a) {
            Vec2 sv = c[a][0] * w[0] + c[a][1] * w[1] + c[a][2] * w[2];
            const double sc =
                c[a][0] * tri.w.curl[0] + c[a][1] * tri.w.curl[1] + c[a][2] * tri.w.curl[2];
            value += shape[a] * sv;
            dt_value += (dshape[a] / h) * sv;
            curl += shape[a] * sc;
          }
          accumulate(t, x, wt * qp.w * tri.w.area, value, dt_value, curl);
        }
      }
    }
  }
}

}  // namespace

double error_L2Q(const SolutionCoefficients& sol, const ManufacturedCase& c,
                 const QuadratureConfig& quad) {
  double acc = 0.0;
  for_each_spacetime_point(sol, quad,
                           [&](double t, const Vec2& x, double w, const Vec2& value, const Vec2&,
                               double) { acc += w * (c.A(t, x) - value).squaredNorm(); });
  return std::sqrt(acc);
}

double error_seminorm(const SolutionCoefficients& sol, const ManufacturedCase& c,
                      const QuadratureConfig& quad) {
  double acc = 0.0;
  for_each_spacetime_point(
      sol, quad,
      [&](double t, const Vec2& x, double w, const Vec2&, const Vec2& dt_value, double curl) {
        const Vec2 dt_err = c.dt_A(t, x) - dt_value;
        const double curl_err = c.curl_A(t, x) - curl;
        acc += w * (dt_err.dot(c.material.epsilon(x) * dt_err) +
                    c.material.mu_inverse(x) * curl_err * curl_err);
      });
  return std::sqrt(acc);
}

namespace {

ProblemData make_problem(const ManufacturedCase& c, int n, int n_t, double T) {
  ProblemData p;
  p.mesh = build_structured_mesh(Rect{0, 0, 1, 1}, n);
  p.partition = TimePartition::equidistant(T, n_t);
  p.material = c.material;
  p.j_a = c.source;
  return p;
}

}  // namespace

ConvergenceTable run_convergence_study(const ManufacturedCase& c, const std::vector<int>& levels,
                                       double T, int n0) {
  ConvergenceTable table;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const int level = levels[i];
    if (level < 1) throw std::invalid_argument("run_convergence_study: levels are 1-based");
    const int n = n0 << (level - 1);
    const double h = 1.0 / n;
    const int n_t = static_cast<int>(std::lround(T / h));
    const ProblemData p = make_problem(c, n, n_t, T);
    const SolutionCoefficients sol = solve(p);

    ConvergenceRow row;
    row.level = level;
    row.h_x = h;
    row.h_t = T / n_t;
    row.n_dofs = static_cast<long>(sol.n_time()) * sol.n_space();
    row.err_l2 = error_L2Q(sol, c);
    row.err_semi = error_seminorm(sol, c);
    if (!table.rows.empty() && levels[i - 1] == level - 1) {
      row.eoc_l2 = std::log(table.rows.back().err_l2 / row.err_l2) / std::log(2.0);
      row.eoc_semi = std::log(table.rows.back().err_semi / row.err_semi) / std::log(2.0);
    }
    table.rows.push_back(row);
  }
  return table;
}

int n_from_area_h(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("n_from_area_h: h must be positive");
  return static_cast<int>(std::lround(1.0 / (h * std::sqrt(2.0))));
}

CflSweepResult run_cfl_sweep(const ManufacturedCase& c, const std::vector<double>& hx_list,
                             const std::vector<double>& ht_list, double T) {
  CflSweepResult sweep;
  sweep.h_t = ht_list;
  for (double hx : hx_list) {
    const int n = n_from_area_h(hx);
    sweep.n_per_side.push_back(n);
    sweep.h_x.push_back(std::sqrt(1.0 / (2.0 * double(n) * n)));
  }

  for (std::size_t i = 0; i < sweep.n_per_side.size(); ++i) {
    const int n = sweep.n_per_side[i];
    const TriMesh mesh = build_structured_mesh(Rect{0, 0, 1, 1}, n);
    const EdgeDofMap dofmap = EdgeDofMap::interior(mesh);
    const SpatialMatrices spatial = assemble_spatial(mesh, c.material, dofmap);
    const double lambda_max = max_generalized_eigenvalue(spatial.A_xx, spatial.M_x);

    std::vector<SweepCell> row;
    for (double ht : ht_list) {
      const int n_t = std::max(1, static_cast<int>(std::lround(T / ht)));
      ProblemData p = make_problem(c, n, n_t, T);
      const SolutionCoefficients sol = solve(p);
      SweepCell cell;
      cell.err_l2 = error_L2Q(sol, c);
      cell.err_semi = error_seminorm(sol, c);
      cell.q_predicted = lambda_max * (T / n_t) * (T / n_t);
      cell.predicted_stable = classify(cell.q_predicted, StabilityCriterion::strict_no_band);
      row.push_back(cell);
    }
    sweep.cells.push_back(std::move(row));
  }

  double finest_stable = std::numeric_limits<double>::infinity();
  for (const auto& row : sweep.cells) {
    for (const auto& cell : row) {
      if (cell.predicted_stable) finest_stable = std::min(finest_stable, cell.err_l2);
    }
  }
  if (!std::isfinite(finest_stable)) return sweep;
  for (auto& row : sweep.cells) {
    for (auto& cell : row) cell.blown_up = cell.err_l2 > 1e3 * finest_stable;
  }
  return sweep;
}

void convergence_to_csv(const ConvergenceTable& table, std::ostream& out) {
  out << "level,h_x,h_t,n_dofs,err_l2,eoc_l2,err_semi,eoc_semi\n";
  char line[200];
  for (const auto& r : table.rows) {
    std::snprintf(line, sizeof line, "%d,%.4f,%.4f,%ld,%.6e,%.2f,%.6e,%.2f\n", r.level, r.h_x,
                  r.h_t, r.n_dofs, r.err_l2, r.eoc_l2, r.err_semi, r.eoc_semi);
    out << line;
  }
}

void convergence_to_markdown(const ConvergenceTable& table, std::ostream& out) {
  out << "| L | h_x | h_t | dofs | L2(Q) error | EOC | Hcurl;1 seminorm | EOC |\n";
  out << "|---|-----|-----|------|-------------|-----|------------------|-----|\n";
  char line[220];
  for (const auto& r : table.rows) {
    char eoc1[16] = "-", eoc2[16] = "-";
    if (r.eoc_l2 != 0.0) std::snprintf(eoc1, sizeof eoc1, "%.2f", r.eoc_l2);
    if (r.eoc_semi != 0.0) std::snprintf(eoc2, sizeof eoc2, "%.2f", r.eoc_semi);
    std::snprintf(line, sizeof line, "| %d | %.4f | %.4f | %ld | %.5e | %s | %.5e | %s |\n",
                  r.level, r.h_x, r.h_t, r.n_dofs, r.err_l2, eoc1, r.err_semi, eoc2);
    out << line;
  }
}

void sweep_to_csv(const CflSweepResult& sweep, std::ostream& out) {
  out << "h_x,n,h_t,err_l2,err_semi,q_predicted,predicted_stable,blown_up\n";
  char line[240];
  for (std::size_t i = 0; i < sweep.cells.size(); ++i) {
    for (std::size_t j = 0; j < sweep.h_t.size(); ++j) {
      const SweepCell& cell = sweep.cells[i][j];
      std::snprintf(line, sizeof line, "%.4f,%d,%.4f,%.6e,%.6e,%.6e,%d,%d\n", sweep.h_x[i],
                    sweep.n_per_side[i], sweep.h_t[j], cell.err_l2, cell.err_semi,
                    cell.q_predicted, cell.predicted_stable ? 1 : 0, cell.blown_up ? 1 : 0);
      out << line;
    }
  }
}

void sweep_to_markdown(const CflSweepResult& sweep, std::ostream& out) {
  out << "| h_x \\ h_t |";
  char buf[64];
  for (double ht : sweep.h_t) {
    std::snprintf(buf, sizeof buf, " %.4f |", ht);
    out << buf;
  }
  out << "\n|---|";
  for (std::size_t j = 0; j < sweep.h_t.size(); ++j) out << "---|";
  out << "\n";
  for (std::size_t i = 0; i < sweep.cells.size(); ++i) {
    std::snprintf(buf, sizeof buf, "| %.4f |", sweep.h_x[i]);
    out << buf;
    for (const auto& cell : sweep.cells[i]) {
      std::snprintf(buf, sizeof buf, " %.3e%s |", cell.err_l2, cell.blown_up ? " (!)" : "");
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace stwave
