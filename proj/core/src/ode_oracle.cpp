#include "stwave/ode_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "stwave/linalg.hpp"
#include "stwave/quadrature.hpp"

namespace stwave {

namespace {

// C(z,t) = cosh(sqrt(z) t) and S(z,t) = sinh(sqrt(z) t)/sqrt(z), continued
// analytically through z <= 0. Both are entire in z, so the series branch
// keeps the evaluation smooth across the critical discriminant z = 0.
struct Propagator {
  double c, s;
};

Propagator cs_functions(double z, double t) {
  const double zt2 = z * t * t;
  if (std::abs(zt2) < 1e-4) {
    double c = 1.0, s = 1.0, term_c = 1.0, term_s = 1.0;
    for (int k = 1; k <= 8; ++k) {
      term_c *= zt2 / ((2 * k) * (2 * k - 1));
      term_s *= zt2 / ((2 * k) * (2 * k + 1));
      c += term_c;
      s += term_s;
    }
    return {c, t * s};
  }
  if (z > 0) {
    const double w = std::sqrt(z);
    return {std::cosh(w * t), std::sinh(w * t) / w};
  }
  const double w = std::sqrt(-z);
  return {std::cos(w * t), std::sin(w * t) / w};
}

// Homogeneous solution with unit data handled through
//   c(t) = e^{-beta t/2} (alpha C(z,t) + (v + beta alpha/2) S(z,t)),
// z = beta^2/4 - lambda.
ModalValue homogeneous(double beta, double lambda, double alpha, double v, double t) {
  const double z = 0.25 * beta * beta - lambda;
  const auto [c, s] = cs_functions(z, t);
  const double m = v + 0.5 * beta * alpha;
  const double u = alpha * c + m * s;
  const double du = alpha * z * s + m * c;
  const double damp = std::exp(-0.5 * beta * t);
  return {damp * u, damp * (du - 0.5 * beta * u)};
}

// Green kernel G with G''+beta G'+lambda G = 0, G(0)=0, G'(0)=1.
double green(double beta, double lambda, double tau) {
  const double z = 0.25 * beta * beta - lambda;
  return std::exp(-0.5 * beta * tau) * cs_functions(z, tau).s;
}

double green_deriv(double beta, double lambda, double tau) {
  const double z = 0.25 * beta * beta - lambda;
  const auto [c, s] = cs_functions(z, tau);
  return std::exp(-0.5 * beta * tau) * (c - 0.5 * beta * s);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Particular polynomial solution for polynomial forcing. Coefficient index =
// power of t. Valid for deg(f) <= 3 per the public contract; the recurrences
// hold for any degree.
std::vector<double> particular_poly(double beta, double lambda, const std::vector<double>& f) {
  const int deg = static_cast<int>(f.size()) - 1;
  if (lambda > 0.0) {
    std::vector<double> p(deg + 1, 0.0);
    for (int k = deg; k >= 0; --k) {
      double rhs = f[k];
      if (k + 1 <= deg) rhs -= beta * (k + 1) * p[k + 1];
      if (k + 2 <= deg) rhs -= double(k + 1) * (k + 2) * p[k + 2];
      p[k] = rhs / lambda;
    }
    return p;
  }
  if (beta > 0.0) {
    // u = p' solves u' + beta u = f.
    std::vector<double> u(deg + 1, 0.0);
    for (int k = deg; k >= 0; --k) {
      double rhs = f[k];
      if (k + 1 <= deg) rhs -= (k + 1) * u[k + 1];
      u[k] = rhs / beta;
    }
    std::vector<double> p(deg + 2, 0.0);
    for (int k = 0; k <= deg; ++k) p[k + 1] = u[k] / (k + 1);
    return p;
  }
  std::vector<double> p(deg + 3, 0.0);
  for (int k = 0; k <= deg; ++k) p[k + 2] = f[k] / (double(k + 1) * (k + 2));
  return p;
}

double poly_eval(const std::vector<double>& p, double t) {
  double v = 0.0;
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) v = v * t + p[k];
  return v;
}

double poly_eval_deriv(const std::vector<double>& p, double t) {
  double v = 0.0;
  for (int k = static_cast<int>(p.size()) - 1; k >= 1; --k) v = v * t + k * p[k];
  return v;
}

}  // namespace

ModalValue solve_modal(const ModalProblem& p, double t) {
  if (!(p.beta >= 0.0) || !(p.lambda >= 0.0)) {
    throw std::invalid_argument("solve_modal: beta and lambda must be nonnegative");
  }
  if (!p.poly_forcing.empty()) {
    const std::vector<double> part = particular_poly(p.beta, p.lambda, p.poly_forcing);
    const ModalValue hom = homogeneous(p.beta, p.lambda, p.alpha0 - poly_eval(part, 0.0),
                                       p.v0 - poly_eval_deriv(part, 0.0), t);
    return {hom.value + poly_eval(part, t), hom.derivative + poly_eval_deriv(part, t)};
  }
  const ModalValue hom = homogeneous(p.beta, p.lambda, p.alpha0, p.v0, t);
  if (!p.forcing) return hom;
  const double tol = 1e-10;
  const double conv = integrate_adaptive(
      [&](double s) { return green(p.beta, p.lambda, t - s) * p.forcing(s); }, 0.0, t, tol);
  const double conv_d = integrate_adaptive(
      [&](double s) { return green_deriv(p.beta, p.lambda, t - s) * p.forcing(s); }, 0.0, t, tol);
  return {hom.value + conv, hom.derivative + conv_d};
}

double residual_check(const ModalProblem& p, const std::vector<double>& sample_times,
                      double fd_step) {
  double worst = 0.0;
  for (double t : sample_times) {
    const double cm = solve_modal(p, t - fd_step).value;
    const double c0 = solve_modal(p, t).value;
    const double cp = solve_modal(p, t + fd_step).value;
    const double d2 = (cp - 2.0 * c0 + cm) / (fd_step * fd_step);
    const double d1 = (cp - cm) / (2.0 * fd_step);
    double f = 0.0;
    if (!p.poly_forcing.empty()) {
      f = poly_eval(p.poly_forcing, t);
    } else if (p.forcing) {
      f = p.forcing(t);
    }
    worst = std::max(worst, std::abs(d2 + p.beta * d1 + p.lambda * c0 - f));
  }
  return worst;
}

DiscreteModalSolution discrete_modal_solve(double lambda, double beta,
                                           const TimePartition& partition, double alpha0,
                                           double v0,
                                           const std::function<double(double)>& forcing) {
  const TemporalMatrices tm = assemble_temporal(partition);
  const int n = partition.n_dofs();
  const Eigen::MatrixXd k = -tm.A_tt + beta * tm.A_t + lambda * tm.M_t;

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  if (forcing) {
    const auto rule = gauss_rule(5);
    for (int e = 0; e < partition.n_elements(); ++e) {
      const double h = partition.h(e);
      for (const auto& gp : rule) {
        const double t = partition.t_nodes[e] + gp.x * h;
        const double w = gp.w * h * forcing(t);
        double shape[3];
        quadratic_shape(gp.x, shape);
        for (int a = 0; a < 3; ++a) {
          const int g = 2 * e + a;
          if (g < n) rhs[g] += w * shape[a];  // test functions exclude the t=T node
        }
      }
    }
  }
  // Weak initial-velocity term: only the test function active at t=0.
  rhs[0] += v0;
  // Lift of the prescribed t=0 value through the kappa=0 columns.
  rhs -= (-tm.initial.a_tt + beta * tm.initial.a_t + lambda * tm.initial.m_t) * alpha0;

  DiscreteModalSolution sol;
  sol.partition = partition;
  sol.alpha0 = alpha0;
  sol.nodal = dense_lu_solve(k, rhs);
  return sol;
}

double DiscreteModalSolution::value(double t) const {
  const int n = partition.n_elements();
  int e = 0;
  while (e + 1 < n && t > partition.t_nodes[e + 1]) ++e;
  const double xi = (t - partition.t_nodes[e]) / partition.h(e);
  double shape[3];
  quadratic_shape(xi, shape);
  double v = 0.0;
  for (int a = 0; a < 3; ++a) v += shape[a] * node_value(2 * e + a);
  return v;
}

}  // namespace stwave
