#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "stwave/temporal_fem.hpp"

namespace stwave {

/// Damped modal oscillator c'' + beta c' + lambda c = f with c(0) = alpha0,
/// c'(0) = v0. If `poly_forcing` is non-empty it takes precedence over
/// `forcing` and enables the closed-form particular solution (degree <= 3).
struct ModalProblem {
  double beta = 0.0;
  double lambda = 0.0;
  double alpha0 = 0.0;
  double v0 = 0.0;
  std::vector<double> poly_forcing;            // f(t) = sum_k poly_forcing[k] t^k
  std::function<double(double)> forcing;       // general f, integrated adaptively
};

struct ModalValue {
  double value;
  double derivative;
};

/// Closed-form solution value and derivative at time t. All damping regimes
/// (overdamped, critical, underdamped, beta = 0, lambda = 0) share one
/// analytic evaluation that stays stable near the critical discriminant.
ModalValue solve_modal(const ModalProblem& p, double t);

/// Max residual |c'' + beta c' + lambda c - f| over the sample times, with the
/// derivatives taken by central finite differences of the closed form.
double residual_check(const ModalProblem& p, const std::vector<double>& sample_times,
                      double fd_step = 1e-4);

/// Petrov-Galerkin-in-time solution of the modal problem with quadratic trial
/// functions: (-A_tt + beta A_t + lambda M_t) a = rhs.
struct DiscreteModalSolution {
  TimePartition partition;
  Eigen::VectorXd nodal;  // trial coefficients kappa = 1..2N
  double alpha0 = 0.0;

  /// Value of the discrete solution at global quadratic node g (0..2N).
  double node_value(int g) const { return g == 0 ? alpha0 : nodal[g - 1]; }
  double value(double t) const;
};

DiscreteModalSolution discrete_modal_solve(double lambda, double beta,
                                           const TimePartition& partition, double alpha0,
                                           double v0,
                                           const std::function<double(double)>& forcing = {});

}  // namespace stwave
