#pragma once

#include <Eigen/Dense>

#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/crn/linalg.hpp"

namespace crnctl::analysis {

struct NewtonOptions {
  int max_iterations = 100;
  int max_halvings = 40;
  /// Converged when ||rhs||_inf < tolerance * (1 + ||state||_inf).
  double tolerance = 1e-12;
};

struct NonlinearEquilibrium {
  Eigen::VectorXd state;
  crn::Spectrum spectrum;
  bool stable = false;
  int iterations = 0;
  double residual = 0.0;
};

/// Damped Newton root of the closed-loop reaction rate equations from a
/// strictly positive guess, with local stability from the Jacobian spectrum.
/// Throws on non-convergence or when the iterate leaves the positive orthant.
NonlinearEquilibrium solve_equilibrium_nonlinear(const controller::ClosedLoop& closed_loop,
                                                 const Eigen::VectorXd& guess, const NewtonOptions& options = {});

/// Same iteration for an arbitrary network.
NonlinearEquilibrium solve_equilibrium_nonlinear(const crn::Network& network, const Eigen::VectorXd& guess,
                                                 const NewtonOptions& options = {});

}  // namespace crnctl::analysis
