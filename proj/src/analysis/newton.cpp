#include "crnctl/analysis/newton.hpp"

#include <cmath>
#include <sstream>

#include "crnctl/crn/kinetics.hpp"
#include "crnctl/crn/linear_form.hpp"
#include "crnctl/error.hpp"

namespace crnctl::analysis {

NonlinearEquilibrium solve_equilibrium_nonlinear(const crn::Network& network, const Eigen::VectorXd& guess,
                                                 const NewtonOptions& options) {
  const auto n = static_cast<Eigen::Index>(network.size());
  if (guess.size() != n) throw Error("Newton guess has wrong dimension");
  if (!(guess.array() > 0.0).all()) throw Error("Newton guess must be strictly positive");
  const crn::Kinetics kin(network);

  Eigen::VectorXd x = guess;
  Eigen::VectorXd f(n);
  Eigen::VectorXd trial_f(n);
  Eigen::MatrixXd jac;
  kin.rhs(x, f);
  auto converged = [&](const Eigen::VectorXd& state, const Eigen::VectorXd& r) {
    return r.lpNorm<Eigen::Infinity>() < options.tolerance * (1.0 + state.lpNorm<Eigen::Infinity>());
  };

  int iter = 0;
  while (!converged(x, f)) {
    if (iter >= options.max_iterations) {
      std::ostringstream msg;
      msg << "Newton did not converge after " << iter << " iterations (residual " << f.lpNorm<Eigen::Infinity>() << ")";
      throw Error(msg.str());
    }
    ++iter;
    kin.jacobian(x, jac);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) throw Error("Newton step hit a singular Jacobian");
    const Eigen::VectorXd step = lu.solve(-f);
    const double current = f.lpNorm<Eigen::Infinity>();
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h, t *= 0.5) {
      const Eigen::VectorXd trial = x + t * step;
      if (!(trial.array() > 0.0).all()) continue;
      kin.rhs(trial, trial_f);
      if (trial_f.lpNorm<Eigen::Infinity>() < current || converged(trial, trial_f)) {
        x = trial;
        f = trial_f;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      const Eigen::VectorXd full = x + step;
      if (!(full.array() > 0.0).all()) {
        throw Error("Newton iteration is driven to a non-positive point");
      }
      throw Error("Newton line search failed to reduce the residual");
    }
  }

  NonlinearEquilibrium out;
  out.state = x;
  out.iterations = iter;
  out.residual = f.lpNorm<Eigen::Infinity>();
  kin.jacobian(x, jac);
  out.spectrum = crn::eigenvalues(jac);
  out.stable = crn::spectral_abscissa(out.spectrum) < -crn::kHurwitzMargin;
  return out;
}

NonlinearEquilibrium solve_equilibrium_nonlinear(const controller::ClosedLoop& closed_loop,
                                                 const Eigen::VectorXd& guess, const NewtonOptions& options) {
  return solve_equilibrium_nonlinear(closed_loop.network(), guess, options);
}

}  // namespace crnctl::analysis
