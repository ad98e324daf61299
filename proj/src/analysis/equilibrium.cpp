#include "crnctl/analysis/equilibrium.hpp"

#include <cmath>

#include "crnctl/error.hpp"

namespace crnctl::analysis {

Eigen::VectorXd EquilibriumPoint::stacked() const {
  Eigen::VectorXd out(x.size() + 1);
  out << x, v;
  return out;
}

EquilibriumPair equilibria(const crn::LinearForm& lf, const controller::ControllerParams& params,
                           const Eigen::VectorXd& d) {
  if (!(params.mu >= 0.0) || !(params.k > 0.0)) throw Error("equilibria require mu >= 0 and k > 0");
  Eigen::VectorXd w = lf.b;
  if (d.size() > 0) {
    if (d.size() != lf.E.cols()) throw Error("disturbance vector does not match E");
    w += lf.E * d;
  }
  const Eigen::VectorXd a_inv_b = crn::solve_state_matrix(lf.A, lf.B);
  const double cab = lf.C.dot(a_inv_b);
  const double scale = lf.C.cwiseAbs().dot(a_inv_b.cwiseAbs());
  if (!(std::abs(cab) > 1e-12 * scale) || scale == 0.0) {
    throw Error("output controllability violated: C A^-1 B = 0");
  }
  const Eigen::VectorXd a_inv_w = crn::solve_state_matrix(lf.A, w);

  EquilibriumPair pair;
  pair.static_gain = -cab;
  pair.zero.x = -a_inv_w;
  pair.zero.v = 0.0;
  pair.effective_reference = params.mu + lf.C.dot(a_inv_w);
  if (pair.effective_reference > 0.0) {
    EquilibriumPoint p;
    const double u_over_k = -pair.effective_reference / (cab * params.k);
    p.v = u_over_k;
    // x* = A^{-1}(B mu_eff / (C A^{-1} B) - w)
    p.x = a_inv_b * (pair.effective_reference / cab) - a_inv_w;
    pair.positive = p;
  } else if (params.mu == 0.0 && pair.effective_reference == 0.0) {
    pair.positive = pair.zero;
  }
  return pair;
}

}  // namespace crnctl::analysis
