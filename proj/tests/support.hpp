#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crnctl/crn/linear_form.hpp"
#include "crnctl/crn/network.hpp"

namespace crnctl::testing {

/// Nominal gene-expression rates (mRNA, protein, mature protein).
struct GeneRates {
  double gm = 1.2337;
  double kp = 1.4513;
  double gp = 3.0155;
  double kq = 2.3679;
  double gq = 1.1114;
};

inline crn::Network gene_expression(const GeneRates& r = {}) {
  return crn::build_network({{"m", 0.0}, {"p", 0.0}, {"q", 0.0}},
                            {{"mrna_degradation", {{"m", 1}}, {}, r.gm},
                             {"translation", {{"m", 1}}, {{"m", 1}, {"p", 1}}, r.kp},
                             {"protein_degradation", {{"p", 1}}, {}, r.gp},
                             {"maturation", {{"p", 1}}, {{"q", 1}}, r.kq},
                             {"mature_degradation", {{"q", 1}}, {}, r.gq}},
                            "q", "m");
}

/// g = k_p k_q / (g_m (g_p + k_q) g_q).
inline double gene_gain(const GeneRates& r = {}) { return r.kp * r.kq / (r.gm * (r.gp + r.kq) * r.gq); }

struct DimerRates {
  double g1 = 1.0;
  double k12 = 1.0;
  double g2 = 2.0;
  double k21 = 2.0;
};

inline crn::Network dimerization(const DimerRates& r = {}) {
  return crn::build_network({{"x1", 0.0}, {"x2", 0.0}},
                            {{"monomer_degradation", {{"x1", 1}}, {}, r.g1},
                             {"dimerization", {{"x1", 2}}, {{"x2", 1}}, r.k12},
                             {"dimer_degradation", {{"x2", 1}}, {}, r.g2},
                             {"dissociation", {{"x2", 1}}, {{"x1", 2}}, r.k21}},
                            "x2", "x1");
}

/// Positive equilibrium of the controlled dimerization read off its rate equations:
/// x2 = mu, k12 x1^2 = (g2 + k21) mu, k v = g1 x1 + 2 g2 mu.
inline Eigen::Vector3d dimer_equilibrium(const DimerRates& r, double mu, double k) {
  const double x1 = std::sqrt(mu * (r.g2 + r.k21) / r.k12);
  return {x1, mu, (r.g1 * x1 + 2.0 * r.g2 * mu) / k};
}

inline crn::Network birth_death(double kb, double gamma, double x0 = 0.0) {
  std::vector<crn::ReactionSpec> reactions;
  if (kb > 0.0) reactions.push_back({"birth", {}, {{"x", 1}}, kb});
  reactions.push_back({"degradation", {{"x", 1}}, {}, gamma});
  return crn::build_network({{"x", x0}}, reactions, "x", "x");
}

/// Central finite-difference Jacobian.
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd jac(f(x).size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    Eigen::VectorXd up = x, down = x;
    up[j] += h;
    down[j] -= h;
    jac.col(j) = (f(up) - f(down)) / (2.0 * h);
  }
  return jac;
}

/// Random Hurwitz Metzler state matrix with a chain 0 -> 1 -> ... -> d-1 so that
/// input e_0 reaches output e_{d-1}. Columns are strictly diagonally dominant.
inline Eigen::MatrixXd random_hurwitz_metzler(int d, std::mt19937_64& rng, double density = 0.4) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      if (i == j + 1) {
        a(i, j) = 0.2 + 2.0 * unit(rng);
      } else if (unit(rng) < density) {
        a(i, j) = unit(rng);
      }
    }
  }
  for (int j = 0; j < d; ++j) a(j, j) = -(a.col(j).sum() + 0.05 + unit(rng));
  return a;
}

inline double max_real_part(const Eigen::MatrixXd& m) {
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  return solver.eigenvalues().real().maxCoeff();
}

/// Closed-loop matrix at the positive equilibrium assembled from scratch:
/// [[A, B k], [-alpha v* C, 0]] with v* = mu / (g k), g = -C A^{-1} B.
inline Eigen::MatrixXd oracle_closed_loop_matrix(const Eigen::MatrixXd& A, const Eigen::VectorXd& B,
                                                 const Eigen::RowVectorXd& C, double mu, double alpha,
                                                 double k = 1.0) {
  const Eigen::Index d = A.rows();
  const double g = -(C * A.fullPivLu().solve(B))(0);
  const double v_star = mu / (g * k);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d + 1, d + 1);
  m.topLeftCorner(d, d) = A;
  m.topRightCorner(d, 1) = B * k;
  m.bottomLeftCorner(1, d) = -alpha * v_star * C;
  return m;
}

/// Smallest alpha at which the closed-loop abscissa turns nonnegative, found by a
/// geometric scan over [1e-6, 1e6] followed by bisection; +inf if it never does.
inline double alpha_bar_by_bisection(const Eigen::MatrixXd& A, const Eigen::VectorXd& B,
                                     const Eigen::RowVectorXd& C, double mu) {
  auto chi = [&](double alpha) { return max_real_part(oracle_closed_loop_matrix(A, B, C, mu, alpha)); };
  const int points = 3000;
  const double lo_exp = -6.0, hi_exp = 6.0;
  double prev = std::pow(10.0, lo_exp);
  for (int i = 1; i <= points; ++i) {
    const double alpha = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / points);
    if (chi(alpha) >= 0.0) {
      double lo = prev, hi = alpha;
      for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (chi(mid) >= 0.0 ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = alpha;
  }
  return std::numeric_limits<double>::infinity();
}

inline double relative_difference(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Directory holding the shipped scenario files.
inline std::string scenario_path(const std::string& name) {
  return std::string(CRNCTL_SOURCE_DIR) + "/scenarios/" + name + ".json";
}

}  // namespace crnctl::testing
