#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "crnctl/crn/network.hpp"

namespace crnctl::crn {

/// Flattened mass-action evaluator used on hot paths (integrators, Newton).
/// Performs no validation of the state.
class Kinetics {
 public:
  explicit Kinetics(const Network& network);

  std::size_t dimension() const { return dimension_; }
  std::size_t reaction_count() const { return rates_.size(); }

  double propensity(std::size_t reaction, const double* x) const;
  void rhs(const double* x, double* dxdt) const;
  void rhs(const Eigen::VectorXd& x, Eigen::VectorXd& dxdt) const { rhs(x.data(), dxdt.data()); }
  void jacobian(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const;

 private:
  struct Factor {
    std::size_t species;
    int power;
  };
  struct Change {
    std::size_t species;
    double delta;
  };

  double mass_action_part(std::size_t reaction, const double* x) const;

  std::size_t dimension_ = 0;
  std::vector<double> rates_;
  std::vector<double> theta_;         // <= 0 means no Hill factor
  std::vector<std::size_t> repressor_;
  std::vector<std::size_t> factor_begin_;
  std::vector<Factor> factors_;
  std::vector<std::size_t> change_begin_;
  std::vector<Change> changes_;
  Eigen::VectorXd inflow_;
};

}  // namespace crnctl::crn
