#include "crnctl/crn/kinetics.hpp"

#include <map>

namespace crnctl::crn {

namespace {

double ipow(double base, int exponent) {
  double result = 1.0;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace

Kinetics::Kinetics(const Network& network) : dimension_(network.size()) {
  const auto& reactions = network.reactions();
  rates_.reserve(reactions.size());
  factor_begin_.push_back(0);
  change_begin_.push_back(0);
  for (const auto& r : reactions) {
    rates_.push_back(r.rate_constant);
    theta_.push_back(r.hill ? r.hill->theta : 0.0);
    repressor_.push_back(r.hill ? r.hill->repressor : 0);

    std::map<std::size_t, int> powers;
    for (const auto& s : r.reactants) powers[s.species] += s.count;
    for (const auto& [species, power] : powers) {
      if (power > 0) factors_.push_back({species, power});
    }
    factor_begin_.push_back(factors_.size());

    std::map<std::size_t, int> delta;
    for (const auto& s : r.reactants) delta[s.species] -= s.count;
    for (const auto& s : r.products) delta[s.species] += s.count;
    for (const auto& [species, d] : delta) {
      if (d != 0) changes_.push_back({species, static_cast<double>(d)});
    }
    change_begin_.push_back(changes_.size());
  }
  inflow_ = network.inflow();
}

double Kinetics::mass_action_part(std::size_t reaction, const double* x) const {
  double value = rates_[reaction];
  for (std::size_t f = factor_begin_[reaction]; f < factor_begin_[reaction + 1]; ++f) {
    value *= ipow(x[factors_[f].species], factors_[f].power);
  }
  return value;
}

double Kinetics::propensity(std::size_t reaction, const double* x) const {
  double value = mass_action_part(reaction, x);
  if (theta_[reaction] > 0.0) {
    value *= theta_[reaction] / (theta_[reaction] + x[repressor_[reaction]]);
  }
  return value;
}

void Kinetics::rhs(const double* x, double* dxdt) const {
  for (std::size_t i = 0; i < dimension_; ++i) dxdt[i] = inflow_[static_cast<Eigen::Index>(i)];
  for (std::size_t r = 0; r < rates_.size(); ++r) {
    const double a = propensity(r, x);
    for (std::size_t c = change_begin_[r]; c < change_begin_[r + 1]; ++c) {
      dxdt[changes_[c].species] += changes_[c].delta * a;
    }
  }
}

void Kinetics::jacobian(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
  const auto n = static_cast<Eigen::Index>(dimension_);
  jac.setZero(n, n);
  Eigen::VectorXd grad(n);
  for (std::size_t r = 0; r < rates_.size(); ++r) {
    grad.setZero();
    const double hill = theta_[r] > 0.0 ? theta_[r] / (theta_[r] + x[repressor_[r]]) : 1.0;
    for (std::size_t f = factor_begin_[r]; f < factor_begin_[r + 1]; ++f) {
      double partial = rates_[r] * factors_[f].power * ipow(x[factors_[f].species], factors_[f].power - 1);
      for (std::size_t g = factor_begin_[r]; g < factor_begin_[r + 1]; ++g) {
        if (g != f) partial *= ipow(x[factors_[g].species], factors_[g].power);
      }
      grad[factors_[f].species] += hill * partial;
    }
    if (theta_[r] > 0.0) {
      const double denom = theta_[r] + x[repressor_[r]];
      grad[repressor_[r]] += mass_action_part(r, x.data()) * (-theta_[r] / (denom * denom));
    }
    for (std::size_t c = change_begin_[r]; c < change_begin_[r + 1]; ++c) {
      jac.row(changes_[c].species) += changes_[c].delta * grad.transpose();
    }
  }
}

}  // namespace crnctl::crn
