#include "crnctl/analysis/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "crnctl/error.hpp"

namespace crnctl::analysis {

Polynomial::Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) {}

int Polynomial::degree() const {
  for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
    if (c_[static_cast<std::size_t>(i)] != 0.0) return i;
  }
  return -1;
}

double Polynomial::coefficient(int power) const {
  if (power < 0 || power >= static_cast<int>(c_.size())) return 0.0;
  return c_[static_cast<std::size_t>(power)];
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::trimmed(double relative_tol) const {
  double scale = 0.0;
  for (double v : c_) scale = std::max(scale, std::abs(v));
  std::vector<double> out = c_;
  while (!out.empty() && std::abs(out.back()) <= relative_tol * scale) out.pop_back();
  return Polynomial(std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> out(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return Polynomial();
  std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Polynomial(std::move(out));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<double> out = p.c_;
  for (double& v : out) v *= s;
  return Polynomial(std::move(out));
}

std::vector<std::complex<double>> Polynomial::roots() const {
  const int n = degree();
  if (n < 0) throw Error("roots of the zero polynomial are undefined");
  if (n == 0) return {};
  const double lead = c_[static_cast<std::size_t>(n)];
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c_[static_cast<std::size_t>(i)] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error("companion eigenvalue computation failed");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

ImaginaryAxisSplit split_on_imaginary_axis(const Polynomial& p) {
  // (j w)^i = j^i w^i with j^i cycling 1, j, -1, -j.
  const auto& c = p.coefficients();
  std::vector<double> re(c.size(), 0.0);
  std::vector<double> im(c.size(), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    switch (i % 4) {
      case 0: re[i] = c[i]; break;
      case 1: im[i] = c[i]; break;
      case 2: re[i] = -c[i]; break;
      default: im[i] = -c[i]; break;
    }
  }
  return {Polynomial(std::move(re)), Polynomial(std::move(im))};
}

Polynomial even_part_in_square(const Polynomial& q) {
  const auto& c = q.coefficients();
  std::vector<double> out((c.size() + 1) / 2, 0.0);
  for (std::size_t i = 0; i < c.size(); i += 2) out[i / 2] = c[i];
  return Polynomial(std::move(out));
}

}  // namespace crnctl::analysis
