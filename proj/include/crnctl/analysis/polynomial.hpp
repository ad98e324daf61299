#pragma once

#include <complex>
#include <vector>

namespace crnctl::analysis {

/// Real polynomial with coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  const std::vector<double>& coefficients() const { return c_; }
  /// Degree after ignoring exact trailing zeros; -1 for the zero polynomial.
  int degree() const;
  double coefficient(int power) const;

  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> z) const;

  Polynomial derivative() const;
  /// Drops leading coefficients below `relative_tol` times the largest magnitude.
  Polynomial trimmed(double relative_tol = 0.0) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);

  /// Complex roots from the eigenvalues of the companion matrix.
  std::vector<std::complex<double>> roots() const;

 private:
  std::vector<double> c_;
};

/// Splits p(j w) into real and imaginary parts, both as polynomials in w.
struct ImaginaryAxisSplit {
  Polynomial real;
  Polynomial imag;
};
ImaginaryAxisSplit split_on_imaginary_axis(const Polynomial& p);

/// Coefficients of q(w) = r(w^2) for an even polynomial q; odd coefficients must vanish.
Polynomial even_part_in_square(const Polynomial& q);

}  // namespace crnctl::analysis
