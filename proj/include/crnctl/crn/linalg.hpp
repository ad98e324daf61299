#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace crnctl::crn {

using Spectrum = std::vector<std::complex<double>>;

/// Eigenvalues of a real square matrix, sorted by decreasing real part
/// (ties broken by increasing imaginary part).
Spectrum eigenvalues(const Eigen::MatrixXd& m);

/// Maximum real part over the spectrum.
double spectral_abscissa(const Spectrum& spectrum);
double spectral_abscissa(const Eigen::MatrixXd& m);

/// Largest deviation between two spectra after pairing each eigenvalue
/// of `a` with its nearest unused eigenvalue of `b`.
double spectrum_distance(const Spectrum& a, const Spectrum& b);

}  // namespace crnctl::crn
