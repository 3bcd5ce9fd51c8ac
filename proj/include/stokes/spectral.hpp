#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Core>

#include "stokes/dispersion.hpp"

namespace stokes {

/// Half spectrum of a real 2 pi-periodic function:
///   f(x) = sum_{|k| <= N} c_k e^{ikx},  c_{-k} = conj(c_k),
/// stored for k = 0..N.
template <class Real>
using SpectrumT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using SamplesT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Spectrum = SpectrumT<double>;
using Samples = SamplesT<double>;

/// Discretization: highest retained wavenumber N, number of collocation points
/// used for products (at least 3N, so quadratic and cubic terms are not
/// aliased into the retained band) and the default Taylor order of the
/// Dirichlet-Neumann expansion.
class SpectralGrid {
public:
  explicit SpectralGrid(int n_modes, int n_collocation = 0, int dno_order = 6);

  int n_modes() const noexcept { return n_modes_; }
  int n_collocation() const noexcept { return n_collocation_; }
  int dno_order() const noexcept { return dno_order_; }

  friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;

private:
  int n_modes_;
  int n_collocation_;
  int dno_order_;
};

/// Values at x_m = 2 pi m / n, m = 0..n-1. Requires n > 2 N.
template <class Real>
SamplesT<Real> to_physical(const SpectrumT<Real>& s, int n);

/// Fourier coefficients k = 0..n_modes of equispaced samples.
template <class Real>
SpectrumT<Real> to_spectral(const SamplesT<Real>& f, int n_modes);

/// Product of two band-limited functions, evaluated on n points and truncated
/// back to the band of `a`.
Spectrum multiply(const Spectrum& a, const Spectrum& b, int n);

/// d/dx.
template <class Real>
SpectrumT<Real> derivative(const SpectrumT<Real>& s) {
  SpectrumT<Real> out(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) out[k] = std::complex<Real>(0, Real(k)) * s[k];
  return out;
}

/// Zero-mean primitive of the zero-mean part (the mean is discarded).
template <class Real>
SpectrumT<Real> antiderivative(const SpectrumT<Real>& s) {
  SpectrumT<Real> out(s.size());
  out[0] = 0;
  for (Eigen::Index k = 1; k < s.size(); ++k) out[k] = s[k] / std::complex<Real>(0, Real(k));
  return out;
}

/// Symbol of the flat-surface Dirichlet-Neumann operator: k tanh(h k) or |k|.
double flat_dno_symbol(const Depth& depth, double k);

/// (1/2pi) int f g dx for real f, g given by half spectra.
double mean_product(const Spectrum& f, const Spectrum& g);

/// sqrt((1/2pi) int f^2 dx).
double l2_norm(const Spectrum& f);

}  // namespace stokes
