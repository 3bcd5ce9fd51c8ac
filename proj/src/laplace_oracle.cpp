// Dirichlet-Neumann operator through the conformal map of the fluid domain
// onto the strip {-hbar < v < 0}. On the surface v = 0 the map reads
// x = xi + X(xi), y = Y(xi) with X the (finite-depth) Hilbert transform of Y,
// and the pulled-back potential is harmonic in the strip, so the normal
// derivative is a Fourier multiplier in xi.
#include <cmath>
#include <numbers>

#include "stokes/errors.hpp"
#include "stokes/wavefield.hpp"

namespace stokes {

namespace {

// Real band-limited function given by its half spectrum, evaluated at x.
double evaluate(const Spectrum& f, double x) {
  double sum = f[0].real();
  const std::complex<double> step = std::polar(1.0, x);
  std::complex<double> phase = step;
  for (Eigen::Index k = 1; k < f.size(); ++k) {
    sum += 2.0 * (f[k] * phase).real();
    phase *= step;
  }
  return sum;
}

}  // namespace

Spectrum dno_conformal(const PhysicalParams& p, const Spectrum& eta, const Spectrum& psi, int n_points, double tol,
                       int max_iter) {
  const int band = static_cast<int>(eta.size()) - 1;
  const int n = n_points;
  const int half = n / 2 - 1;
  if (half < band) throw MisuseError("dno_conformal: too few points for the band");
  const bool deep = p.depth.is_infinite();

  Samples xi(n);
  for (int m = 0; m < n; ++m) xi[m] = 2.0 * std::numbers::pi * m / n;

  auto hilbert = [&](const Spectrum& y_hat, double hbar) {
    Spectrum x_hat(y_hat.size());
    x_hat[0] = 0;
    for (Eigen::Index k = 1; k < y_hat.size(); ++k) {
      const double kk = static_cast<double>(k);
      const double coth = deep ? 1.0 : 1.0 / std::tanh(kk * hbar);
      x_hat[k] = std::complex<double>(0.0, -coth) * y_hat[k];
    }
    return x_hat;
  };

  Samples y(n);
  for (int m = 0; m < n; ++m) y[m] = evaluate(eta, xi[m]);
  Samples x_shift = Samples::Zero(n);
  double hbar = deep ? 0.0 : p.depth.value();
  int iter = 0;
  double change = 0.0;
  for (; iter < max_iter; ++iter) {
    const Spectrum y_hat = to_spectral<double>(y, half);
    if (!deep) hbar = p.depth.value() + y_hat[0].real();
    x_shift = to_physical<double>(hilbert(y_hat, hbar), n);
    Samples next(n);
    for (int m = 0; m < n; ++m) next[m] = evaluate(eta, xi[m] + x_shift[m]);
    change = (next - y).cwiseAbs().maxCoeff();
    y = next;
    if (change <= tol) break;
  }
  if (change > tol) {
    throw NonConvergence("dno_conformal: conformal map iteration did not converge",
                         {{"iterations", iter}, {"last_change", change}});
  }

  Samples psi_on_surface(n);
  for (int m = 0; m < n; ++m) psi_on_surface[m] = evaluate(psi, xi[m] + x_shift[m]);
  Spectrum psi_hat = to_spectral<double>(psi_on_surface, half);
  psi_hat[0] = 0;
  for (Eigen::Index k = 1; k < psi_hat.size(); ++k) {
    const double kk = static_cast<double>(k);
    psi_hat[k] *= deep ? kk : kk * std::tanh(kk * hbar);
  }
  const Samples flux = to_physical(psi_hat, n);

  // G psi (x) dx = flux(xi) dxi, so its Fourier coefficients in x are plain
  // quadratures in xi.
  Spectrum out = Spectrum::Zero(band + 1);
  for (int m = 0; m < n; ++m) {
    const double xm = xi[m] + x_shift[m];
    const std::complex<double> step = std::polar(1.0, -xm);
    std::complex<double> phase = 1.0;
    for (int k = 0; k <= band; ++k) {
      out[k] += flux[m] * phase;
      phase *= step;
    }
  }
  out /= static_cast<double>(n);
  return out;
}

}  // namespace stokes
