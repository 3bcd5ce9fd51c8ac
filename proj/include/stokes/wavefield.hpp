#pragma once

#include <utility>
#include <vector>

#include "stokes/dispersion.hpp"
#include "stokes/spectral.hpp"
#include "stokes/state.hpp"

namespace stokes {

/// k tanh(h k) or |k| applied mode by mode; the mean is mapped to zero.
Spectrum flat_dno_apply(const PhysicalParams& p, const Spectrum& psi);

struct DnoReport {
  int terms_used = 0;
  /// ell^2 norm of each Taylor term G_m(eta) psi.
  std::vector<double> term_norms;
};

/// Taylor truncation control for the Dirichlet-Neumann series.
struct DnoOptions {
  int order = 6;              ///< terms 0..order are always summed
  bool adaptive = true;       ///< keep adding terms until the last one is below rel_tol
  double rel_tol = 1e-13;     ///< relative to ||G_0 psi||
  int max_order = 60;
};

/// G(eta) psi by the Craig-Sulem recursion, evaluated in extended precision
/// with every product truncated to the band of eta. Throws
/// ExpansionDivergence when the term norms stop decaying.
Spectrum dno_apply(const PhysicalParams& p, const SpectralGrid& grid, const Spectrum& eta, const Spectrum& psi,
                   DnoReport* report = nullptr);
Spectrum dno_apply(const PhysicalParams& p, const SpectralGrid& grid, const Spectrum& eta, const Spectrum& psi,
                   const DnoOptions& options, DnoReport* report = nullptr);

/// Independent check of dno_apply: solves the Laplace problem through a
/// conformal map of the fluid domain onto a flat strip.
Spectrum dno_conformal(const PhysicalParams& p, const Spectrum& eta, const Spectrum& psi, int n_points = 1024,
                       double tol = 1e-14, int max_iter = 500);

/// Raw integral over [0, 2 pi) of the energy density.
double hamiltonian(const PhysicalParams& p, const SpectralGrid& grid, const Spectrum& eta, const Spectrum& psi);

/// zeta = psi - (gamma/2) dx^{-1} Pi_0^perp eta.
SurfaceState wahlen_forward(const PhysicalParams& p, const Spectrum& eta, const Spectrum& psi);
/// Returns (eta, psi).
std::pair<Spectrum, Spectrum> wahlen_backward(const PhysicalParams& p, const SurfaceState& u);

/// H o W divided by 2 pi.
double hamiltonian_wahlen(const PhysicalParams& p, const SpectralGrid& grid, const SurfaceState& u);

/// (1/2 pi) int eta_x zeta dx.
double momentum(const SurfaceState& u);

/// F(c, u) = c u_x + J grad H(u), computed from the evolution equations in
/// the (eta, psi) variables and pulled back through the Wahlén map.
SurfaceState residual(const PhysicalParams& p, const SpectralGrid& grid, double c, const SurfaceState& u,
                      DnoReport* report = nullptr);

/// L_c at the flat state applied to a direction.
SurfaceState linearized_apply(const PhysicalParams& p, double c, const SurfaceState& u);

/// Per-mode symbols of L_c at wavenumber k > 0: L = [[s, g0], [-a, s]],
/// s = i k c - i gamma g0 / (2k).
struct ModeSymbols {
  double g0;
  double a;
  std::complex<double> s;
};
ModeSymbols mode_symbols(const PhysicalParams& p, double c, int k);

struct AnalyticityFit {
  double decay_rate = 0.0;  ///< sigma in |c_k| ~ C e^{-sigma k}
  double log_prefactor = 0.0;
  int modes_used = 0;
};

/// Least-squares fit of log |c_k| against k over coefficients above the noise floor.
AnalyticityFit analyticity_diagnostic(const Spectrum& f, double floor = 1e-14);

}  // namespace stokes
