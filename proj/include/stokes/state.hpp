#pragma once

#include <random>
#include <string>

#include <json.hpp>

#include "stokes/spectral.hpp"

namespace stokes {

/// Truncated Fourier representation of the Wahlén pair (eta, zeta), modes
/// k = 0..N of each component. Also used for residuals F(c,u), whose zeta
/// component may carry a mean.
struct SurfaceState {
  Spectrum eta;
  Spectrum zeta;

  SurfaceState() = default;
  explicit SurfaceState(int n_modes);
  SurfaceState(Spectrum eta_, Spectrum zeta_);

  int n_modes() const noexcept { return static_cast<int>(eta.size()) - 1; }

  SurfaceState& operator+=(const SurfaceState& o);
  SurfaceState& operator-=(const SurfaceState& o);
  SurfaceState& operator*=(double s);

  /// ell^2 norm over k in Z of both components.
  double norm() const;
  bool all_finite() const;

  /// Copy padded with zeros or truncated to n_modes.
  SurfaceState resized(int n_modes) const;
};

SurfaceState operator+(SurfaceState a, const SurfaceState& b);
SurfaceState operator-(SurfaceState a, const SurfaceState& b);
SurfaceState operator*(double s, SurfaceState a);

/// tau_theta u = u(. - theta).
SurfaceState translate(const SurfaceState& u, double theta);
/// S(eta, zeta)(x) = (eta(-x), -zeta(-x)).
SurfaceState reflect(const SurfaceState& u);

/// f(. - theta) for a single spectrum.
Spectrum translate(const Spectrum& f, double theta);

nlohmann::json to_json(const SurfaceState& u);
SurfaceState state_from_json(const nlohmann::json& j);

/// Spectrum holding a cos(kx) + b sin(kx).
/// Random smooth state with geometrically decaying modes (rate e^{-decay k}),
/// zero zeta mean, scaled to norm() == amplitude.
SurfaceState random_state(int n_modes, double amplitude, std::mt19937_64& rng, double decay = 0.5);

Spectrum trig_mode(int n_modes, int k, double a_cos, double b_sin);

}  // namespace stokes
