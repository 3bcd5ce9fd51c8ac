#include "stokes/state.hpp"

#include <cmath>

#include "stokes/errors.hpp"

namespace stokes {

SurfaceState::SurfaceState(int n_modes)
    : eta(Spectrum::Zero(n_modes + 1)), zeta(Spectrum::Zero(n_modes + 1)) {}

SurfaceState::SurfaceState(Spectrum eta_, Spectrum zeta_) : eta(std::move(eta_)), zeta(std::move(zeta_)) {
  if (eta.size() != zeta.size() || eta.size() < 1) throw MisuseError("SurfaceState: component sizes differ");
}

SurfaceState& SurfaceState::operator+=(const SurfaceState& o) {
  eta += o.eta;
  zeta += o.zeta;
  return *this;
}

SurfaceState& SurfaceState::operator-=(const SurfaceState& o) {
  eta -= o.eta;
  zeta -= o.zeta;
  return *this;
}

SurfaceState& SurfaceState::operator*=(double s) {
  eta *= s;
  zeta *= s;
  return *this;
}

double SurfaceState::norm() const {
  return std::sqrt(std::max(0.0, mean_product(eta, eta) + mean_product(zeta, zeta)));
}

bool SurfaceState::all_finite() const { return eta.allFinite() && zeta.allFinite(); }

SurfaceState SurfaceState::resized(int n_modes) const {
  SurfaceState out(n_modes);
  const int m = std::min(n_modes, this->n_modes());
  out.eta.head(m + 1) = eta.head(m + 1);
  out.zeta.head(m + 1) = zeta.head(m + 1);
  return out;
}

SurfaceState operator+(SurfaceState a, const SurfaceState& b) { return a += b; }
SurfaceState operator-(SurfaceState a, const SurfaceState& b) { return a -= b; }
SurfaceState operator*(double s, SurfaceState a) { return a *= s; }

Spectrum translate(const Spectrum& f, double theta) {
  Spectrum out(f.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) out[k] = f[k] * std::polar(1.0, -static_cast<double>(k) * theta);
  return out;
}

SurfaceState translate(const SurfaceState& u, double theta) {
  return SurfaceState(translate(u.eta, theta), translate(u.zeta, theta));
}

SurfaceState reflect(const SurfaceState& u) { return SurfaceState(u.eta.conjugate(), -u.zeta.conjugate()); }

namespace {

nlohmann::json spectrum_json(const Spectrum& s) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index k = 0; k < s.size(); ++k) arr.push_back({k, s[k].real(), s[k].imag()});
  return arr;
}

Spectrum spectrum_from_json(const nlohmann::json& arr, int n_modes) {
  Spectrum s = Spectrum::Zero(n_modes + 1);
  for (const auto& row : arr) {
    if (!row.is_array() || row.size() != 3) throw ConfigError("state JSON: entries must be [k, re, im]");
    const int k = row[0].get<int>();
    if (k < 0 || k > n_modes) throw ConfigError("state JSON: wavenumber out of range");
    s[k] = {row[1].get<double>(), row[2].get<double>()};
  }
  return s;
}

}  // namespace

nlohmann::json to_json(const SurfaceState& u) {
  return {{"N", u.n_modes()}, {"eta", spectrum_json(u.eta)}, {"zeta", spectrum_json(u.zeta)}};
}

SurfaceState state_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("N").get<int>();
    if (n < 1) throw ConfigError("state JSON: N must be positive");
    return SurfaceState(spectrum_from_json(j.at("eta"), n), spectrum_from_json(j.at("zeta"), n));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("state JSON: ") + e.what());
  }
}

Spectrum trig_mode(int n_modes, int k, double a_cos, double b_sin) {
  if (k < 0 || k > n_modes) throw MisuseError("trig_mode: wavenumber outside the band");
  Spectrum s = Spectrum::Zero(n_modes + 1);
  if (k == 0) {
    s[0] = a_cos;
  } else {
    s[k] = std::complex<double>(a_cos / 2, -b_sin / 2);
  }
  return s;
}

SurfaceState random_state(int n_modes, double amplitude, std::mt19937_64& rng, double decay) {
  std::normal_distribution<double> normal;
  SurfaceState u(n_modes);
  u.eta[0] = normal(rng);
  for (int k = 1; k <= n_modes; ++k) {
    const double s = std::exp(-decay * k);
    u.eta[k] = s * std::complex<double>(normal(rng), normal(rng));
    u.zeta[k] = s * std::complex<double>(normal(rng), normal(rng));
  }
  u *= amplitude / u.norm();
  return u;
}

}  // namespace stokes
