#include "stokes/wavefield.hpp"

#include <cmath>
#include <numbers>

#include "stokes/errors.hpp"

namespace stokes {

namespace {

using LD = long double;
using SpecL = SpectrumT<LD>;
using SampL = SamplesT<LD>;

LD flat_symbol_ld(const Depth& depth, int k) {
  if (depth.is_infinite()) return static_cast<LD>(std::abs(k));
  return static_cast<LD>(k) * std::tanh(static_cast<LD>(depth.value()) * static_cast<LD>(k));
}

double spectrum_norm(const SpecL& s) {
  LD sum = std::norm(s[0]);
  for (Eigen::Index k = 1; k < s.size(); ++k) sum += 2 * std::norm(s[k]);
  return static_cast<double>(std::sqrt(sum));
}

}  // namespace

Spectrum flat_dno_apply(const PhysicalParams& p, const Spectrum& psi) {
  Spectrum out(psi.size());
  out[0] = 0;
  for (Eigen::Index k = 1; k < psi.size(); ++k) out[k] = flat_dno_symbol(p.depth, static_cast<double>(k)) * psi[k];
  return out;
}

Spectrum dno_apply(const PhysicalParams& p, const SpectralGrid& grid, const Spectrum& eta, const Spectrum& psi,
                   DnoReport* report) {
  DnoOptions options;
  options.order = grid.dno_order();
  return dno_apply(p, grid, eta, psi, options, report);
}

Spectrum dno_apply(const PhysicalParams& p, const SpectralGrid& grid, const Spectrum& eta, const Spectrum& psi,
                   const DnoOptions& options, DnoReport* report) {
  const int band = static_cast<int>(eta.size()) - 1;
  if (psi.size() != eta.size()) throw MisuseError("dno_apply: eta and psi have different bands");
  const int n = std::max(grid.n_collocation(), 3 * band + 1);
  const int max_order = std::max(options.order, options.adaptive ? options.max_order : options.order);

  std::vector<LD> sym0(band + 1);
  for (int k = 0; k <= band; ++k) sym0[k] = flat_symbol_ld(p.depth, k);

  // A_n has symbol k^n for even n and k^(n-1) G_0(k) for odd n.
  auto apply_a = [&](int order, SpecL s) {
    for (int k = 0; k <= band; ++k) {
      const LD kk = static_cast<LD>(k);
      const LD sym = order % 2 == 0 ? std::pow(kk, order) : std::pow(kk, order - 1) * sym0[k];
      s[k] *= sym;
    }
    return s;
  };

  const SpecL eta_l = eta.cast<std::complex<LD>>();
  const SpecL psi_l = psi.cast<std::complex<LD>>();
  const SampL eta_p = to_physical<LD>(eta_l, n);

  // eta^m / m! on the grid, built lazily.
  std::vector<SampL> eta_pow{SampL::Ones(n)};
  auto eta_power = [&](int m) -> const SampL& {
    while (static_cast<int>(eta_pow.size()) <= m) {
      const int next = static_cast<int>(eta_pow.size());
      eta_pow.push_back(eta_pow.back().cwiseProduct(eta_p) / static_cast<LD>(next));
    }
    return eta_pow[m];
  };

  const SampL psi_x = to_physical<LD>(derivative<LD>(psi_l), n);

  SpecL g0 = psi_l;
  for (int k = 0; k <= band; ++k) g0[k] *= sym0[k];
  g0[0] = 0;

  std::vector<SampL> terms_phys{to_physical<LD>(g0, n)};
  SpecL total = g0;
  std::vector<double> norms{spectrum_norm(g0)};
  const double first = norms[0];
  int grow_streak = 0;

  for (int m = 1; m <= max_order; ++m) {
    // -A_{m-1} d/dx (eta^m/m! psi_x)
    SpecL term = -apply_a(m - 1, derivative<LD>(to_spectral<LD>(eta_power(m).cwiseProduct(psi_x), band)));
    for (int j = 1; j <= m; ++j) {
      term -= apply_a(j, to_spectral<LD>(eta_power(j).cwiseProduct(terms_phys[m - j]), band));
    }
    term[0] = 0;
    total += term;
    const double nm = spectrum_norm(term);
    norms.push_back(nm);

    if (m >= options.order) {
      if (first == 0.0 || nm <= options.rel_tol * first) break;
      if (!options.adaptive) break;
    }
    const double prev = norms[m - 1];
    grow_streak = (m >= 2 && prev > 0 && nm >= prev && nm > 1e-15 * first) ? grow_streak + 1 : 0;
    if (grow_streak >= 2 || (options.adaptive && m == max_order)) {
      nlohmann::json diag = {{"term_norms", norms}, {"order", m}};
      throw ExpansionDivergence("dno_apply: Dirichlet-Neumann series is not converging", diag);
    }
    terms_phys.push_back(to_physical<LD>(term, n));
  }

  if (report) {
    report->terms_used = static_cast<int>(norms.size());
    report->term_norms = norms;
  }
  Spectrum out = total.cast<std::complex<double>>();
  out[0] = 0;
  return out;
}

double hamiltonian(const PhysicalParams& p, const SpectralGrid& grid, const Spectrum& eta, const Spectrum& psi) {
  const int n = grid.n_collocation();
  const Spectrum gpsi = dno_apply(p, grid, eta, psi);
  const Samples e = to_physical(eta, n);
  const Samples ex = to_physical<double>(derivative<double>(eta), n);
  const Samples ps = to_physical(psi, n);
  const Samples px = to_physical<double>(derivative<double>(psi), n);
  const Samples gp = to_physical(gpsi, n);
  double sum = 0.0;
  for (int m = 0; m < n; ++m) {
    const double slope = ex[m] * ex[m];
    const double capillary = slope / (std::sqrt(1.0 + slope) + 1.0);  // sqrt(1+s) - 1
    sum += 0.5 * (ps[m] * gp[m] + p.g * e[m] * e[m]) + p.kappa * capillary +
           0.5 * p.gamma * (-px[m] * e[m] * e[m] + p.gamma / 3.0 * e[m] * e[m] * e[m]);
  }
  return 2.0 * std::numbers::pi * sum / n;
}

SurfaceState wahlen_forward(const PhysicalParams& p, const Spectrum& eta, const Spectrum& psi) {
  Spectrum zeta = psi - 0.5 * p.gamma * antiderivative<double>(eta);
  return SurfaceState(eta, zeta);
}

std::pair<Spectrum, Spectrum> wahlen_backward(const PhysicalParams& p, const SurfaceState& u) {
  Spectrum psi = u.zeta + 0.5 * p.gamma * antiderivative<double>(u.eta);
  return {u.eta, psi};
}

double hamiltonian_wahlen(const PhysicalParams& p, const SpectralGrid& grid, const SurfaceState& u) {
  const auto [eta, psi] = wahlen_backward(p, u);
  return hamiltonian(p, grid, eta, psi) / (2.0 * std::numbers::pi);
}

double momentum(const SurfaceState& u) { return mean_product(derivative<double>(u.eta), u.zeta); }

SurfaceState residual(const PhysicalParams& p, const SpectralGrid& grid, double c, const SurfaceState& u,
                      DnoReport* report) {
  const int band = u.n_modes();
  const int n = grid.n_collocation();
  const auto [eta, psi] = wahlen_backward(p, u);
  const Spectrum gpsi = dno_apply(p, grid, eta, psi, report);

  const Spectrum eta_x = derivative<double>(eta);
  const Spectrum psi_x = derivative<double>(psi);
  const Samples e = to_physical(eta, n);
  const Samples ex = to_physical(eta_x, n);
  const Samples px = to_physical(psi_x, n);
  const Samples gp = to_physical(gpsi, n);

  Samples quad(n), curv(n), eta_sq(n);
  for (int m = 0; m < n; ++m) {
    const double slope = 1.0 + ex[m] * ex[m];
    const double normal = ex[m] * px[m] + gp[m];
    quad[m] = -0.5 * px[m] * px[m] + normal * normal / (2.0 * slope) + p.gamma * e[m] * px[m];
    curv[m] = ex[m] / std::sqrt(slope);
    eta_sq[m] = 0.5 * e[m] * e[m];
  }

  // eta_t = G psi + gamma eta eta_x, the last term written as a derivative so its mean vanishes
  Spectrum eta_t = gpsi + p.gamma * derivative<double>(to_spectral<double>(eta_sq, band));
  eta_t[0] = 0;

  Spectrum psi_t = -p.g * eta + to_spectral<double>(quad, band) +
                   p.kappa * derivative<double>(to_spectral<double>(curv, band)) +
                   p.gamma * antiderivative<double>(gpsi);
  // Mean part of gamma dx^{-1} grad_psi H, absent from the explicit G psi form.
  psi_t[0] -= 0.5 * p.gamma * p.gamma * mean_product(eta, eta);
  Spectrum zeta_t = psi_t - 0.5 * p.gamma * antiderivative<double>(eta_t);

  SurfaceState out(c * eta_x + eta_t, c * derivative<double>(u.zeta) + zeta_t);
  out.eta[0] = 0;
  return out;
}

ModeSymbols mode_symbols(const PhysicalParams& p, double c, int k) {
  const double kk = static_cast<double>(k);
  const double g0 = flat_dno_symbol(p.depth, kk);
  const double a = p.g + p.kappa * kk * kk + p.gamma * p.gamma * g0 / (4.0 * kk * kk);
  const std::complex<double> s(0.0, kk * c - p.gamma * g0 / (2.0 * kk));
  return {g0, a, s};
}

SurfaceState linearized_apply(const PhysicalParams& p, double c, const SurfaceState& u) {
  SurfaceState out(u.n_modes());
  out.eta[0] = 0;
  out.zeta[0] = -p.g * u.eta[0];
  for (int k = 1; k <= u.n_modes(); ++k) {
    const auto [g0, a, s] = mode_symbols(p, c, k);
    out.eta[k] = s * u.eta[k] + g0 * u.zeta[k];
    out.zeta[k] = -a * u.eta[k] + s * u.zeta[k];
  }
  return out;
}

AnalyticityFit analyticity_diagnostic(const Spectrum& f, double floor) {
  double scale = 0.0;
  for (Eigen::Index k = 1; k < f.size(); ++k) scale = std::max(scale, std::abs(f[k]));
  AnalyticityFit fit;
  if (scale == 0.0) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (Eigen::Index k = 1; k < f.size(); ++k) {
    const double mag = std::abs(f[k]);
    if (mag <= floor * scale) continue;
    const double x = static_cast<double>(k), y = std::log(mag);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  fit.modes_used = count;
  if (count < 2) return fit;
  const double denom = count * sxx - sx * sx;
  const double slope = (count * sxy - sx * sy) / denom;
  fit.decay_rate = -slope;
  fit.log_prefactor = (sy - slope * sx) / count;
  return fit;
}

}  // namespace stokes
