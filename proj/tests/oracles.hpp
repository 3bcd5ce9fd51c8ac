// Independent reference computations used only by the tests.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_50;

struct Params {
  double g = 1.0;
  std::optional<double> depth;  // empty: deep water
  double kappa = 0.0;
  double gamma = 0.0;
};

/// Omega_xi evaluated in 50-digit arithmetic straight from the closed form.
inline big omega(const Params& p, double xi_d) {
  const big xi = xi_d, g = p.g, kappa = p.kappa, gamma = p.gamma;
  if (!p.depth) {
    const big s = xi > 0 ? 1 : -1;
    return gamma / 2 * s + sqrt((g + kappa * xi * xi) * abs(xi) + gamma * gamma / 4);
  }
  const big t = tanh(big(*p.depth) * xi);
  return gamma / 2 * t + sqrt((g + kappa * xi * xi) * xi * t + gamma * gamma / 4 * t * t);
}

inline big phase_speed(const Params& p, double xi) { return omega(p, xi) / big(xi); }

/// (B+, B-) from the displayed definition; the gamma = 0 case is its limit.
inline std::pair<big, big> bond_numbers(const Params& p) {
  const big g = p.g, h = *p.depth, kappa = p.kappa, gamma = p.gamma;
  const big base = kappa / (g * h * h);
  if (p.gamma == 0) return {base, base};
  const big root = sqrt(1 + 4 * g / (h * gamma * gamma));
  const big pre = h * gamma * gamma / (6 * g);
  return {base - pre * (1 + root), base - pre * (1 - root)};
}

/// Brute-force kernel scan: every j of the sign of j_star with |j| <= j_max,
/// relative resonance test |Omega_j - c* j| <= tol max(1, |c* j|).
struct Scan {
  int dim = 2;
  std::optional<int> partner;
};

inline Scan brute_force_kernel(const Params& p, int j_star, int j_max, double tol) {
  const big c_star = phase_speed(p, j_star);
  Scan out;
  big best = 1e300;
  const int s = j_star > 0 ? 1 : -1;
  for (int m = 1; m <= j_max; ++m) {
    const int j = s * m;
    if (j == j_star) continue;
    const big cj = c_star * j;
    const big rel = abs(omega(p, j) - cj) / std::max(big(1), abs(cj));
    if (rel <= tol && rel < best) {
      best = rel;
      out.dim = 4;
      out.partner = j;
    }
  }
  return out;
}

/// Formal perturbation expansion of Babenko's equation for deep-water gravity
/// Stokes waves (g = 1, wavelength 2 pi), in conformal variables:
///   mu K y - y - (y K y + K(y^2) / 2) = 0,   K = |D|,  mu = c^2,
/// y = sum eps^n y_n with y_1 = cos, <y_n, cos> = 0 for n >= 2, and
/// mu = 1 + sum mu_n eps^n fixed order by order by solvability. Returns
/// mu_1 .. mu_{order-1}. Since the first physical harmonic is eps + O(eps^3),
/// c = 1 + (mu_2 / 2) a^2 + O(a^4).
inline std::vector<double> babenko_speed_coefficients(int order) {
  const int modes = order + 2;
  using Series = std::vector<double>;  // cosine coefficients, index = wavenumber
  auto product = [&](const Series& a, const Series& b) {
    Series out(modes + 1, 0.0);
    for (int i = 0; i <= modes; ++i) {
      for (int j = 0; j <= modes; ++j) {
        const double w = a[i] * b[j];
        if (w == 0.0) continue;
        // cos(i x) cos(j x) = (cos((i+j)x) + cos((i-j)x)) / 2, with the mean
        // stored as the plain coefficient of cos(0)
        const int s = i + j, d = std::abs(i - j);
        const double half = (i == 0 || j == 0) ? 1.0 : 0.5;
        if (s <= modes) out[s] += half * w;
        if (i != 0 && j != 0 && d <= modes) out[d] += half * w;
      }
    }
    return out;
  };
  auto apply_k = [&](Series a) {
    for (int k = 0; k <= modes; ++k) a[k] *= k;
    return a;
  };
  std::vector<Series> y(order + 1, Series(modes + 1, 0.0));
  std::vector<double> mu(order + 1, 0.0);
  y[1][1] = 1.0;
  for (int n = 2; n <= order; ++n) {
    // (K - 1) y_n = rhs_n - mu_{n-1} K y_1, with rhs_n everything else
    Series rhs(modes + 1, 0.0);
    for (int p = 1; p <= n - 2; ++p) {
      const Series ky = apply_k(y[n - p]);
      for (int k = 0; k <= modes; ++k) rhs[k] -= mu[p] * ky[k];
    }
    for (int p = 1; p < n; ++p) {
      const Series a = product(y[p], apply_k(y[n - p]));
      const Series b = apply_k(product(y[p], y[n - p]));
      for (int k = 0; k <= modes; ++k) rhs[k] += a[k] + 0.5 * b[k];
    }
    mu[n - 1] = rhs[1];  // solvability: the cos coefficient must vanish
    rhs[1] = 0.0;
    for (int k = 0; k <= modes; ++k) {
      if (k != 1) y[n][k] = rhs[k] / (k - 1.0);
    }
  }
  return {mu.begin() + 1, mu.begin() + order};
}

}  // namespace oracle
