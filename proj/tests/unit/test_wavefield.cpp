#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "stokes/errors.hpp"
#include "stokes/wavefield.hpp"

using namespace stokes;

namespace {

PhysicalParams capillary_vortical() { return {1.0, Depth::finite(1.5), 0.3, 0.5}; }

Spectrum small_profile(int n, double amp, std::mt19937_64& rng) {
  Spectrum eta = random_state(n, amp, rng).zeta;  // mean-free
  return eta;
}

}  // namespace

TEST_SUITE("wavefield") {
  TEST_CASE("flat Dirichlet-Neumann operator") {
    const PhysicalParams p = capillary_vortical();
    const Spectrum psi = trig_mode(8, 3, 1.0, 0.0);
    const Spectrum g = flat_dno_apply(p, psi);
    CHECK(g[3].real() == doctest::Approx(0.5 * 3 * std::tanh(4.5)));
    const Spectrum eta = Spectrum::Zero(9);
    CHECK((dno_apply(p, SpectralGrid(8), eta, psi) - g).norm() <= 1e-15);
  }

  TEST_CASE("deep-water harmonic function gives the exact normal derivative") {
    // phi = e^{k y} cos(k x) restricted to y = eta(x)
    const PhysicalParams p;
    const int n = 64, m = 256, k = 2;
    Spectrum eta = Spectrum::Zero(n + 1);
    eta[1] = {0.01, -0.004};
    eta[3] = {0.002, 0.001};
    const Samples e = to_physical(eta, m), ex = to_physical(Spectrum(derivative(eta)), m);
    Samples psi(m), expected(m);
    for (int i = 0; i < m; ++i) {
      const double x = 2 * std::numbers::pi * i / m, w = std::exp(k * e[i]);
      psi[i] = w * std::cos(k * x);
      expected[i] = k * w * std::cos(k * x) + ex[i] * k * w * std::sin(k * x);
    }
    const Spectrum g = dno_apply(p, SpectralGrid(n), eta, to_spectral(psi, n));
    const Spectrum want = to_spectral(expected, n);
    CHECK(l2_norm(g - want) <= 1e-12 * l2_norm(want));
  }

  TEST_CASE("first-order shape derivative") {
    // G(eps eta) psi = G0 psi - eps (d_x eta d_x + G0 eta G0) psi + O(eps^2)
    const PhysicalParams p = capillary_vortical();
    const SpectralGrid grid(32);
    std::mt19937_64 rng(1);
    const Spectrum eta = small_profile(32, 1.0, rng), psi = random_state(32, 1.0, rng).zeta;
    const int m = grid.n_collocation();
    const Spectrum g0psi = flat_dno_apply(p, psi);
    const Spectrum g1 = Spectrum(-derivative(Spectrum(multiply(eta, derivative(psi), m)))) -
                        flat_dno_apply(p, multiply(eta, g0psi, m));
    double prev = 0.0;
    for (double eps : {1e-3, 5e-4}) {
      const Spectrum d = (dno_apply(p, grid, Spectrum(eps * eta), psi) - g0psi) / eps;
      const double err = l2_norm(d - g1);
      if (prev > 0) CHECK(err / prev == doctest::Approx(0.5).epsilon(0.05));
      prev = err;
    }
  }

  TEST_CASE("agreement with the conformal-map oracle") {
    std::mt19937_64 rng(2);
    for (const PhysicalParams& p : {PhysicalParams{}, capillary_vortical()}) {
      const Spectrum eta = small_profile(64, 0.02, rng), psi = random_state(64, 1.0, rng).zeta;
      const Spectrum a = dno_apply(p, SpectralGrid(64), eta, psi);
      const Spectrum b = dno_conformal(p, eta, psi);
      CHECK(l2_norm(a - b) <= 1e-10 * l2_norm(a));
    }
  }

  TEST_CASE("symmetry, zero mean and adaptive truncation") {
    std::mt19937_64 rng(3);
    const PhysicalParams p = capillary_vortical();
    const SpectralGrid grid(32);
    const Spectrum eta = small_profile(32, 0.05, rng);
    const Spectrum a = random_state(32, 1.0, rng).zeta, b = random_state(32, 1.0, rng).zeta;
    DnoReport rep;
    const Spectrum ga = dno_apply(p, grid, eta, a, &rep);
    const Spectrum gb = dno_apply(p, grid, eta, b);
    CHECK(std::abs(mean_product(b, ga) - mean_product(a, gb)) <= 1e-13);
    CHECK(std::abs(ga[0]) <= 1e-15);
    CHECK(rep.terms_used >= grid.dno_order());
    CHECK(rep.term_norms.back() <= 1e-13 * rep.term_norms.front());
  }

  TEST_CASE("large surfaces make the series diverge") {
    const PhysicalParams p;
    Spectrum eta = Spectrum::Zero(17);
    eta[1] = 1.5;
    const Spectrum psi = trig_mode(16, 2, 1.0, 0.0);
    CHECK_THROWS_AS(dno_apply(p, SpectralGrid(16), eta, psi), ExpansionDivergence);
  }

  TEST_CASE("Wahlen map round trip and momentum") {
    std::mt19937_64 rng(4);
    const PhysicalParams p = capillary_vortical();
    const SurfaceState u = random_state(16, 1.0, rng);
    const auto [eta, psi] = wahlen_backward(p, u);
    const SurfaceState back = wahlen_forward(p, eta, psi);
    CHECK((back - u).norm() <= 1e-15);
    SurfaceState v(4);
    v.eta = trig_mode(4, 1, 1.0, 0.0);
    v.zeta = trig_mode(4, 1, 0.0, 1.0);
    CHECK(momentum(v) == doctest::Approx(-0.5));
  }

  TEST_CASE("residual vanishes at rest and linearizes to L_c") {
    const PhysicalParams p = capillary_vortical();
    const SpectralGrid grid(16);
    const double c = 0.8;
    CHECK(residual(p, grid, c, SurfaceState(16)).norm() == 0.0);
    std::mt19937_64 rng(5);
    const SurfaceState d = random_state(16, 1.0, rng);
    const double h = 1e-6;
    const SurfaceState fd = (1.0 / (2 * h)) * (residual(p, grid, c, h * d) - residual(p, grid, c, (-h) * d));
    CHECK((fd - linearized_apply(p, c, d)).norm() <= 1e-8);
  }

  TEST_CASE("residual is the symplectic gradient of H + c I") {
    const PhysicalParams p = capillary_vortical();
    const SpectralGrid grid(24);
    std::mt19937_64 rng(6);
    const SurfaceState u = random_state(24, 0.03, rng), d = random_state(24, 1.0, rng);
    const double c = 0.4;
    auto energy = [&](double t) {
      const SurfaceState w = u + t * d;
      return hamiltonian_wahlen(p, grid, w) + c * momentum(w);
    };
    const double h = 1e-4;
    const double fd = (8 * (energy(h) - energy(-h)) - (energy(2 * h) - energy(-2 * h))) / (12 * h);
    const SurfaceState f = residual(p, grid, c, u);
    const double exact = mean_product(f.eta, d.zeta) - mean_product(f.zeta, d.eta);
    CHECK(std::abs(fd - exact) <= 1e-7 * std::abs(exact));
  }

  TEST_CASE("mode symbols") {
    const PhysicalParams p = capillary_vortical();
    const ModeSymbols s = mode_symbols(p, 0.9, 2);
    CHECK(s.g0 == doctest::Approx(2 * std::tanh(3.0)));
    CHECK(s.a == doctest::Approx(1.0 + 0.3 * 4 + 0.25 * s.g0 / 16));
  }

  TEST_CASE("analyticity fit") {
    Spectrum f(30);
    for (int k = 0; k < 30; ++k) f[k] = 3.0 * std::exp(-0.7 * k);
    const AnalyticityFit fit = analyticity_diagnostic(f);
    CHECK(fit.decay_rate == doctest::Approx(0.7));
    CHECK(fit.log_prefactor == doctest::Approx(std::log(3.0)));
  }
}
