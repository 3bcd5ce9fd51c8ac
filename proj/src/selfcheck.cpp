#include "stokes/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "stokes/reduction.hpp"
#include "stokes/state.hpp"
#include "stokes/wavefield.hpp"

namespace stokes {

bool SelfCheckReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const SelfCheckItem& i) { return i.passed; });
}

nlohmann::json SelfCheckReport::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& i : items) {
    checks.push_back({{"name", i.name}, {"value", i.value}, {"threshold", i.threshold}, {"passed", i.passed}});
  }
  return {{"passed", passed()}, {"checks", checks}};
}

namespace {

class Recorder {
public:
  explicit Recorder(SelfCheckReport& r) : report_(r) {}
  void add(const std::string& name, double worst, double threshold) {
    report_.items.push_back({name, worst, threshold, std::isfinite(worst) && worst <= threshold});
  }

private:
  SelfCheckReport& report_;
};

double rel(double err, double scale) { return err / std::max(scale, 1e-300); }

ReducedVector random_kernel_vector(const KernelData& k, double size, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ReducedVector v(k);
  for (Eigen::Index i = 0; i < v.x.size(); ++i) v.x[i] = normal(rng);
  v.x *= size / v.star_norm();
  return v;
}

// Directional derivative of H + c I along d, by the pairing with F.
double pairing(const SurfaceState& f, const SurfaceState& d) {
  return mean_product(f.eta, d.zeta) - mean_product(f.zeta, d.eta);
}

}  // namespace

SelfCheckReport run_selfcheck(const PhysicalParams& p, const SpectralGrid& grid, int j_star, int trials,
                              std::uint64_t seed) {
  SelfCheckReport report;
  Recorder rec(report);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const int n = grid.n_modes();
  const KernelData k = kernel_basis(p, grid, j_star);
  const double c = k.c_star + 0.1;

  double idem = 0, compl_ = 0, orth = 0, precond = 0;
  for (int t = 0; t < trials; ++t) {
    const SurfaceState u = random_state(n, 1.0, rng);
    const SurfaceState pv = project_V(k, u), pw = project_W(k, u);
    idem = std::max(idem, (project_V(k, pv) - pv).norm());
    orth = std::max(orth, project_V(k, pw).norm());
    compl_ = std::max(compl_, (pv + pw - u).norm());
    SurfaceState r = project_W(k, random_state(n, 1.0, rng));
    r.eta[0] = 0.0;
    const SurfaceState x = preconditioner_apply(k, r);
    precond = std::max(precond, rel((project_W(k, linearized_apply(p, k.c_star, x)) - r).norm(), r.norm()));
  }
  rec.add("projector_idempotent", idem, 1e-12);
  rec.add("projector_orthogonal", orth, 1e-12);
  rec.add("projector_complement", compl_, 1e-12);
  rec.add("preconditioner_inverse", precond, 1e-10);

  double lin = 0.0;
  for (int j : k.modes) {
    for (int which : {1, 2}) lin = std::max(lin, linearized_apply(p, k.c_star, basis_vector(k, j, which)).norm());
  }
  rec.add("linear_kernel", lin, 1e-12);

  double grad = 0, oracle = 0, sym = 0, mean = 0, trans = 0, refl = 0, invariants = 0;
  for (int t = 0; t < trials; ++t) {
    const SurfaceState u = random_state(n, 0.02, rng);
    const SurfaceState d = random_state(n, 1.0, rng);
    const SurfaceState f = residual(p, grid, c, u);
    auto energy = [&](double h) {
      const SurfaceState uh = u + h * d;
      return hamiltonian_wahlen(p, grid, uh) + c * momentum(uh);
    };
    const double h = 1e-4;
    const double fd = (8 * (energy(h) - energy(-h)) - (energy(2 * h) - energy(-2 * h))) / (12 * h);
    const double exact = pairing(f, d);
    grad = std::max(grad, rel(std::abs(fd - exact), std::abs(exact)));

    Spectrum eta = u.eta;
    eta[0] = 0.0;
    const Spectrum psi = random_state(n, 1.0, rng).zeta;
    const Spectrum phi = random_state(n, 1.0, rng).zeta;
    const Spectrum g_psi = dno_apply(p, grid, eta, psi);
    const Spectrum g_conf = dno_conformal(p, eta, psi, std::max(1024, 16 * n));
    oracle = std::max(oracle, rel(l2_norm(g_psi - g_conf), l2_norm(g_psi)));
    const Spectrum g_phi = dno_apply(p, grid, eta, phi);
    sym = std::max(sym, std::abs(mean_product(phi, g_psi) - mean_product(psi, g_phi)));
    mean = std::max(mean, std::abs(g_psi[0]));

    const double theta = angle(rng);
    const double scale = std::max(1.0, f.norm());
    trans = std::max(trans, (residual(p, grid, c, translate(u, theta)) - translate(f, theta)).norm() / scale);
    refl = std::max(refl, (residual(p, grid, c, reflect(u)) + reflect(f)).norm() / scale);
    const double h0 = hamiltonian_wahlen(p, grid, u), i0 = momentum(u);
    for (const SurfaceState& g : {translate(u, theta), reflect(u)}) {
      invariants = std::max({invariants, std::abs(hamiltonian_wahlen(p, grid, g) - h0), std::abs(momentum(g) - i0)});
    }
  }
  rec.add("hamiltonian_gradient", grad, 1e-6);
  rec.add("dno_oracle", oracle, 1e-8);
  rec.add("dno_self_adjoint", sym, 1e-10);
  rec.add("dno_zero_mean", mean, 1e-10);
  rec.add("translation_equivariance", trans, 1e-10);
  rec.add("reflection_equivariance", refl, 1e-10);
  rec.add("energy_momentum_invariance", invariants, 1e-10);

  // reduced quantities near c*, where the range equation is contractive
  const double cr = k.c_star + 1e-3;
  double phi_inv = 0, c_inv = 0, grad_fd = 0;
  for (int t = 0; t < std::max(1, trials / 4); ++t) {
    const ReducedVector v = random_kernel_vector(k, 0.01, rng);
    const ReducedEval e = reduced_eval(k, grid, cr, v);
    const double theta = angle(rng);
    for (const ReducedVector& g : {rotate(v, theta), reflect(v)}) {
      phi_inv = std::max(phi_inv, std::abs(reduced_phi(k, grid, cr, g) - e.phi));
    }
    const double cv = c_of_v(k, grid, v);
    c_inv = std::max(c_inv, std::abs(c_of_v(k, grid, rotate(v, theta)) - cv));
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < v.x.size(); ++i) {
      ReducedVector vp = v, vm = v;
      vp.x[i] += h;
      vm.x[i] -= h;
      const double fd = (reduced_phi(k, grid, cr, vp) - reduced_phi(k, grid, cr, vm)) / (2 * h);
      grad_fd = std::max(grad_fd, rel(std::abs(fd - e.grad.x[i]), e.grad.x.norm()));
    }
  }
  rec.add("reduced_phi_invariance", phi_inv, 1e-10);
  rec.add("speed_invariance", c_inv, 1e-10);
  rec.add("reduced_gradient", grad_fd, 1e-6);
  return report;
}

}  // namespace stokes
